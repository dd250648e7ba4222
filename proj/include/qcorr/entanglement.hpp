#pragma once

#include <string>
#include <vector>

#include "qcorr/discord.hpp"
#include "qcorr/optimizer.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// sigma = sum_k w_k |psi_k><psi_k| with psi_k a product of one unit vector per block.
struct SeparableEnsemble {
  std::vector<int> dims;                         // block dimensions
  std::vector<double> weights;                   // on the simplex
  std::vector<std::vector<ComplexVector>> terms; // terms[k][b]

  ComplexVector term_vector(int k) const;
  ComplexMatrix density() const;
};

struct ReeConfig {
  int ensemble_size = 0;  // 0 -> (total dim)^2
  int restarts = 4;       // random ensembles on top of the seeded ones
  int max_iter = 3000;
  double tol = 1e-10;     // stop when one sweep improves the value by less
  std::uint64_t seed = 42;
};

struct ReeResult {
  double value = 0.0;  // upper bound on the relative entropy of entanglement, bits
  SeparableEnsemble ensemble;
  std::string seeded_from;
  bool converged = false;
};

/// Upper bound on min S(rho||sigma) over separable sigma on the partition's
/// blocks. Seeds: product of block marginals (value <= T), the closest
/// classical state of the discord search (value <= D*), product
/// approximations of rho's eigenvectors, then random ensembles. When
/// `chi_seed` is null the discord search is run with `cfg`.
/// Total dimension above 8 throws DimensionError.
ReeResult ree_upper_bound(const MultipartiteState& s, const Partition& part,
                          const OptimizerConfig& cfg = {}, const ReeConfig& ree_cfg = {},
                          const DiscordResult* chi_seed = nullptr);

/// Exact value for the cataloged families; CatalogMiss otherwise.
double ree_closed_form(const FamilyTag& family, const Partition& part);

/// Entropy of entanglement of a pure two-block state. PurityError otherwise.
double pure_bipartite_ree(const MultipartiteState& s, const Partition& part);

}  // namespace qcorr
