#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcorr/basis.hpp"
#include "qcorr/optimizer.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

struct LocalMinimum {
  double value = 0.0;  // Lambda - S(rho), bits
  ProductBasisPoint basis;
  ComplexMatrix chi;   // dephased state on the grouped blocks
  int start_index = 0;
};

/// Relative entropy of discord found by the multi-start search. The value is
/// an upper bound on the true discord (the search may miss the global
/// minimum); it is never above the total mutual information because the
/// product eigenbasis of the block marginals is always one of the starts.
struct DiscordResult {
  std::string partition;
  double value = 0.0;
  double lambda = 0.0;
  double entropy = 0.0;
  ProductBasisPoint best_basis;
  /// Closest classical state, on the grouped blocks in partition order.
  MultipartiteState chi;
  /// Distinct local minima sorted by value.
  std::vector<LocalMinimum> local_minima;
  std::vector<std::string> start_labels;
  int starts_used = 0;
  bool converged = false;
};

/// Minimizes Lambda over product bases of the partition's blocks. Starts, in
/// order: computational basis, product eigenbasis of the block marginals,
/// Schmidt bases (pure two-block states only), then cfg.starts Haar-random
/// bases. Block dimensions above 4 throw DimensionError.
DiscordResult discord(const MultipartiteState& s, const Partition& part,
                      const OptimizerConfig& cfg = {});

/// Pure bipartite discord: entropy of the second block. Throws PurityError
/// when the two-block state is not pure and ParamError for != 2 blocks.
double discord_pure_bipartite(const MultipartiteState& s, const Partition& part);

std::vector<LocalMinimum> enumerate_local_minima(const MultipartiteState& s,
                                                 const Partition& part,
                                                 const OptimizerConfig& cfg = {});

MultipartiteState closest_classical_state(const DiscordResult& result);

/// Exact discord of the named three-qubit families where it is known in
/// closed form; nullopt otherwise.
std::optional<double> discord_closed_form(const FamilyTag& family, const Partition& part);

/// -p log2 p - (1-p) log2 (1-p)
double binary_entropy(double p);

}  // namespace qcorr
