#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcorr/linalg.hpp"

namespace qcorr {

/// Named family a state was built from; used to look up closed-form values.
struct FamilyTag {
  std::string family;
  std::map<std::string, double> params;

  double param(const std::string& key) const;
};

/// Density operator with an explicit factorization into local dimensions.
/// Party 0 is the leftmost tensor factor ("A"). Construction validates:
/// Hermitian, unit trace and positive semidefinite within 1e-9.
class MultipartiteState {
 public:
  MultipartiteState(std::vector<int> dims, ComplexMatrix rho, std::string label = {});

  static MultipartiteState from_pure(std::vector<int> dims, const ComplexVector& psi,
                                     std::string label = {});

  const std::vector<int>& dims() const { return dims_; }
  const ComplexMatrix& rho() const { return rho_; }
  const std::string& label() const { return label_; }
  int parties() const { return static_cast<int>(dims_.size()); }
  int dim() const { return static_cast<int>(rho_.rows()); }

  const std::optional<FamilyTag>& family() const { return family_; }
  MultipartiteState& set_family(FamilyTag tag);

  double purity() const;
  bool is_pure(double tol = 1e-9) const { return purity() >= 1.0 - tol; }

  /// State of the listed parties, ascending party order.
  MultipartiteState reduced(std::span<const int> keep) const;

 private:
  std::vector<int> dims_;
  ComplexMatrix rho_;
  std::string label_;
  std::optional<FamilyTag> family_;
};

/// Ordered grouping of parties into disjoint blocks, e.g. AB:C. Blocks need not
/// cover every party of a state; uncovered parties are traced out first.
class Partition {
 public:
  explicit Partition(std::vector<std::vector<int>> blocks);

  /// Parses "A:B:C", "AB:C", "BC:A", "A:C"; letters name parties 0, 1, ...
  static Partition parse(std::string_view text);
  static Partition singletons(int parties);

  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  /// Union of all blocks, ascending.
  std::vector<int> parties() const;
  int max_party() const;
  bool covers(int parties) const;

  /// Same blocks, ordered by their smallest party. Measures are symmetric
  /// under block reordering, so this is the cache key.
  Partition canonical() const;
  std::string to_string() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::vector<int>> blocks_;
};

/// The state restricted to the union of the partition's blocks, with tensor
/// factors regrouped so that each block is a single party (in block order).
MultipartiteState group_blocks(const MultipartiteState& s, const Partition& part);

/// Canonical five-amplitude form of a three-qubit pure state:
/// l0|000> + e^{i phi} l1|100> + l2|101> + l3|110> + l4|111>.
struct AcinParams {
  std::array<double, 5> lambda{1.0, 0.0, 0.0, 0.0, 0.0};
  double phi = 0.0;
};

MultipartiteState from_acin(const AcinParams& p);

/// Families: ghz, ghz_general{alpha2}, ghz_plus{p}, ghz_minus{p}, w,
/// w_general{alpha2,beta2,gamma2} or {p}, w_white{p}, ghz_white{p}, w_asym{p},
/// counterexample{p}. All parameters are squared-amplitude weights in [0,1].
MultipartiteState named_state(const std::string& family,
                              const std::map<std::string, double>& params = {});

std::vector<std::string> known_families();

enum class SamplingMethod { acin_uniform, haar };

SamplingMethod parse_sampling_method(std::string_view name);
std::string to_string(SamplingMethod m);

AcinParams sample_acin_params(std::uint64_t seed);
MultipartiteState sample_random_pure(std::uint64_t seed, SamplingMethod method);

/// Reduced state of a Haar-random pure state on (2x2x2) x ancilla(rank).
MultipartiteState sample_random_mixed(std::uint64_t seed, int rank);

/// |+> = (|0>+|1>)/sqrt2 and |-> = (|0>-|1>)/sqrt2.
ComplexVector ket(std::string_view symbols);

}  // namespace qcorr
