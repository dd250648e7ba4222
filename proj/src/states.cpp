#include "qcorr/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kValidationTol = 1e-9;

std::string format_params(const std::map<std::string, double>& params) {
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& [k, v] : params) {
    os << (first ? "" : ",") << k << '=' << v;
    first = false;
  }
  return os.str();
}

}  // namespace

double FamilyTag::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw ParamError("family '" + family + "' has no parameter '" + key + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// MultipartiteState

MultipartiteState::MultipartiteState(std::vector<int> dims, ComplexMatrix rho, std::string label)
    : dims_(std::move(dims)), rho_(std::move(rho)), label_(std::move(label)) {
  if (dims_.empty()) throw DimensionError("state needs at least one party");
  for (int d : dims_)
    if (d < 1) throw DimensionError("local dimensions must be positive");
  const int total = product(dims_);
  if (rho_.rows() != total || rho_.cols() != total)
    throw DimensionError("density matrix is " + std::to_string(rho_.rows()) + "x" +
                         std::to_string(rho_.cols()) + " but local dimensions multiply to " +
                         std::to_string(total));
  if (!all_finite(rho_)) throw StateValidationError("density matrix has non-finite entries");
  if (!is_hermitian(rho_, kValidationTol))
    throw StateValidationError("density matrix is not Hermitian");
  rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kValidationTol)
    throw StateValidationError("density matrix trace is " + std::to_string(tr) + ", expected 1");
  const auto es = hermitian_eig(rho_);
  if (es.eigenvalues.minCoeff() < -kValidationTol)
    throw StateValidationError("density matrix has a negative eigenvalue " +
                               std::to_string(es.eigenvalues.minCoeff()));
}

MultipartiteState MultipartiteState::from_pure(std::vector<int> dims, const ComplexVector& psi,
                                               std::string label) {
  const double n = psi.norm();
  if (std::abs(n - 1.0) > kValidationTol) throw ParamError("state vector is not normalized");
  return MultipartiteState(std::move(dims), psi * psi.adjoint(), std::move(label));
}

MultipartiteState& MultipartiteState::set_family(FamilyTag tag) {
  family_ = std::move(tag);
  return *this;
}

double MultipartiteState::purity() const { return (rho_ * rho_).trace().real(); }

MultipartiteState MultipartiteState::reduced(std::span<const int> keep) const {
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> kept_dims;
  for (int k : sorted) {
    if (k < 0 || k >= parties()) throw DimensionError("party index out of range");
    kept_dims.push_back(dims_[k]);
  }
  return MultipartiteState(std::move(kept_dims), partial_trace(rho_, dims_, sorted));
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.size() < 2) throw ParamError("a partition needs at least two blocks");
  std::set<int> seen;
  for (auto& b : blocks_) {
    if (b.empty()) throw ParamError("partition block is empty");
    std::sort(b.begin(), b.end());
    for (int p : b) {
      if (p < 0) throw ParamError("negative party index");
      if (!seen.insert(p).second) throw ParamError("partition blocks overlap");
    }
  }
}

Partition Partition::parse(std::string_view text) {
  std::vector<std::vector<int>> blocks(1);
  for (char c : text) {
    if (c == ':') {
      blocks.emplace_back();
    } else if (c >= 'A' && c <= 'Z') {
      blocks.back().push_back(c - 'A');
    } else if (c >= 'a' && c <= 'z') {
      blocks.back().push_back(c - 'a');
    } else {
      throw ParamError("invalid character in partition '" + std::string(text) + "'");
    }
  }
  return Partition(std::move(blocks));
}

Partition Partition::singletons(int parties) {
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < parties; ++i) blocks.push_back({i});
  return Partition(std::move(blocks));
}

std::vector<int> Partition::parties() const {
  std::vector<int> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

int Partition::max_party() const {
  int m = 0;
  for (const auto& b : blocks_) m = std::max(m, b.back());
  return m;
}

bool Partition::covers(int parties) const {
  return static_cast<int>(this->parties().size()) == parties && max_party() == parties - 1;
}

Partition Partition::canonical() const {
  auto blocks = blocks_;
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return Partition(std::move(blocks));
}

std::string Partition::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += ':';
    for (int p : blocks_[i]) out += static_cast<char>('A' + p);
  }
  return out;
}

MultipartiteState group_blocks(const MultipartiteState& s, const Partition& part) {
  if (part.max_party() >= s.parties())
    throw DimensionError("partition " + part.to_string() + " refers to a party the state lacks");
  const auto kept = part.parties();
  const ComplexMatrix reduced =
      kept.size() == static_cast<std::size_t>(s.parties()) ? s.rho()
                                                           : partial_trace(s.rho(), s.dims(), kept);
  std::vector<int> kept_dims;
  for (int p : kept) kept_dims.push_back(s.dims()[p]);

  // Position of each block party inside the ascending kept list.
  std::vector<int> order;
  std::vector<int> block_dims;
  for (const auto& b : part.blocks()) {
    int d = 1;
    for (int p : b) {
      order.push_back(static_cast<int>(std::lower_bound(kept.begin(), kept.end(), p) - kept.begin()));
      d *= s.dims()[p];
    }
    block_dims.push_back(d);
  }
  bool identity = true;
  for (std::size_t i = 0; i < order.size(); ++i) identity = identity && order[i] == static_cast<int>(i);
  ComplexMatrix grouped = identity ? reduced : permute_subsystems(reduced, kept_dims, order);
  return MultipartiteState(std::move(block_dims), std::move(grouped), s.label());
}

// ---------------------------------------------------------------------------
// Families

ComplexVector ket(std::string_view symbols) {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexVector out = ComplexVector::Ones(1);
  for (char c : symbols) {
    ComplexVector q(2);
    switch (c) {
      case '0': q << 1.0, 0.0; break;
      case '1': q << 0.0, 1.0; break;
      case '+': q << r, r; break;
      case '-': q << r, -r; break;
      default: throw ParamError(std::string("unknown ket symbol '") + c + "'");
    }
    out = kron(out, q);
  }
  return out;
}

MultipartiteState from_acin(const AcinParams& p) {
  double norm2 = 0.0;
  for (double l : p.lambda) {
    if (!(l >= 0.0)) throw ParamError("Acin amplitudes must be nonnegative");
    norm2 += l * l;
  }
  if (std::abs(norm2 - 1.0) > 1e-12) throw ParamError("Acin amplitudes are not normalized");
  ComplexVector psi = ComplexVector::Zero(8);
  psi(0b000) = p.lambda[0];
  psi(0b100) = std::polar(p.lambda[1], p.phi);
  psi(0b101) = p.lambda[2];
  psi(0b110) = p.lambda[3];
  psi(0b111) = p.lambda[4];
  psi /= psi.norm();
  return MultipartiteState::from_pure({2, 2, 2}, psi, "acin");
}

namespace {

using Params = std::map<std::string, double>;

void expect_keys(const std::string& family, const Params& params,
                 std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : params) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; }))
      throw ParamError("family '" + family + "' does not take parameter '" + k + "'");
    if (!(v >= 0.0 && v <= 1.0))
      throw ParamError("parameter '" + k + "' of '" + family + "' must lie in [0,1]");
  }
  for (const char* key : keys)
    if (!params.count(key))
      throw ParamError("family '" + family + "' requires parameter '" + key + "'");
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexVector w_vector() { return (ket("001") + ket("010") + ket("100")) / std::sqrt(3.0); }

ComplexVector ghz_vector() { return (ket("000") + ket("111")) / std::numbers::sqrt2; }

}  // namespace

std::vector<std::string> known_families() {
  return {"ghz",     "ghz_general", "ghz_plus",   "ghz_minus", "w",
          "w_general", "w_white",   "ghz_white", "w_asym",   "counterexample"};
}

MultipartiteState named_state(const std::string& family, const Params& params) {
  const std::vector<int> dims{2, 2, 2};
  const ComplexMatrix id8 = ComplexMatrix::Identity(8, 8);
  Params tagged = params;
  ComplexMatrix rho;

  if (family == "ghz") {
    expect_keys(family, params, {});
    rho = projector(ghz_vector());
  } else if (family == "ghz_general") {
    expect_keys(family, params, {"alpha2"});
    const double a2 = params.at("alpha2");
    rho = projector(std::sqrt(a2) * ket("000") + std::sqrt(1.0 - a2) * ket("111"));
  } else if (family == "ghz_plus" || family == "ghz_minus") {
    expect_keys(family, params, {"p"});
    const double p = params.at("p");
    rho = projector(std::sqrt(p) * ket("000") +
                    std::sqrt(1.0 - p) * ket(family == "ghz_plus" ? "+11" : "-11"));
  } else if (family == "w") {
    expect_keys(family, params, {});
    rho = projector(w_vector());
  } else if (family == "w_general") {
    double a2, b2, g2;
    if (params.count("p")) {
      expect_keys(family, params, {"p"});
      a2 = params.at("p");
      b2 = g2 = 0.5 * (1.0 - a2);
      tagged = {{"alpha2", a2}, {"beta2", b2}, {"gamma2", g2}};
    } else {
      expect_keys(family, params, {"alpha2", "beta2", "gamma2"});
      a2 = params.at("alpha2");
      b2 = params.at("beta2");
      g2 = params.at("gamma2");
    }
    if (std::abs(a2 + b2 + g2 - 1.0) > 1e-9)
      throw ParamError("w_general weights alpha2+beta2+gamma2 must sum to 1");
    rho = projector(std::sqrt(a2) * ket("001") + std::sqrt(b2) * ket("010") +
                    std::sqrt(g2) * ket("100"));
  } else if (family == "w_white" || family == "ghz_white") {
    expect_keys(family, params, {"p"});
    const double p = params.at("p");
    rho = (1.0 - p) * projector(family == "w_white" ? w_vector() : ghz_vector()) + (p / 8.0) * id8;
  } else if (family == "w_asym") {
    expect_keys(family, params, {"p"});
    const double p = params.at("p");
    rho = (1.0 - p) * projector(w_vector()) +
          (p / 2.0) * (projector(ket("000")) + projector(ket("1+1")));
  } else if (family == "counterexample") {
    expect_keys(family, params, {"p"});
    const double p = params.at("p");
    rho = p * projector(ket("000")) + (1.0 - p) * projector(ket("1+1"));
  } else {
    throw ParamError("unknown state family '" + family + "'");
  }

  std::string label = family;
  if (!params.empty()) label += "(" + format_params(params) + ")";
  MultipartiteState s(dims, std::move(rho), std::move(label));
  s.set_family({family, std::move(tagged)});
  return s;
}

// ---------------------------------------------------------------------------
// Sampling

SamplingMethod parse_sampling_method(std::string_view name) {
  if (name == "acin_uniform") return SamplingMethod::acin_uniform;
  if (name == "haar") return SamplingMethod::haar;
  throw ParamError("unknown sampling method '" + std::string(name) + "'");
}

std::string to_string(SamplingMethod m) {
  return m == SamplingMethod::acin_uniform ? "acin_uniform" : "haar";
}

AcinParams sample_acin_params(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  // Normalized exponentials are uniform on the simplex.
  std::array<double, 5> w{};
  double sum = 0.0;
  for (auto& x : w) sum += (x = expo(gen));
  AcinParams p;
  for (std::size_t i = 0; i < w.size(); ++i) p.lambda[i] = std::sqrt(w[i] / sum);
  p.phi = angle(gen);
  return p;
}

namespace {

ComplexVector gaussian_vector(std::mt19937_64& gen, int n) {
  std::normal_distribution<double> normal;
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(normal(gen), normal(gen));
  return v / v.norm();
}

}  // namespace

MultipartiteState sample_random_pure(std::uint64_t seed, SamplingMethod method) {
  if (method == SamplingMethod::acin_uniform) {
    auto s = from_acin(sample_acin_params(seed));
    return MultipartiteState(s.dims(), s.rho(), "acin_uniform#" + std::to_string(seed));
  }
  std::mt19937_64 gen(seed);
  return MultipartiteState::from_pure({2, 2, 2}, gaussian_vector(gen, 8),
                                      "haar#" + std::to_string(seed));
}

MultipartiteState sample_random_mixed(std::uint64_t seed, int rank) {
  if (rank < 1 || rank > 8) throw ParamError("rank must lie in [1, 8]");
  std::mt19937_64 gen(seed);
  const ComplexVector psi = gaussian_vector(gen, 8 * rank);
  const std::vector<int> dims{2, 2, 2, rank};
  const std::vector<int> keep{0, 1, 2};
  ComplexMatrix rho = partial_trace(psi * psi.adjoint(), dims, keep);
  return MultipartiteState({2, 2, 2}, std::move(rho),
                           "mixed_rank" + std::to_string(rank) + "#" + std::to_string(seed));
}

}  // namespace qcorr
