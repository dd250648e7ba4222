#include "qcorr/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"

namespace qcorr {

ComplexVector SeparableEnsemble::term_vector(int k) const {
  ComplexVector v = terms[k][0];
  for (std::size_t b = 1; b < terms[k].size(); ++b) v = kron(v, terms[k][b]);
  return v;
}

ComplexMatrix SeparableEnsemble::density() const {
  const int d = product(dims);
  ComplexMatrix sigma = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const ComplexVector v = term_vector(static_cast<int>(k));
    sigma.noalias() += weights[k] * v * v.adjoint();
  }
  return sigma;
}

namespace {

constexpr int kMaxTotalDim = 8;
constexpr double kPadding = 1e-3;
constexpr int kAlsSweeps = 50;

// S(rho||sigma) with sigma's spectrum floored at the clip, and optionally the
// operator Gamma whose expectation in a pure state is -ln2 times the
// derivative of the objective along that state's weight.
struct Evaluation {
  double value = 0.0;
  ComplexMatrix gamma;
};

class ReeObjective {
 public:
  explicit ReeObjective(const ComplexMatrix& rho) : rho_(rho), entropy_(von_neumann_entropy(rho)) {}

  Evaluation operator()(const ComplexMatrix& sigma, bool with_gamma) const {
    const auto es = hermitian_eig(sigma);
    const Eigen::Index n = es.eigenvalues.size();
    RealVector lam = es.eigenvalues.cwiseMax(kDefaultClip);
    const ComplexMatrix rt = es.eigenvectors.adjoint() * rho_ * es.eigenvectors;
    Evaluation e;
    double cross = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) cross -= rt(i, i).real() * std::log2(lam(i));
    e.value = cross - entropy_;
    if (!with_gamma) return e;
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double a = lam(i), b = lam(j);
        const double l = std::abs(a - b) > 1e-12 * std::max(a, b)
                             ? (std::log(a) - std::log(b)) / (a - b)
                             : 1.0 / a;
        m(i, j) = rt(i, j) * l;
      }
    e.gamma = es.eigenvectors * m * es.eigenvectors.adjoint();
    return e;
  }

 private:
  const ComplexMatrix& rho_;
  double entropy_;
};

// Contracts the full vector y with conj(v_c) on every block c != b.
ComplexVector contract_except(const ComplexVector& y, const std::vector<int>& dims,
                              const std::vector<ComplexVector>& v, int b) {
  const int n = static_cast<int>(dims.size());
  ComplexVector out = ComplexVector::Zero(dims[b]);
  std::vector<int> idx(n, 0);
  for (Eigen::Index flat = 0; flat < y.size(); ++flat) {
    Complex coef = y(flat);
    for (int c = 0; c < n; ++c)
      if (c != b) coef *= std::conj(v[c](idx[c]));
    out(idx[b]) += coef;
    for (int c = n - 1; c >= 0; --c) {
      if (++idx[c] < dims[c]) break;
      idx[c] = 0;
    }
  }
  return out;
}

ComplexVector random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

// Best product approximation of a vector by alternating least squares.
std::vector<ComplexVector> product_approximation(const ComplexVector& psi,
                                                 const std::vector<int>& dims) {
  std::vector<ComplexVector> v;
  for (int d : dims) v.push_back(ComplexVector::Unit(d, 0));
  // Start from the dominant column of each block's reduced operator.
  const ComplexMatrix proj = psi * psi.adjoint();
  for (std::size_t b = 0; b < dims.size(); ++b) {
    const int keep[] = {static_cast<int>(b)};
    const auto es = hermitian_eig(partial_trace(proj, dims, keep));
    v[b] = es.eigenvectors.col(dims[b] - 1);
  }
  for (int sweep = 0; sweep < kAlsSweeps; ++sweep)
    for (std::size_t b = 0; b < dims.size(); ++b) {
      const ComplexVector next = contract_except(psi, dims, v, static_cast<int>(b));
      if (next.norm() < 1e-14) break;
      v[b] = next.normalized();
    }
  return v;
}

struct Candidate {
  SeparableEnsemble ensemble;
  std::string label;
};

SeparableEnsemble marginals_seed(const MultipartiteState& g) {
  SeparableEnsemble e{g.dims(), {}, {}};
  std::vector<HermitianEigenSystem> marg;
  for (int b = 0; b < g.parties(); ++b) {
    const int keep[] = {b};
    marg.push_back(hermitian_eig(partial_trace(g.rho(), g.dims(), keep)));
  }
  std::vector<int> idx(g.parties(), 0);
  for (int flat = 0; flat < g.dim(); ++flat) {
    double w = 1.0;
    std::vector<ComplexVector> term;
    for (int b = 0; b < g.parties(); ++b) {
      w *= std::max(marg[b].eigenvalues(idx[b]), 0.0);
      term.push_back(marg[b].eigenvectors.col(idx[b]));
    }
    e.weights.push_back(w);
    e.terms.push_back(std::move(term));
    for (int b = g.parties() - 1; b >= 0; --b) {
      if (++idx[b] < g.dims()[b]) break;
      idx[b] = 0;
    }
  }
  return e;
}

SeparableEnsemble classical_seed(const MultipartiteState& g, const DiscordResult& d) {
  SeparableEnsemble e{g.dims(), {}, {}};
  const auto p = basis_diagonal(g.rho(), d.best_basis.unitary());
  std::vector<ComplexMatrix> frames;
  for (int b = 0; b < g.parties(); ++b) frames.push_back(d.best_basis.block_unitary(b));
  std::vector<int> idx(g.parties(), 0);
  for (int flat = 0; flat < g.dim(); ++flat) {
    std::vector<ComplexVector> term;
    for (int b = 0; b < g.parties(); ++b) term.push_back(frames[b].col(idx[b]));
    e.weights.push_back(std::max(p[flat], 0.0));
    e.terms.push_back(std::move(term));
    for (int b = g.parties() - 1; b >= 0; --b) {
      if (++idx[b] < g.dims()[b]) break;
      idx[b] = 0;
    }
  }
  return e;
}

SeparableEnsemble eigen_product_seed(const MultipartiteState& g) {
  SeparableEnsemble e{g.dims(), {}, {}};
  const auto es = hermitian_eig(g.rho());
  for (Eigen::Index j = 0; j < es.eigenvalues.size(); ++j) {
    if (es.eigenvalues(j) <= kDefaultClip) continue;
    e.weights.push_back(es.eigenvalues(j));
    e.terms.push_back(product_approximation(es.eigenvectors.col(j), g.dims()));
  }
  return e;
}

void normalize_weights(std::vector<double>& w) {
  double sum = 0.0;
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
}

// Mixes a seed with random product terms so the ensemble has full rank and
// exactly k terms.
SeparableEnsemble pad(SeparableEnsemble e, int k, std::mt19937_64& rng) {
  normalize_weights(e.weights);
  const int extra = std::max(1, k - static_cast<int>(e.weights.size()));
  for (double& w : e.weights) w *= 1.0 - kPadding;
  for (int i = 0; i < extra; ++i) {
    std::vector<ComplexVector> term;
    for (int d : e.dims) term.push_back(random_unit(d, rng));
    e.weights.push_back(kPadding / extra);
    e.terms.push_back(std::move(term));
  }
  return e;
}

SeparableEnsemble random_ensemble(const std::vector<int>& dims, int k, std::mt19937_64& rng) {
  SeparableEnsemble e{dims, std::vector<double>(k, 1.0 / k), {}};
  for (int i = 0; i < k; ++i) {
    std::vector<ComplexVector> term;
    for (int d : dims) term.push_back(random_unit(d, rng));
    e.terms.push_back(std::move(term));
  }
  return e;
}

struct Descent {
  SeparableEnsemble ensemble;
  double value;
  bool converged;
};

// Alternates a multiplicative weight step and a projected gradient step on
// the block vectors. Both are accepted only when they lower the objective.
Descent descend(const ReeObjective& f, SeparableEnsemble e, const ReeConfig& cfg) {
  const int k = static_cast<int>(e.weights.size());
  auto ev = f(e.density(), true);
  double eta = 1.0;
  bool converged = false;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double start = ev.value;

    std::vector<ComplexVector> psi(k);
    std::vector<double> g(k);
    for (int i = 0; i < k; ++i) {
      psi[i] = e.term_vector(i);
      g[i] = psi[i].dot(ev.gamma * psi[i]).real();
    }
    std::vector<double> target(k);
    for (int i = 0; i < k; ++i) target[i] = e.weights[i] * std::max(g[i], 0.0);
    normalize_weights(target);
    for (double mix = 1.0; mix > 1e-6; mix *= 0.5) {
      SeparableEnsemble trial = e;
      for (int i = 0; i < k; ++i) trial.weights[i] = (1.0 - mix) * e.weights[i] + mix * target[i];
      auto tv = f(trial.density(), true);
      if (tv.value < ev.value) {
        e = std::move(trial);
        ev = std::move(tv);
        break;
      }
    }

    // d/d conj(v_b) of <psi|Gamma|psi> is M v_b; move along its tangent part.
    std::vector<std::vector<ComplexVector>> dir(k);
    for (int i = 0; i < k; ++i) {
      const ComplexVector y = ev.gamma * e.term_vector(i);
      for (std::size_t b = 0; b < e.dims.size(); ++b) {
        const ComplexVector mv = contract_except(y, e.dims, e.terms[i], static_cast<int>(b));
        const Complex rq = e.terms[i][b].dot(mv);
        dir[i].push_back(e.weights[i] * (mv - rq * e.terms[i][b]));
      }
    }
    while (eta > 1e-12) {
      SeparableEnsemble trial = e;
      for (int i = 0; i < k; ++i)
        for (std::size_t b = 0; b < e.dims.size(); ++b)
          trial.terms[i][b] = (e.terms[i][b] + eta * dir[i][b]).normalized();
      auto tv = f(trial.density(), true);
      if (tv.value < ev.value) {
        e = std::move(trial);
        ev = std::move(tv);
        eta *= 1.5;
        break;
      }
      eta *= 0.5;
    }
    if (eta <= 1e-12) eta = 1e-6;

    if (start - ev.value < cfg.tol) {
      converged = true;
      break;
    }
  }
  return {std::move(e), ev.value, converged};
}

}  // namespace

ReeResult ree_upper_bound(const MultipartiteState& s, const Partition& part,
                          const OptimizerConfig& cfg, const ReeConfig& ree_cfg,
                          const DiscordResult* chi_seed) {
  const auto g = group_blocks(s, part);
  if (g.dim() > kMaxTotalDim)
    throw DimensionError("entanglement estimator supports total dimension <= 8, got " +
                         std::to_string(g.dim()));
  const int k = ree_cfg.ensemble_size > 0 ? ree_cfg.ensemble_size : g.dim() * g.dim();

  std::optional<DiscordResult> own;
  if (!chi_seed) {
    own.emplace(discord(s, part, cfg));
    chi_seed = &*own;
  }
  if (chi_seed->best_basis.block_dims() != g.dims())
    throw DimensionError("discord result does not match the partition's blocks");

  std::vector<Candidate> seeds;
  seeds.push_back({marginals_seed(g), "marginals"});
  seeds.push_back({classical_seed(g, *chi_seed), "classical"});
  seeds.push_back({eigen_product_seed(g), "eigen_product"});

  const ReeObjective f(g.rho());
  ReeResult best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](SeparableEnsemble e, const std::string& label, bool converged) {
    const auto v = relative_entropy(g.rho(), e.density());
    if (v.is_infinite() || !(v.value < best.value)) return;
    best.value = v.value;
    best.ensemble = std::move(e);
    best.seeded_from = label;
    best.converged = converged;
  };

  std::mt19937_64 rng(derive_seed(ree_cfg.seed, 0));
  for (auto& c : seeds) {
    normalize_weights(c.ensemble.weights);
    consider(c.ensemble, c.label, false);
    auto d = descend(f, pad(c.ensemble, k, rng), ree_cfg);
    consider(std::move(d.ensemble), c.label, d.converged);
  }
  for (int r = 0; r < ree_cfg.restarts; ++r) {
    std::mt19937_64 local(derive_seed(ree_cfg.seed, r + 1));
    auto d = descend(f, random_ensemble(g.dims(), k, local), ree_cfg);
    consider(std::move(d.ensemble), "random#" + std::to_string(r), d.converged);
  }
  return best;
}

double ree_closed_form(const FamilyTag& family, const Partition& part) {
  const std::string key = part.canonical().to_string();
  const bool tripartite = key == "A:B:C";
  const bool pair = key == "A:B" || key == "A:C" || key == "B:C";
  const bool bipartition = key == "AB:C" || key == "AC:B" || key == "A:BC";
  const auto& f = family.family;

  if (f == "ghz" || f == "ghz_general") {
    const double h = f == "ghz" ? 1.0 : binary_entropy(family.param("alpha2"));
    if (tripartite || bipartition) return h;
    if (pair) return 0.0;
  } else if (f == "ghz_plus" || f == "ghz_minus") {
    const double p = family.param("p");
    const double lam = 0.5 + std::sqrt(0.25 - 0.5 * p * (1.0 - p));
    if (tripartite || key == "AB:C" || key == "AC:B") return binary_entropy(p);
    if (key == "A:BC") return binary_entropy(lam);
    if (key == "A:B" || key == "A:C") return 0.0;
    // maximally correlated on span{|00>,|11>}: E = S(rho_B) - S(rho_BC)
    if (key == "B:C") return binary_entropy(p) - binary_entropy(lam);
  } else if (f == "w") {
    const double l3 = std::log2(3.0);
    if (tripartite) return 2.0 * l3 - 2.0;
    if (bipartition) return l3 - 2.0 / 3.0;
    if (pair) return l3 - 4.0 / 3.0;
  } else if (f == "counterexample") {
    if (tripartite || pair || bipartition) return 0.0;
  }
  throw CatalogMiss("no closed-form entanglement for " + f + " on " + key);
}

double pure_bipartite_ree(const MultipartiteState& s, const Partition& part) {
  return discord_pure_bipartite(s, part);
}

}  // namespace qcorr
