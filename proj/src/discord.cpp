#include "qcorr/discord.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"

namespace qcorr {

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

namespace {

constexpr int kMaxBlockDim = 4;
constexpr double kInitialStep = 0.4;
// Entropy cusps can hold a minimum in a basin far narrower than kInitialStep;
// the deterministic starts are also polished from a tiny simplex.
constexpr double kNarrowStep = 1e-5;
constexpr int kComponentStarts = 4;
// Starts whose values differ by less than this are ties; the earlier start wins.
constexpr double kTieTolerance = 1e-10;

struct Start {
  std::string label;
  ProductBasisPoint basis;
  double step = kInitialStep;
};

struct StartOutcome {
  double lambda = 0.0;
  ProductBasisPoint basis;
  ComplexMatrix chi;
  bool converged = false;
};

std::vector<ComplexMatrix> marginal_eigenframes(const MultipartiteState& g) {
  std::vector<ComplexMatrix> frames;
  for (int b = 0; b < g.parties(); ++b) {
    const int keep[] = {b};
    auto es = hermitian_eig(partial_trace(g.rho(), g.dims(), keep));
    // Descending eigenvalue order puts the dominant outcome first.
    frames.push_back(es.eigenvectors.rowwise().reverse());
  }
  return frames;
}

// Local eigenframes of one eigenvector of rho. Minima of the dephased entropy
// often sit where a basis vector is orthogonal to part of a pure component.
std::vector<ComplexMatrix> component_frames(const MultipartiteState& g, const ComplexVector& v) {
  const ComplexMatrix pr = v * v.adjoint();
  std::vector<ComplexMatrix> frames;
  for (int b = 0; b < g.parties(); ++b) {
    const int keep[] = {b};
    frames.push_back(hermitian_eig(partial_trace(pr, g.dims(), keep)).eigenvectors.rowwise().reverse());
  }
  return frames;
}

std::vector<ComplexMatrix> schmidt_frames(const MultipartiteState& g) {
  const auto es = hermitian_eig(g.rho());
  const ComplexVector psi = es.eigenvectors.col(es.eigenvectors.cols() - 1);
  const int d0 = g.dims()[0], d1 = g.dims()[1];
  ComplexMatrix m(d0, d1);
  for (int i = 0; i < d0; ++i)
    for (int j = 0; j < d1; ++j) m(i, j) = psi(i * d1 + j);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // psi = sum_k s_k u_k (x) conj(v_k)
  return {svd.matrixU(), svd.matrixV().conjugate()};
}

std::vector<Start> make_starts(const MultipartiteState& g, const OptimizerConfig& cfg) {
  std::vector<Start> starts;
  starts.push_back({"computational", ProductBasisPoint::computational(g.dims())});
  starts.push_back({"marginal_eigenbasis", ProductBasisPoint::from_frames(marginal_eigenframes(g))});
  if (g.parties() == 2 && g.is_pure())
    starts.push_back({"schmidt", ProductBasisPoint::from_frames(schmidt_frames(g))});
  for (int r = 0; r < cfg.starts; ++r) {
    std::vector<ComplexMatrix> frames;
    for (int b = 0; b < g.parties(); ++b)
      frames.push_back(haar_unitary(g.dims()[b], derive_seed(cfg.seed, 1000003ULL * r + b)));
    starts.push_back({"random#" + std::to_string(r), ProductBasisPoint::from_frames(std::move(frames))});
  }
  const std::size_t fixed = g.parties() == 2 && g.is_pure() ? 3 : 2;
  for (std::size_t i = 0; i < fixed; ++i)
    starts.push_back({starts[i].label + "/narrow", starts[i].basis, kNarrowStep});
  if (!g.is_pure()) {
    const auto es = hermitian_eig(g.rho());
    const int n = static_cast<int>(es.eigenvalues.size());
    for (int k = 0; k < std::min(n, kComponentStarts); ++k) {
      if (es.eigenvalues(n - 1 - k) < 1e-12) break;
      starts.push_back({"component#" + std::to_string(k) + "/narrow",
                        ProductBasisPoint::from_frames(component_frames(g, es.eigenvectors.col(n - 1 - k))),
                        kNarrowStep});
    }
  }
  return starts;
}

StartOutcome run_start(const ComplexMatrix& rho, const ProductBasisPoint& base, double step,
                       const OptimizerConfig& cfg) {
  const Objective lambda = [&](std::span<const double> x) {
    return lambda_functional(rho, base.with_coordinates(x).unitary());
  };
  auto res = polished_minimize(lambda, base.coordinates(), step, cfg);
  StartOutcome out;
  out.basis = base.with_coordinates(res.x);
  const ComplexMatrix u = out.basis.unitary();
  out.lambda = lambda_functional(rho, u);
  out.chi = dephase(rho, u);
  out.converged = res.converged;
  return out;
}

}  // namespace

DiscordResult discord(const MultipartiteState& s, const Partition& part,
                      const OptimizerConfig& cfg) {
  const auto g = group_blocks(s, part);
  for (int d : g.dims())
    if (d > kMaxBlockDim)
      throw DimensionError("discord search supports blocks of dimension <= 4, got " +
                           std::to_string(d));
  const double entropy = von_neumann_entropy(g.rho());
  const auto starts = make_starts(g, cfg);

  std::vector<StartOutcome> outcomes(starts.size());
  parallel_for(static_cast<int>(starts.size()), cfg.threads,
               [&](int i) { outcomes[i] = run_start(g.rho(), starts[i].basis, starts[i].step, cfg); });

  std::vector<int> order(starts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return outcomes[a].lambda < outcomes[b].lambda; });

  const double best_lambda = outcomes[order.front()].lambda;
  int best = order.front();
  for (int i : order)
    if (outcomes[i].lambda <= best_lambda + kTieTolerance) best = std::min(best, i);

  std::vector<LocalMinimum> minima;
  for (int i : order) {
    const auto& o = outcomes[i];
    const double value = o.lambda - entropy;
    const bool known = std::any_of(minima.begin(), minima.end(), [&](const LocalMinimum& m) {
      return std::abs(m.value - value) <= cfg.cluster_value_tol &&
             max_abs(m.chi - o.chi) <= cfg.cluster_state_tol;
    });
    if (!known) minima.push_back({value, o.basis, o.chi, i});
  }

  std::vector<std::string> labels;
  for (const auto& st : starts) labels.push_back(st.label);
  const auto& b = outcomes[best];
  return DiscordResult{
      .partition = part.to_string(),
      .value = b.lambda - entropy,
      .lambda = b.lambda,
      .entropy = entropy,
      .best_basis = b.basis,
      .chi = MultipartiteState(g.dims(), b.chi, "chi"),
      .local_minima = std::move(minima),
      .start_labels = std::move(labels),
      .starts_used = static_cast<int>(starts.size()),
      .converged = std::any_of(outcomes.begin(), outcomes.end(),
                               [](const StartOutcome& o) { return o.converged; }),
  };
}

double discord_pure_bipartite(const MultipartiteState& s, const Partition& part) {
  if (part.size() != 2) throw ParamError("pure bipartite discord needs exactly two blocks");
  const auto g = group_blocks(s, part);
  if (!g.is_pure()) throw PurityError("state on " + part.to_string() + " is not pure");
  const int keep[] = {1};
  return von_neumann_entropy(partial_trace(g.rho(), g.dims(), keep));
}

std::vector<LocalMinimum> enumerate_local_minima(const MultipartiteState& s,
                                                 const Partition& part,
                                                 const OptimizerConfig& cfg) {
  return discord(s, part, cfg).local_minima;
}

MultipartiteState closest_classical_state(const DiscordResult& result) { return result.chi; }

std::optional<double> discord_closed_form(const FamilyTag& family, const Partition& part) {
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
    const double q = std::min(p, 1.0 - p);
    const double lam = 0.5 + std::sqrt(0.25 - 0.5 * p * (1.0 - p));
    if (tripartite) return binary_entropy(p) + q;
    if (key == "A:B" || key == "A:C") return q;
    if (key == "AB:C" || key == "AC:B") return binary_entropy(p);
    if (key == "A:BC") return binary_entropy(lam);
    // rho_BC lives on span{|00>,|11>}, so dephasing in the computational basis is optimal
    if (key == "B:C") return binary_entropy(p) - binary_entropy(lam);
  } else if (f == "counterexample") {
    // p|000><000| + (1-p)|1+1><1+1|: every block is either perfectly
    // distinguishable (value 0) or carries the |0>,|+> pair (value min{p,1-p}).
    const double q = std::min(family.param("p"), 1.0 - family.param("p"));
    if (tripartite || key == "A:B" || key == "B:C" || key == "AC:B") return q;
    if (key == "A:C" || key == "AB:C" || key == "A:BC") return 0.0;
  } else if (f == "ghz_white") {
    if (pair) return 0.0;
  }
  return std::nullopt;
}

}  // namespace qcorr
