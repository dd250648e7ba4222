#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qcorr/discord.hpp"
#include "qcorr/entanglement.hpp"

namespace qcorr {

/// exact: closed form or analytic identity. upper_bound: optimizer value that
/// can only overestimate. estimate: derived from an optimizer output without
/// a definite direction (classical correlations).
enum class Bound { exact, upper_bound, estimate };

std::string to_string(Bound b);

struct Term {
  double value = 0.0;
  Bound bound = Bound::exact;
  std::string source;  // "analytic", "catalog", "pure_bipartite", "optimizer", "estimator"
};

struct TermPolicy {
  bool discord_catalog = true;
  bool ree_catalog = true;
  bool pure_analytic = true;
  /// Run the estimator for E even where the catalog has the value.
  bool force_ree_estimator = false;
  OptimizerConfig optimizer;
  ReeConfig ree;
};

/// Lazily computed correlation terms of one state, cached per canonical
/// partition so every relation sees the same number for the same quantity.
class CorrelationTerms {
 public:
  CorrelationTerms(const MultipartiteState& s, TermPolicy policy = {});

  const MultipartiteState& state() const { return state_; }
  bool pure() const { return pure_; }

  /// von Neumann entropy of the listed parties (exact).
  Term S(const std::vector<int>& parties);
  Term T(const Partition& part);
  Term D(const Partition& part);
  Term E(const Partition& part);
  Term C(const Partition& part);
  /// Optimizer result for the partition, running the search if needed.
  const DiscordResult& discord_search(const Partition& part);

 private:
  std::optional<Term> pure_bipartite(const Partition& part);

  MultipartiteState state_;
  TermPolicy policy_;
  bool pure_;
  std::map<std::string, Term> s_, t_, d_, e_, c_;
  std::map<std::string, std::unique_ptr<DiscordResult>> searches_;
};

}  // namespace qcorr
