#include "qcorr/terms.hpp"

#include <algorithm>

#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"

namespace qcorr {

std::string to_string(Bound b) {
  switch (b) {
    case Bound::exact: return "exact";
    case Bound::upper_bound: return "upper_bound";
    case Bound::estimate: return "estimate";
  }
  return "exact";
}

CorrelationTerms::CorrelationTerms(const MultipartiteState& s, TermPolicy policy)
    : state_(s), policy_(std::move(policy)), pure_(s.is_pure()) {}

Term CorrelationTerms::S(const std::vector<int>& parties) {
  std::vector<int> sorted = parties;
  std::sort(sorted.begin(), sorted.end());
  std::string key;
  for (int p : sorted) key += static_cast<char>('A' + p);
  if (auto it = s_.find(key); it != s_.end()) return it->second;
  const double v = static_cast<int>(sorted.size()) == state_.parties()
                       ? von_neumann_entropy(state_.rho())
                       : von_neumann_entropy(partial_trace(state_.rho(), state_.dims(), sorted));
  return s_[key] = {v, Bound::exact, "analytic"};
}

Term CorrelationTerms::T(const Partition& part) {
  const std::string key = part.canonical().to_string();
  if (auto it = t_.find(key); it != t_.end()) return it->second;
  return t_[key] = {total_mutual_information(state_, part), Bound::exact, "analytic"};
}

// A two-block partition covering every party of a pure state: both discord
// and entanglement equal the entropy of either block.
std::optional<Term> CorrelationTerms::pure_bipartite(const Partition& part) {
  if (!policy_.pure_analytic || !pure_ || part.size() != 2 || !part.covers(state_.parties()))
    return std::nullopt;
  return Term{S(part.blocks()[1]).value, Bound::exact, "pure_bipartite"};
}

const DiscordResult& CorrelationTerms::discord_search(const Partition& part) {
  const std::string key = part.canonical().to_string();
  auto& slot = searches_[key];
  if (!slot) slot = std::make_unique<DiscordResult>(discord(state_, part.canonical(), policy_.optimizer));
  return *slot;
}

Term CorrelationTerms::D(const Partition& part) {
  const std::string key = part.canonical().to_string();
  if (auto it = d_.find(key); it != d_.end()) return it->second;
  if (policy_.discord_catalog && state_.family())
    if (auto v = discord_closed_form(*state_.family(), part))
      return d_[key] = {*v, Bound::exact, "catalog"};
  if (auto t = pure_bipartite(part)) return d_[key] = *t;
  return d_[key] = {discord_search(part).value, Bound::upper_bound, "optimizer"};
}

Term CorrelationTerms::E(const Partition& part) {
  const std::string key = part.canonical().to_string();
  if (auto it = e_.find(key); it != e_.end()) return it->second;
  if (!policy_.force_ree_estimator) {
    if (policy_.ree_catalog && state_.family()) {
      try {
        return e_[key] = {ree_closed_form(*state_.family(), part), Bound::exact, "catalog"};
      } catch (const CatalogMiss&) {
      }
    }
    if (auto t = pure_bipartite(part)) return e_[key] = *t;
  }
  const auto& chi = discord_search(part);
  const auto r = ree_upper_bound(state_, part.canonical(), policy_.optimizer, policy_.ree, &chi);
  return e_[key] = {r.value, Bound::upper_bound, "estimator"};
}

Term CorrelationTerms::C(const Partition& part) {
  const std::string key = part.canonical().to_string();
  if (auto it = c_.find(key); it != c_.end()) return it->second;
  const auto& r = discord_search(part);
  return c_[key] = {classical_correlation(state_, part.canonical(), r.chi), Bound::estimate,
                    "optimizer"};
}

}  // namespace qcorr
