#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>
#include "qcorr/states.hpp"
#include "qcorr/terms.hpp"

namespace qcorr {

enum class Verdict { satisfied, violated, inconclusive, not_applicable };
/// theorem: proven for this kind of state (gates the check command).
/// conjecture / empirical: numerical evidence only. exploratory: open question.
enum class RelationStatus { theorem, conjecture, empirical, exploratory, not_applicable };

std::string to_string(Verdict v);
std::string to_string(RelationStatus s);

/// Roles (A, B, C) mapped to parties; "BAC" means role A is party B, etc.
using Permutation = std::array<int, 3>;
std::string to_string(const Permutation& p);
const std::array<Permutation, 6>& all_permutations();

struct TermRef {
  std::string name;  // e.g. "D(AB:C)" in actual party letters
  double value = 0.0;
  Bound bound = Bound::exact;
  std::string source;
  bool greater_side = true;
};

struct RelationRow {
  std::string id;
  std::string permutation;  // empty for symmetric relations
  std::string statement;    // in role letters; see permutation
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;    // >= 0 means satisfied
  Verdict verdict = Verdict::not_applicable;
  RelationStatus status = RelationStatus::not_applicable;
  bool gating = false;
  /// The verdict follows from the bound directions alone, independent of
  /// how far the optimizer is from the true minimum.
  bool certified = false;
  std::vector<TermRef> terms;
};

struct RelationReport {
  std::string state_label;
  double purity = 1.0;
  bool pure = true;
  std::vector<std::string> measures;
  std::string ordering;              // permutation with D(A:B) >= D(B:C) >= D(A:C)
  std::array<double, 3> pair_discords{};  // D(A:B), D(A:C), D(B:C)
  double slack = 1e-4;
  std::vector<RelationRow> rows;

  bool gating_violation() const;
  int count(Verdict v) const;
};

struct RelationConfig {
  TermPolicy terms;
  double slack = 1e-4;        // optimizer tolerance for INCONCLUSIVE
  double exact_tol = 1e-9;    // residual tolerance for SATISFIED
  double tie_tol = 1e-6;      // pair discords this close count as equal
};

/// Evaluates every relation of the requested measures ("T", "E", "D") for all
/// six role assignments. Requires a three-party state (DimensionError).
RelationReport evaluate(const MultipartiteState& s, const std::set<std::string>& measures,
                        const RelationConfig& cfg = {});
RelationReport evaluate(CorrelationTerms& terms, const std::set<std::string>& measures,
                        const RelationConfig& cfg = {});

/// First permutation in lexicographic order (ABC, ACB, BAC, ...) whose pair
/// discords satisfy D(A:B) >= D(B:C) >= D(A:C) up to cfg.tie_tol.
Permutation ordering_permutation(CorrelationTerms& terms, const RelationConfig& cfg = {});
Permutation ordering_permutation(const MultipartiteState& s, const RelationConfig& cfg = {});

struct CampaignSample {
  long index = 0;
  double lhs = 0.0;        // S(Z) = D(XY:Z)
  double rhs = 0.0;        // max{D(Y:Z), D(X:Z)}
  double residual = 0.0;   // lhs - rhs, minimized over the choice of Z
  std::string permutation; // roles XYZ with Z the distinguished party
};

struct CampaignSummary {
  long n = 0;
  std::uint64_t seed = 0;
  SamplingMethod method = SamplingMethod::acin_uniform;
  double slack = 1e-6;
  long violation_count = 0;
  double min_residual = 0.0;
  long min_index = 0;
  double wall_seconds = 0.0;
  std::vector<CampaignSample> samples;  // sorted by index
};

/// Conjecture D(AB:C) >= max{D(B:C), D(A:C)} on one pure three-qubit state,
/// with the exact left side S(C) and optimizer pair discords on the right.
CampaignSample conjecture_sample(const MultipartiteState& s, const OptimizerConfig& cfg,
                                 long index = 0);

/// n random pure states from per-sample derived seeds. Sample i depends only
/// on (seed, i), so the result does not depend on cfg.threads.
CampaignSummary conjecture_campaign(long n, std::uint64_t seed, SamplingMethod method,
                                    const OptimizerConfig& cfg, double slack = 1e-6);

nlohmann::ordered_json to_json(const RelationReport& r);
nlohmann::ordered_json summary_json(const CampaignSummary& c);
/// Header comment, column line, one row per sample; numbers with 12
/// significant digits.
void write_campaign_csv(const CampaignSummary& c, std::ostream& out);

/// Rounds to 12 significant digits, the precision of all reported numbers.
double round12(double x);
std::string format12(double x);

}  // namespace qcorr
