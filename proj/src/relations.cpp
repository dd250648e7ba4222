#include "qcorr/relations.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"

namespace qcorr {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "SATISFIED";
    case Verdict::violated: return "VIOLATED";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    case Verdict::not_applicable: return "N/A";
  }
  return "N/A";
}

std::string to_string(RelationStatus s) {
  switch (s) {
    case RelationStatus::theorem: return "theorem";
    case RelationStatus::conjecture: return "conjecture";
    case RelationStatus::empirical: return "empirical";
    case RelationStatus::exploratory: return "exploratory";
    case RelationStatus::not_applicable: return "n/a";
  }
  return "n/a";
}

std::string to_string(const Permutation& p) {
  std::string s;
  for (int x : p) s += static_cast<char>('A' + x);
  return s;
}

const std::array<Permutation, 6>& all_permutations() {
  static const std::array<Permutation, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  return perms;
}

bool RelationReport::gating_violation() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const RelationRow& r) { return r.gating && r.verdict == Verdict::violated; });
}

int RelationReport::count(Verdict v) const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [&](const RelationRow& r) { return r.verdict == v; }));
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format12(x));
}

std::string format12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

enum class Kind { ge, le, eq };

Partition part_of(std::initializer_list<std::vector<int>> blocks) { return Partition(blocks); }

std::string term_name(const std::string& q, const Partition& p) {
  return q + "(" + p.canonical().to_string() + ")";
}

// One side of a relation: sum of coefficient * term, or a max of terms.
struct Side {
  std::vector<std::pair<double, TermRef>> parts;
  bool is_max = false;

  double value() const {
    if (is_max) {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& [c, t] : parts) m = std::max(m, c * t.value);
      return m;
    }
    double v = 0.0;
    for (const auto& [c, t] : parts) v += c * t.value;
    return v;
  }
};

class Builder {
 public:
  Builder(CorrelationTerms& terms, const RelationConfig& cfg, RelationReport& report)
      : terms_(terms), cfg_(cfg), report_(report) {}

  TermRef ref(const std::string& q, const Partition& p) {
    Term t;
    if (q == "T") t = terms_.T(p);
    else if (q == "D") t = terms_.D(p);
    else if (q == "E") t = terms_.E(p);
    else throw ParamError("unknown measure '" + q + "'");
    return {term_name(q, p), t.value, t.bound, t.source, true};
  }

  TermRef entropy(const std::vector<int>& parties) {
    const Term t = terms_.S(parties);
    std::string name = "S(";
    auto sorted = parties;
    std::sort(sorted.begin(), sorted.end());
    for (int p : sorted) name += static_cast<char>('A' + p);
    return {name + ")", t.value, t.bound, t.source, true};
  }

  void not_applicable(const std::string& id, const std::string& perm, const std::string& statement) {
    RelationRow row;
    row.id = id;
    row.permutation = perm;
    row.statement = statement;
    row.lhs = row.rhs = row.residual = std::numeric_limits<double>::quiet_NaN();
    report_.rows.push_back(std::move(row));
  }

  void add(const std::string& id, const std::string& perm, const std::string& statement, Kind kind,
           Side lhs, Side rhs, RelationStatus status) {
    RelationRow row;
    row.id = id;
    row.permutation = perm;
    row.statement = statement;
    row.status = status;
    row.gating = status == RelationStatus::theorem;
    row.lhs = lhs.value();
    row.rhs = rhs.value();
    switch (kind) {
      case Kind::ge: row.residual = row.lhs - row.rhs; break;
      case Kind::le: row.residual = row.rhs - row.lhs; break;
      case Kind::eq: row.residual = -std::abs(row.lhs - row.rhs); break;
    }
    const bool lhs_greater = kind != Kind::le;
    for (auto& [c, t] : lhs.parts) {
      t.greater_side = lhs_greater;
      row.terms.push_back(t);
    }
    for (auto& [c, t] : rhs.parts) {
      t.greater_side = !lhs_greater;
      row.terms.push_back(t);
    }
    // An equality has no lesser side: any inexact term blocks certification.
    const auto only_on = [&](bool greater) {
      return std::all_of(row.terms.begin(), row.terms.end(), [&](const TermRef& t) {
        return t.bound == Bound::exact ||
               (kind != Kind::eq && t.bound == Bound::upper_bound && t.greater_side == greater);
      });
    };
    const bool all_exact = std::all_of(row.terms.begin(), row.terms.end(),
                                       [](const TermRef& t) { return t.bound == Bound::exact; });
    if (row.residual >= -cfg_.exact_tol) {
      row.verdict = Verdict::satisfied;
      row.certified = only_on(false);
    } else if (all_exact || row.residual < -cfg_.slack) {
      row.verdict = Verdict::violated;
      row.certified = only_on(true);
    } else {
      row.verdict = Verdict::inconclusive;
    }
    report_.rows.push_back(std::move(row));
  }

 private:
  CorrelationTerms& terms_;
  const RelationConfig& cfg_;
  RelationReport& report_;
};

Side sum(std::initializer_list<TermRef> ts, double coef = 1.0) {
  Side s;
  for (const auto& t : ts) s.parts.emplace_back(coef, t);
  return s;
}

Side maximum(std::initializer_list<TermRef> ts) {
  Side s = sum(ts);
  s.is_max = true;
  return s;
}

}  // namespace

Permutation ordering_permutation(CorrelationTerms& terms, const RelationConfig& cfg) {
  const auto pair = [&](int a, int b) { return terms.D(part_of({{a}, {b}})).value; };
  for (const auto& p : all_permutations()) {
    const double xy = pair(p[0], p[1]), yz = pair(p[1], p[2]), xz = pair(p[0], p[2]);
    if (xy >= yz - cfg.tie_tol && yz >= xz - cfg.tie_tol) return p;
  }
  // Unreachable: sorting the three pairs always yields a valid order.
  return all_permutations().front();
}

Permutation ordering_permutation(const MultipartiteState& s, const RelationConfig& cfg) {
  CorrelationTerms terms(s, cfg.terms);
  return ordering_permutation(terms, cfg);
}

RelationReport evaluate(const MultipartiteState& s, const std::set<std::string>& measures,
                        const RelationConfig& cfg) {
  CorrelationTerms terms(s, cfg.terms);
  return evaluate(terms, measures, cfg);
}

RelationReport evaluate(CorrelationTerms& terms, const std::set<std::string>& measures,
                        const RelationConfig& cfg) {
  const auto& s = terms.state();
  if (s.parties() != 3) throw DimensionError("relations need a three-party state");
  for (const auto& m : measures)
    if (m != "T" && m != "E" && m != "D") throw ParamError("unknown measure '" + m + "'");

  RelationReport report;
  report.state_label = s.label();
  report.purity = s.purity();
  report.pure = terms.pure();
  report.measures.assign(measures.begin(), measures.end());
  report.slack = cfg.slack;
  Builder b(terms, cfg, report);
  const bool pure = report.pure;
  const auto pure_only = pure ? RelationStatus::theorem : RelationStatus::not_applicable;

  Permutation order{0, 1, 2};
  if (measures.count("D")) {
    order = ordering_permutation(terms, cfg);
    report.ordering = to_string(order);
    report.pair_discords = {terms.D(part_of({{0}, {1}})).value, terms.D(part_of({{0}, {2}})).value,
                            terms.D(part_of({{1}, {2}})).value};
  }

  for (const std::string q : {"T", "E", "D"}) {
    if (!measures.count(q)) continue;
    for (const auto& p : all_permutations()) {
      const int x = p[0], y = p[1], z = p[2];
      const std::string ps = to_string(p);
      const auto Q = [&](std::initializer_list<std::vector<int>> blocks) {
        return b.ref(q, part_of(blocks));
      };
      const auto xyz = [&] { return Q({{x}, {y}, {z}}); };

      if (q == "T") {
        b.add("R_T_EQ", ps, "T(A:B:C) = T(A:B) + T(AB:C)", Kind::eq, sum({xyz()}),
              sum({Q({{x}, {y}}), Q({{x, y}, {z}})}), RelationStatus::theorem);
        b.add("R_T1", ps, "T(AB:C) >= T(A:C)", Kind::ge, sum({Q({{x, y}, {z}})}),
              sum({Q({{x}, {z}})}), RelationStatus::theorem);
        b.add("R_T2", ps, "T(A:B:C) >= T(A:B) + T(A:C)", Kind::ge, sum({xyz()}),
              sum({Q({{x}, {y}}), Q({{x}, {z}})}), RelationStatus::theorem);
        b.add("R_T3", ps, "T(A:B:C) <= T(BC:A) + T(AC:B)", Kind::le, sum({xyz()}),
              sum({Q({{y, z}, {x}}), Q({{x, z}, {y}})}), RelationStatus::theorem);
        b.add("R_SSA", ps, "S(AB) + S(BC) >= S(ABC) + S(B)", Kind::ge,
              sum({b.entropy({x, y}), b.entropy({y, z})}),
              sum({b.entropy({x, y, z}), b.entropy({y})}), RelationStatus::theorem);
      } else if (q == "E") {
        if (pure)
          b.add("R_E_EQ", ps, "E(A:B:C) >= E(A:B) + E(AB:C)", Kind::ge, sum({xyz()}),
                sum({Q({{x}, {y}}), Q({{x, y}, {z}})}), pure_only);
        else
          b.not_applicable("R_E_EQ", ps, "E(A:B:C) >= E(A:B) + E(AB:C)");
        b.add("R_E1", ps, "E(AB:C) >= E(A:C)", Kind::ge, sum({Q({{x, y}, {z}})}),
              sum({Q({{x}, {z}})}), RelationStatus::theorem);
        if (pure)
          b.add("R_E2", ps, "E(A:B:C) >= E(A:B) + E(A:C)", Kind::ge, sum({xyz()}),
                sum({Q({{x}, {y}}), Q({{x}, {z}})}), pure_only);
        else
          b.not_applicable("R_E2", ps, "E(A:B:C) >= E(A:B) + E(A:C)");
      } else {
        const bool ordered = p == order;
        if (pure) {
          b.add("R_D_T1", ps, "D(A:B:C) >= D(A:B) + D(AB:C)", Kind::ge, sum({xyz()}),
                sum({Q({{x}, {y}}), Q({{x, y}, {z}})}), pure_only);
          b.add("R_D_T2", ps, "D(AB:C) >= (D(A:C) + D(B:C))/2", Kind::ge, sum({Q({{x, y}, {z}})}),
                sum({Q({{x}, {z}}), Q({{y}, {z}})}, 0.5), pure_only);
        } else {
          b.not_applicable("R_D_T1", ps, "D(A:B:C) >= D(A:B) + D(AB:C)");
          b.not_applicable("R_D_T2", ps, "D(AB:C) >= (D(A:C) + D(B:C))/2");
        }
        const auto corollary = pure ? (ordered ? RelationStatus::theorem : RelationStatus::conjecture)
                                    : (ordered ? RelationStatus::empirical : RelationStatus::exploratory);
        b.add("R_D_C1", ps, "D(AB:C) >= D(A:C)", Kind::ge, sum({Q({{x, y}, {z}})}),
              sum({Q({{x}, {z}})}), corollary);
        b.add("R_D_C2", ps, "D(A:B:C) >= D(A:B) + D(A:C)", Kind::ge, sum({xyz()}),
              sum({Q({{x}, {y}}), Q({{x}, {z}})}), corollary);
        b.add("R_D_C3", ps, "D(BC:A) + D(AC:B) >= D(A:B) + D(A:C)", Kind::ge,
              sum({Q({{y, z}, {x}}), Q({{x, z}, {y}})}), sum({Q({{x}, {y}}), Q({{x}, {z}})}),
              corollary);
        b.add("R_D_CONJ", ps, "D(AB:C) >= max{D(B:C), D(A:C)}", Kind::ge, sum({Q({{x, y}, {z}})}),
              maximum({Q({{y}, {z}}), Q({{x}, {z}})}),
              pure ? RelationStatus::conjecture : RelationStatus::exploratory);
        b.add("R_D_OPEN", ps, "D(A:B:C) <= D(BC:A) + D(AC:B)", Kind::le, sum({xyz()}),
              sum({Q({{y, z}, {x}}), Q({{x, z}, {y}})}), RelationStatus::exploratory);
      }
    }
    // Symmetrized bounds are permutation invariant: one row each.
    const auto Q = [&](std::initializer_list<std::vector<int>> blocks) {
      return b.ref(q, part_of(blocks));
    };
    const std::string stmt = q + "(A:B:C) >= 2/3 [" + q + "(A:B) + " + q + "(B:C) + " + q + "(A:C)]";
    if (q == "E") {
      if (pure)
        b.add("R_E2S", "", stmt, Kind::ge, sum({Q({{0}, {1}, {2}})}),
              sum({Q({{0}, {1}}), Q({{1}, {2}}), Q({{0}, {2}})}, 2.0 / 3.0), pure_only);
      else
        b.not_applicable("R_E2S", "", stmt);
    } else if (q == "D") {
      b.add("R_D_C2S", "", stmt, Kind::ge, sum({Q({{0}, {1}, {2}})}),
            sum({Q({{0}, {1}}), Q({{1}, {2}}), Q({{0}, {2}})}, 2.0 / 3.0),
            pure ? RelationStatus::theorem : RelationStatus::exploratory);
    }
  }
  return report;
}

CampaignSample conjecture_sample(const MultipartiteState& s, const OptimizerConfig& cfg,
                                 long index) {
  if (s.parties() != 3 || !s.is_pure())
    throw ParamError("the conjecture campaign needs pure three-party states");
  const auto pair = [&](int a, int b) { return discord(s, Partition({{a}, {b}}), cfg).value; };
  const double ab = pair(0, 1), ac = pair(0, 2), bc = pair(1, 2);
  CampaignSample out;
  out.index = index;
  out.residual = std::numeric_limits<double>::infinity();
  // Z = C, B, A in turn; roles XYZ keep X < Y.
  const struct {
    Permutation perm;
    double pair_xz, pair_yz;
  } cases[] = {{{0, 1, 2}, ac, bc}, {{0, 2, 1}, ab, bc}, {{1, 2, 0}, ab, ac}};
  for (const auto& c : cases) {
    const int keep[] = {c.perm[2]};
    const double lhs = von_neumann_entropy(partial_trace(s.rho(), s.dims(), keep));
    const double rhs = std::max(c.pair_xz, c.pair_yz);
    if (lhs - rhs < out.residual) {
      out.lhs = lhs;
      out.rhs = rhs;
      out.residual = lhs - rhs;
      out.permutation = to_string(c.perm);
    }
  }
  return out;
}

CampaignSummary conjecture_campaign(long n, std::uint64_t seed, SamplingMethod method,
                                    const OptimizerConfig& cfg, double slack) {
  if (n < 1) throw ParamError("campaign size must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  CampaignSummary sum;
  sum.n = n;
  sum.seed = seed;
  sum.method = method;
  sum.slack = slack;
  sum.samples.resize(n);
  OptimizerConfig inner = cfg;
  inner.threads = 1;
  parallel_for(static_cast<int>(n), cfg.threads, [&](int i) {
    const auto s = sample_random_pure(derive_seed(seed, i), method);
    sum.samples[i] = conjecture_sample(s, inner, i);
  });
  sum.min_residual = std::numeric_limits<double>::infinity();
  for (const auto& smp : sum.samples) {
    if (smp.residual < -slack) ++sum.violation_count;
    if (smp.residual < sum.min_residual) {
      sum.min_residual = smp.residual;
      sum.min_index = smp.index;
    }
  }
  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sum;
}

namespace {

nlohmann::ordered_json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

}  // namespace

nlohmann::ordered_json to_json(const RelationReport& r) {
  nlohmann::ordered_json j;
  j["state"] = r.state_label;
  j["purity"] = number(r.purity);
  j["pure"] = r.pure;
  j["measures"] = r.measures;
  j["slack"] = r.slack;
  if (!r.ordering.empty()) {
    j["ordering"] = {{"permutation", r.ordering},
                     {"D(A:B)", number(r.pair_discords[0])},
                     {"D(A:C)", number(r.pair_discords[1])},
                     {"D(B:C)", number(r.pair_discords[2])}};
  }
  j["gating_violation"] = r.gating_violation();
  auto& rows = j["relations"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["id"] = row.id;
    o["permutation"] = row.permutation;
    o["statement"] = row.statement;
    o["lhs"] = number(row.lhs);
    o["rhs"] = number(row.rhs);
    o["residual"] = number(row.residual);
    o["verdict"] = to_string(row.verdict);
    o["status"] = to_string(row.status);
    o["gating"] = row.gating;
    o["certified"] = row.certified;
    auto& ts = o["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : row.terms)
      ts.push_back({{"name", t.name},
                    {"value", number(t.value)},
                    {"bound", to_string(t.bound)},
                    {"source", t.source},
                    {"side", t.greater_side ? "greater" : "lesser"}});
    rows.push_back(std::move(o));
  }
  return j;
}

nlohmann::ordered_json summary_json(const CampaignSummary& c) {
  return {{"n", c.n},
          {"seed", c.seed},
          {"method", to_string(c.method)},
          {"slack", c.slack},
          {"violation_count", c.violation_count},
          {"min_residual", number(c.min_residual)},
          {"min_index", c.min_index},
          {"wall_seconds", number(c.wall_seconds)}};
}

void write_campaign_csv(const CampaignSummary& c, std::ostream& out) {
  out << "# qcorr-csv v1\n";
  out << "index,lhs,rhs,residual,permutation\n";
  for (const auto& s : c.samples)
    out << s.index << ',' << format12(s.lhs) << ',' << format12(s.rhs) << ','
        << format12(s.residual) << ',' << s.permutation << '\n';
}

}  // namespace qcorr
