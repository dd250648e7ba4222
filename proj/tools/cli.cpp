#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/relations.hpp"
#include "qcorr/state_io.hpp"

namespace qcorr::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct UsageError : Error {
  using Error::Error;
};

// Flags shared by all subcommands; unset values fall back to the config file,
// then to the library defaults.
struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
  std::optional<double> tol;
  std::optional<int> threads;
  std::optional<int> max_iter;
  std::optional<int> ree_max_iter;
  std::optional<int> ree_restarts;
  std::optional<int> ree_ensemble;
  std::optional<double> slack;
  std::string config;
  std::string out;
  std::string format;
  std::string state_file;
  std::string family;
  std::string params;
};

struct Settings {
  OptimizerConfig opt;
  ReeConfig ree;
  double slack = 1e-4;
};

void add_common(CLI::App* app, Common& c, const std::string& default_format) {
  app->add_option("--seed", c.seed, "Base random seed");
  app->add_option("--starts", c.starts, "Random starts of the discord search");
  app->add_option("--tol", c.tol, "Per-start accuracy target of the discord search");
  app->add_option("--threads", c.threads, "Worker threads");
  app->add_option("--max-iter", c.max_iter, "Simplex iterations per start");
  app->add_option("--ree-iter", c.ree_max_iter, "Iterations of the entanglement estimator");
  app->add_option("--ree-restarts", c.ree_restarts, "Random restarts of the entanglement estimator");
  app->add_option("--ree-ensemble", c.ree_ensemble, "Ensemble size of the entanglement estimator");
  app->add_option("--slack", c.slack, "Optimizer slack for INCONCLUSIVE verdicts");
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--out", c.out, "Output file (default stdout)");
  c.format = default_format;
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void add_state(CLI::App* app, Common& c) {
  app->add_option("--state", c.state_file, "State file (JSON)");
  app->add_option("--family", c.family, "Named state family");
  app->add_option("--params", c.params, "Family parameters, k=v,k=v");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + s + "' in " + what);
  }
}

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  for (const auto& kv : split(text, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--params expects k=v pairs, got '" + kv + "'");
    out[kv.substr(0, eq)] = parse_double(kv.substr(eq + 1), "--params");
  }
  return out;
}

Settings resolve(const Common& c) {
  Settings s;
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw FormatError("cannot open config file " + c.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("config file " + c.config + ": " + e.what());
    }
    if (!j.is_object()) throw FormatError("config file must hold a JSON object");
    try {
      for (const auto& [key, v] : j.items()) {
        if (key == "seed") s.opt.seed = v.get<std::uint64_t>();
        else if (key == "starts") s.opt.starts = v.get<int>();
        else if (key == "tol") s.opt.tol = v.get<double>();
        else if (key == "threads") s.opt.threads = v.get<int>();
        else if (key == "max_iter") s.opt.max_iter = v.get<int>();
        else if (key == "ree_max_iter") s.ree.max_iter = v.get<int>();
        else if (key == "ree_restarts") s.ree.restarts = v.get<int>();
        else if (key == "ree_ensemble") s.ree.ensemble_size = v.get<int>();
        else if (key == "slack") s.slack = v.get<double>();
        else throw FormatError("unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("config file " + c.config + ": " + e.what());
    }
  }
  if (c.seed) s.opt.seed = *c.seed;
  if (c.starts) s.opt.starts = *c.starts;
  if (c.tol) s.opt.tol = *c.tol;
  if (c.threads) s.opt.threads = *c.threads;
  if (c.max_iter) s.opt.max_iter = *c.max_iter;
  if (c.ree_max_iter) s.ree.max_iter = *c.ree_max_iter;
  if (c.ree_restarts) s.ree.restarts = *c.ree_restarts;
  if (c.ree_ensemble) s.ree.ensemble_size = *c.ree_ensemble;
  if (c.slack) s.slack = *c.slack;
  s.ree.seed = s.opt.seed;
  if (s.opt.starts < 0 || s.opt.threads < 1 || s.opt.tol <= 0 || s.opt.max_iter < 1 ||
      s.ree.max_iter < 0 || s.ree.restarts < 0 || s.ree.ensemble_size < 0 || s.slack < 0)
    throw UsageError("optimizer settings out of range");
  return s;
}

MultipartiteState load_input(const Common& c) {
  if (!c.state_file.empty() && !c.family.empty())
    throw UsageError("give either --state or --family, not both");
  if (!c.state_file.empty()) {
    if (!c.params.empty()) throw UsageError("--params only applies to --family");
    return load_state(c.state_file);
  }
  if (c.family.empty()) throw UsageError("a state is required: --state FILE or --family NAME");
  return named_state(c.family, parse_params(c.params));
}

ojson settings_json(const Settings& s) {
  return {{"seed", s.opt.seed},           {"starts", s.opt.starts},
          {"tol", s.opt.tol},             {"max_iter", s.opt.max_iter},
          {"threads", s.opt.threads},     {"ree_max_iter", s.ree.max_iter},
          {"ree_restarts", s.ree.restarts}, {"ree_ensemble", s.ree.ensemble_size},
          {"slack", s.slack}};
}

ojson num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

std::string csv_cell(const ojson& v) {
  if (v.is_number_float()) return format12(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

// Writes to --out when given, otherwise to the command's stream.
void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw FormatError("cannot write " + c.out);
  f << text;
}

std::set<std::string> parse_measures(const std::string& text, const std::set<std::string>& allowed) {
  std::set<std::string> out;
  for (const auto& m : split(text, ',')) {
    if (!allowed.count(m)) throw UsageError("unknown measure '" + m + "'");
    out.insert(m);
  }
  if (out.empty()) throw UsageError("no measures requested");
  return out;
}

TermPolicy policy_for(const Settings& s) {
  TermPolicy p;
  p.optimizer = s.opt;
  p.ree = s.ree;
  return p;
}

// ---------------------------------------------------------------- measure

int cmd_measure(const Common& c, const std::string& partition_text, const std::string& measures_text,
                bool no_catalog, std::ostream& out) {
  const auto settings = resolve(c);
  const auto s = load_input(c);
  const auto part = Partition::parse(partition_text);
  if (part.max_party() >= s.parties())
    throw UsageError("partition " + partition_text + " refers to a party the state lacks");
  const auto measures = parse_measures(measures_text, {"S", "T", "D", "E", "C"});

  auto policy = policy_for(settings);
  if (no_catalog) {
    policy.discord_catalog = policy.ree_catalog = policy.pure_analytic = false;
  }
  CorrelationTerms terms(s, policy);
  ojson j;
  j["state"] = s.label();
  j["partition"] = part.to_string();
  j["dims"] = s.dims();
  j["purity"] = num(s.purity());
  const auto term_json = [](const Term& t) {
    return ojson{{"value", num(t.value)}, {"bound", to_string(t.bound)}, {"source", t.source}};
  };
  ojson q;
  if (measures.count("S")) q["S"] = term_json({von_neumann_entropy(s), Bound::exact, "analytic"});
  if (measures.count("T")) q["T"] = term_json(terms.T(part));
  if (measures.count("D")) q["D"] = term_json(terms.D(part));
  if (measures.count("E")) q["E"] = term_json(terms.E(part));
  if (measures.count("C")) q["C"] = term_json(terms.C(part));
  j["measures"] = q;
  if (measures.count("D") || measures.count("C")) {
    const auto d = terms.D(part);
    if (d.source == "optimizer" || measures.count("C")) {
      const auto& r = terms.discord_search(part);
      j["optimizer"] = {{"value", num(r.value)},
                        {"lambda", num(r.lambda)},
                        {"entropy", num(r.entropy)},
                        {"starts_used", r.starts_used},
                        {"converged", r.converged},
                        {"local_minima", r.local_minima.size()}};
    }
  }
  j["config"] = settings_json(settings);

  if (c.format == "csv") {
    std::ostringstream o;
    o << "# qcorr-csv v1\nquantity,value,bound,source\n";
    for (const auto& [name, t] : q.items())
      o << name << ',' << csv_cell(t["value"]) << ',' << csv_cell(t["bound"]) << ','
        << csv_cell(t["source"]) << '\n';
    emit(c, out, o.str());
  } else {
    emit(c, out, j.dump(2) + "\n");
  }
  return 0;
}

// ------------------------------------------------------------------ check

int cmd_check(const Common& c, const std::string& measures_text, std::ostream& out) {
  const auto settings = resolve(c);
  const auto s = load_input(c);
  if (s.parties() != 3) throw UsageError("check needs a three-party state");
  RelationConfig cfg;
  cfg.terms = policy_for(settings);
  cfg.slack = settings.slack;
  const auto report = evaluate(s, parse_measures(measures_text, {"T", "E", "D"}), cfg);

  if (c.format == "csv") {
    std::ostringstream o;
    o << "# qcorr-csv v1\nid,permutation,lhs,rhs,residual,verdict,status,gating,certified\n";
    for (const auto& r : report.rows)
      o << r.id << ',' << r.permutation << ',' << csv_cell(num(r.lhs)) << ','
        << csv_cell(num(r.rhs)) << ',' << csv_cell(num(r.residual)) << ',' << to_string(r.verdict)
        << ',' << to_string(r.status) << ',' << (r.gating ? 1 : 0) << ',' << (r.certified ? 1 : 0)
        << '\n';
    emit(c, out, o.str());
  } else {
    auto j = to_json(report);
    j["config"] = settings_json(settings);
    emit(c, out, j.dump(2) + "\n");
  }
  return report.gating_violation() ? 1 : 0;
}

// ------------------------------------------------------------------- scan

using Column = std::function<double(CorrelationTerms&)>;

Term measure_term(CorrelationTerms& t, char q, const Partition& p) {
  switch (q) {
    case 'T': return t.T(p);
    case 'D': return t.D(p);
    case 'E': return t.E(p);
    default: return t.C(p);
  }
}

// Curves of one permutation (roles X, Y, Z).
double perm_curve(CorrelationTerms& t, char q, const Permutation& p, const std::string& curve) {
  const int x = p[0], y = p[1], z = p[2];
  const auto Q = [&](std::vector<std::vector<int>> b) { return measure_term(t, q, Partition(b)).value; };
  if (curve == "sum_bip") return Q({{y, z}, {x}}) + Q({{x, z}, {y}});
  if (curve == "sum_pair") return Q({{x}, {y}}) + Q({{x}, {z}});
  return Q({{x}, {y}}) + Q({{x, y}, {z}});  // eq_rhs
}

std::map<std::string, Column> scan_columns(const std::set<std::string>& measures) {
  std::map<std::string, Column> cols;
  for (const auto& m : measures) {
    const char q = m[0];
    const auto fixed = [&](const std::string& name, std::vector<std::vector<int>> blocks) {
      cols[m + "_" + name] = [q, blocks](CorrelationTerms& t) {
        return measure_term(t, q, Partition(blocks)).value;
      };
    };
    fixed("ABC", {{0}, {1}, {2}});
    fixed("AB", {{0}, {1}});
    fixed("AC", {{0}, {2}});
    fixed("BC", {{1}, {2}});
    fixed("ABxC", {{0, 1}, {2}});
    fixed("ACxB", {{0, 2}, {1}});
    fixed("BCxA", {{1, 2}, {0}});
    for (const std::string curve : {"sum_bip", "sum_pair", "eq_rhs"}) {
      cols[m + "_" + curve] = [q, curve](CorrelationTerms& t) {
        return perm_curve(t, q, all_permutations()[0], curve);
      };
      cols[m + "_" + curve + "_min"] = [q, curve](CorrelationTerms& t) {
        double v = INFINITY;
        for (const auto& p : all_permutations()) v = std::min(v, perm_curve(t, q, p, curve));
        return v;
      };
      cols[m + "_" + curve + "_max"] = [q, curve](CorrelationTerms& t) {
        double v = -INFINITY;
        for (const auto& p : all_permutations()) v = std::max(v, perm_curve(t, q, p, curve));
        return v;
      };
    }
    // Q(A:B:C) - Q(X:Y) - Q(X:Z) with X the named party.
    for (int x = 0; x < 3; ++x) {
      const int y = (x + 1) % 3, z = (x + 2) % 3;
      cols[m + "_c2_res_" + std::string(1, static_cast<char>('A' + x))] = [q, x, y, z](CorrelationTerms& t) {
        return measure_term(t, q, Partition({{0}, {1}, {2}})).value -
               measure_term(t, q, Partition({{x}, {y}})).value -
               measure_term(t, q, Partition({{x}, {z}})).value;
      };
    }
  }
  return cols;
}

// Default column order: per measure, fixed partitions, curves, then residuals.
std::vector<std::string> default_columns(const std::set<std::string>& measures) {
  std::vector<std::string> out;
  for (const std::string m : {"T", "E", "D", "C"}) {
    if (!measures.count(m)) continue;
    for (const std::string s : {"ABC", "AB", "AC", "BC", "ABxC", "ACxB", "BCxA", "sum_bip",
                                "sum_bip_min", "sum_bip_max", "sum_pair", "sum_pair_min",
                                "sum_pair_max", "eq_rhs", "eq_rhs_min", "eq_rhs_max", "c2_res_A",
                                "c2_res_B", "c2_res_C"})
      out.push_back(m + "_" + s);
  }
  return out;
}

struct Grid {
  double from = 0.0, to = 1.0, step = 0.02;
  std::vector<double> points() const {
    std::vector<double> p;
    const long n = std::lround(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i) p.push_back(round12(from + i * step));
    return p;
  }
};

Grid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("--grid expects start:stop:step");
  Grid g{parse_double(parts[0], "--grid"), parse_double(parts[1], "--grid"),
         parse_double(parts[2], "--grid")};
  if (!(g.step > 0) || g.to < g.from) throw UsageError("--grid needs start <= stop and step > 0");
  return g;
}

int cmd_scan(const Common& c, const std::string& param, const std::string& grid_text,
             const std::string& measures_text, const std::string& columns_text,
             const std::string& crossing, bool discord_catalog, bool ree_estimator,
             std::ostream& out) {
  const auto settings = resolve(c);
  if (c.family.empty()) throw UsageError("scan needs --family");
  if (!c.state_file.empty()) throw UsageError("scan works on families, not state files");
  const auto measures = parse_measures(measures_text, {"T", "E", "D", "C"});
  const auto available = scan_columns(measures);
  std::vector<std::string> columns =
      columns_text.empty() ? default_columns(measures) : split(columns_text, ',');
  for (const auto& col : columns)
    if (!available.count(col)) throw UsageError("unknown column '" + col + "'");
  if (!crossing.empty() && !available.count(crossing))
    throw UsageError("unknown column '" + crossing + "'");

  const auto fixed = parse_params(c.params);
  auto policy = policy_for(settings);
  policy.discord_catalog = discord_catalog;
  policy.force_ree_estimator = ree_estimator;
  const auto state_at = [&](double p) {
    auto params = fixed;
    params[param] = p;
    return named_state(c.family, params);
  };
  const auto value_at = [&](double p, const std::string& col) {
    CorrelationTerms t(state_at(p), policy);
    return available.at(col)(t);
  };

  const auto grid = parse_grid(grid_text).points();
  std::vector<std::vector<double>> rows;
  for (double p : grid) {
    CorrelationTerms t(state_at(p), policy);
    std::vector<double> row{p};
    for (const auto& col : columns) row.push_back(available.at(col)(t));
    rows.push_back(std::move(row));
  }

  ojson cross;
  if (!crossing.empty()) {
    cross["column"] = crossing;
    cross["found"] = false;
    // First sign change along the grid, refined by bisection.
    std::vector<double> v;
    for (double p : grid) v.push_back(value_at(p, crossing));
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if ((v[i] >= 0) == (v[i + 1] >= 0)) continue;
      double lo = grid[i], hi = grid[i + 1];
      const bool lo_sign = v[i] >= 0;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        ((value_at(mid, crossing) >= 0) == lo_sign ? lo : hi) = mid;
      }
      cross["found"] = true;
      cross["p"] = num(0.5 * (lo + hi));
      cross["bracket"] = {num(lo), num(hi)};
      break;
    }
  }

  std::ostringstream o;
  if (c.format == "json") {
    ojson j;
    j["family"] = c.family;
    j["param"] = param;
    j["columns"] = columns;
    auto& arr = j["rows"] = ojson::array();
    for (const auto& r : rows) {
      ojson row;
      row[param] = num(r[0]);
      for (std::size_t k = 0; k < columns.size(); ++k) row[columns[k]] = num(r[k + 1]);
      arr.push_back(std::move(row));
    }
    if (!crossing.empty()) j["crossing"] = cross;
    j["config"] = settings_json(settings);
    o << j.dump(2) << "\n";
  } else {
    o << "# qcorr-csv v1\n" << param;
    for (const auto& col : columns) o << ',' << col;
    o << '\n';
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.size(); ++k) o << (k ? "," : "") << format12(r[k]);
      o << '\n';
    }
    if (!crossing.empty())
      o << "# crossing " << crossing << ' '
        << (cross["found"].get<bool>() ? format12(cross["p"].get<double>()) : "none") << '\n';
  }
  emit(c, out, o.str());
  if (!crossing.empty() && !c.out.empty()) out << cross.dump(2) << "\n";
  return 0;
}

// ----------------------------------------------------------------- sample

int cmd_sample(const Common& c, long n, const std::string& method_text, std::ostream& out) {
  const auto settings = resolve(c);
  if (n < 1) throw UsageError("--n must be at least 1");
  SamplingMethod method;
  try {
    method = parse_sampling_method(method_text);
  } catch (const ParamError& e) {
    throw UsageError(e.what());
  }
  const double slack = c.slack ? *c.slack : 1e-6;
  const auto summary = conjecture_campaign(n, settings.opt.seed, method, settings.opt, slack);

  auto j = summary_json(summary);
  j["config"] = settings_json(settings);
  if (c.format == "json") {
    auto& arr = j["samples"] = ojson::array();
    for (const auto& s : summary.samples)
      arr.push_back({{"index", s.index},
                     {"lhs", num(s.lhs)},
                     {"rhs", num(s.rhs)},
                     {"residual", num(s.residual)},
                     {"permutation", s.permutation}});
    emit(c, out, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream o;
  write_campaign_csv(summary, o);
  emit(c, out, o.str());
  // With the CSV on stdout the summary would corrupt it.
  if (!c.out.empty()) out << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relative-entropy correlation measures of small multipartite quantum states"};
  app.name("qcorr");
  app.require_subcommand(1);

  Common mc, cc, sc, pc;
  std::string partition, m_measures = "S,T,D,E,C";
  bool no_catalog = false;
  auto* measure = app.add_subcommand("measure", "Compute S, T, D, E and C for one partition");
  add_common(measure, mc, "json");
  add_state(measure, mc);
  measure->add_option("--partition", partition, "Partition, e.g. A:B:C, AB:C, BC:A")->required();
  measure->add_option("--measures", m_measures, "Comma-separated subset of S,T,D,E,C");
  measure->add_flag("--no-catalog", no_catalog, "Ignore closed forms and analytic shortcuts");

  std::string c_measures = "T,E,D";
  auto* check = app.add_subcommand("check", "Evaluate the additivity relations");
  add_common(check, cc, "json");
  add_state(check, cc);
  check->add_option("--measures", c_measures, "Comma-separated subset of T,E,D");

  std::string param = "p", grid = "0:1:0.02", s_measures = "T,E,D,C", columns, crossing;
  bool discord_catalog = false, ree_estimator = false;
  auto* scan = app.add_subcommand("scan", "Sweep a one-parameter family");
  add_common(scan, sc, "csv");
  add_state(scan, sc);
  scan->add_option("--param", param, "Swept parameter name");
  scan->add_option("--grid", grid, "start:stop:step");
  scan->add_option("--measures", s_measures, "Comma-separated subset of T,E,D,C");
  scan->add_option("--columns", columns, "Comma-separated output columns");
  scan->add_option("--crossing", crossing, "Column whose sign change is located by bisection");
  scan->add_flag("--discord-catalog", discord_catalog, "Use closed-form discord where known");
  scan->add_flag("--ree-estimator", ree_estimator, "Use the estimator even where E is known");

  long n = 0;
  std::string method = "acin_uniform";
  auto* sample = app.add_subcommand("sample", "Test the discord conjecture on random pure states");
  add_common(sample, pc, "csv");
  sample->add_option("--n", n, "Number of samples")->required();
  sample->add_option("--method", method, "acin_uniform or haar");

  std::vector<std::string> argv_store{"qcorr"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*measure) return cmd_measure(mc, partition, m_measures, no_catalog, out);
    if (*check) return cmd_check(cc, c_measures, out);
    if (*scan)
      return cmd_scan(sc, param, grid, s_measures, columns, crossing, discord_catalog,
                      ree_estimator, out);
    return cmd_sample(pc, n, method, out);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qcorr::cli
