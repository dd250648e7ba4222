#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = qcorr::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"measure", "--family", "ghz"}).code == 2);  // no partition
  CHECK(run({"measure", "--family", "nope", "--partition", "A:B"}).code == 2);
  CHECK(run({"measure", "--family", "ghz", "--partition", "A:D"}).code == 2);
  CHECK(run({"measure", "--family", "ghz", "--partition", "A:B", "--format", "xml"}).code == 2);
  CHECK(run({"measure", "--family", "ghz", "--partition", "A:B", "--measures", "Q"}).code == 2);
  CHECK(run({"measure", "--family", "ghz_plus", "--params", "p", "--partition", "A:B"}).code == 2);
  CHECK(run({"measure", "--partition", "A:B"}).code == 2);
  CHECK(run({"measure", "--family", "ghz", "--partition", "A:B", "--starts", "-1"}).code == 2);
  const auto r = run({"measure", "--family", "ghz_plus", "--params", "p=2", "--partition", "A:B"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("measure on named states") {
  const auto r = run({"measure", "--family", "ghz", "--partition", "A:B:C"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["measures"]["D"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["measures"]["E"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["measures"]["T"]["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(j["measures"]["S"]["value"].get<double>() == doctest::Approx(0.0));
  CHECK(j["measures"]["D"]["bound"] == "exact");
  CHECK(j["partition"] == "A:B:C");

  const auto ce = run({"measure", "--family", "counterexample", "--params", "p=0.5", "--partition", "BC:A",
                       "--no-catalog", "--measures", "D"});
  REQUIRE(ce.code == 0);
  const auto jc = nlohmann::json::parse(ce.out);
  CHECK(std::abs(jc["measures"]["D"]["value"].get<double>()) < 1e-6);
  CHECK(jc["measures"]["D"]["bound"] == "upper_bound");
  CHECK(jc["optimizer"]["starts_used"].get<int>() > 0);

  const auto csv = run({"measure", "--family", "w", "--partition", "BC:A", "--format", "csv", "--measures", "T,E"});
  REQUIRE(csv.code == 0);
  const auto ls = lines(csv.out);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "# qcorr-csv v1");
  CHECK(ls[1] == "quantity,value,bound,source");
  CHECK(ls[2].rfind("T,", 0) == 0);
  CHECK(ls[3].rfind("E,0.918295834", 0) == 0);
}

TEST_CASE("state files") {
  write("cli_ghz.json", R"({"family":"ghz"})");
  CHECK(run({"measure", "--state", "cli_ghz.json", "--partition", "AB:C", "--measures", "S,T"}).code == 0);
  write("cli_bad.json", "{\"dims\": [2], \"matrix\": ");
  CHECK(run({"measure", "--state", "cli_bad.json", "--partition", "A:B"}).code == 2);
  write("cli_trace.json", R"({"dims":[2,2],"matrix":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],
    [[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]})");
  CHECK(run({"measure", "--state", "cli_trace.json", "--partition", "A:B"}).code == 2);
  CHECK(run({"measure", "--state", "missing_file.json", "--partition", "A:B"}).code == 2);
  CHECK(run({"measure", "--state", "cli_ghz.json", "--family", "ghz", "--partition", "A:B"}).code == 2);
}

TEST_CASE("check exit codes") {
  const auto g = run({"check", "--family", "ghz", "--starts", "4"});
  CHECK(g.code == 0);
  const auto j = nlohmann::json::parse(g.out);
  CHECK(j["gating_violation"] == false);
  for (const auto& row : j["relations"]) CHECK(row["verdict"] == "SATISFIED");

  const auto ce = run({"check", "--family", "counterexample", "--params", "p=0.3", "--measures", "D",
                       "--starts", "4", "--format", "csv"});
  CHECK(ce.code == 0);
  CHECK(ce.out.find("R_D_CONJ,BCA,0,0.3") != std::string::npos);
  CHECK(ce.out.find(",VIOLATED,exploratory,0,") != std::string::npos);
  CHECK(lines(ce.out)[1] == "id,permutation,lhs,rhs,residual,verdict,status,gating,certified");

  CHECK(run({"check", "--family", "ghz", "--measures", "C"}).code == 2);
}

TEST_CASE("scan output") {
  const auto r = run({"scan", "--family", "ghz_plus", "--grid", "0.1:0.3:0.1", "--measures", "D",
                      "--columns", "D_ABC,D_AB", "--starts", "4"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "# qcorr-csv v1");
  CHECK(ls[1] == "p,D_ABC,D_AB");
  for (int i = 0; i < 3; ++i) {
    std::stringstream ss(ls[2 + i]);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    const double p = std::stod(a);
    CHECK(p == doctest::Approx(0.1 * (i + 1)));
    CHECK(std::abs(std::stod(b) - (h2(p) + p)) < 1e-3);
    CHECK(std::abs(std::stod(c) - p) < 1e-3);
  }

  CHECK(run({"scan", "--family", "ghz_plus", "--grid", "0:1:0.5", "--columns", "X_ABC"}).code == 2);
  CHECK(run({"scan", "--family", "ghz_plus", "--grid", "0:1"}).code == 2);
  CHECK(run({"scan", "--family", "ghz_plus", "--grid", "0:1:0.5", "--measures", "T", "--crossing", "D_ABC"}).code ==
        2);

  // strong subadditivity keeps this column nonnegative
  const auto c = run({"scan", "--family", "w_asym", "--grid", "0:1:0.25", "--measures", "T", "--crossing",
                      "T_c2_res_B", "--columns", "T_c2_res_B", "--out", "cli_scan.csv"});
  REQUIRE(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["found"] == false);
  CHECK(slurp("cli_scan.csv").find("# crossing T_c2_res_B none") != std::string::npos);

  const auto dflt = run({"scan", "--family", "ghz", "--param", "unused", "--grid", "0:0:1", "--measures", "T"});
  CHECK(dflt.code == 2);  // ghz takes no parameter
  const auto j = run({"scan", "--family", "ghz_general", "--param", "alpha2", "--grid", "0.5:0.5:1", "--measures",
                      "T", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["rows"].size() == 1);
  CHECK(doc["rows"][0]["T_ABC"].get<double>() == doctest::Approx(3.0));
  CHECK(doc["columns"].size() == 19);
}

TEST_CASE("sample is reproducible") {
  CHECK(run({"sample", "--n", "0"}).code == 2);
  CHECK(run({"sample", "--n", "2", "--method", "uniform"}).code == 2);
  const auto a = run({"sample", "--n", "3", "--seed", "5", "--starts", "3"});
  const auto b = run({"sample", "--n", "3", "--seed", "5", "--starts", "3", "--threads", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto ls = lines(a.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "# qcorr-csv v1");
  CHECK(ls[1] == "index,lhs,rhs,residual,permutation");
  CHECK(ls[2].rfind("0,", 0) == 0);

  const auto f = run({"sample", "--n", "3", "--seed", "5", "--starts", "3", "--out", "cli_sample.csv"});
  REQUIRE(f.code == 0);
  CHECK(slurp("cli_sample.csv") == a.out);
  const auto summary = nlohmann::json::parse(f.out);
  CHECK(summary["n"] == 3);
  CHECK(summary["violation_count"] == 0);
  CHECK(summary["seed"] == 5);
  CHECK(run({"sample", "--n", "3", "--seed", "6", "--starts", "3"}).out != a.out);
}

TEST_CASE("config precedence") {
  write("cli_config.json", R"({"seed": 7, "starts": 2, "slack": 0.001})");
  const auto viaconfig = run({"measure", "--family", "ghz", "--partition", "A:B", "--measures", "T",
                              "--config", "cli_config.json"});
  REQUIRE(viaconfig.code == 0);
  const auto j = nlohmann::json::parse(viaconfig.out);
  CHECK(j["config"]["seed"] == 7);
  CHECK(j["config"]["starts"] == 2);
  CHECK(j["config"]["slack"] == 0.001);
  CHECK(j["config"]["max_iter"] == 2000);

  const auto flag = run({"measure", "--family", "ghz", "--partition", "A:B", "--measures", "T", "--config",
                         "cli_config.json", "--seed", "9"});
  const auto jf = nlohmann::json::parse(flag.out);
  CHECK(jf["config"]["seed"] == 9);
  CHECK(jf["config"]["starts"] == 2);

  const auto dflt = nlohmann::json::parse(run({"measure", "--family", "ghz", "--partition", "A:B", "--measures", "T"}).out);
  CHECK(dflt["config"]["seed"] == 42);
  CHECK(dflt["config"]["starts"] == 20);

  write("cli_config_bad.json", R"({"sead": 7})");
  CHECK(run({"measure", "--family", "ghz", "--partition", "A:B", "--config", "cli_config_bad.json"}).code == 2);
  write("cli_config_type.json", R"({"seed": "x"})");
  CHECK(run({"measure", "--family", "ghz", "--partition", "A:B", "--config", "cli_config_type.json"}).code == 2);
  CHECK(run({"measure", "--family", "ghz", "--partition", "A:B", "--config", "nowhere.json"}).code == 2);
}
