#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/state_io.hpp"
#include "qcorr/states.hpp"

using namespace qcorr;

namespace {

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qcorr_test_" + name);
}

}  // namespace

TEST_CASE("ket symbols") {
  CHECK(max_abs(ComplexMatrix(ket("0") - ComplexVector::Unit(2, 0))) == 0.0);
  const ComplexVector plus = ket("+");
  CHECK(std::abs(plus(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(plus(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(ket("-")(1) + 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(ket("101").size() == 8);
  CHECK(std::abs(ket("101")(5) - 1.0) < 1e-15);
  CHECK_THROWS_AS(ket("x"), ParamError);
}

TEST_CASE("ghz family") {
  const auto s = named_state("ghz");
  ComplexMatrix expected = ComplexMatrix::Zero(8, 8);
  expected(0, 0) = expected(0, 7) = expected(7, 0) = expected(7, 7) = 0.5;
  CHECK(max_abs(s.rho() - expected) < 1e-15);
  CHECK(s.dims() == std::vector<int>{2, 2, 2});
  CHECK(s.is_pure());
  REQUIRE(s.family().has_value());
  CHECK(s.family()->family == "ghz");
}

TEST_CASE("mixture families") {
  const ComplexVector w = (ket("001") + ket("010") + ket("100")) / std::sqrt(3.0);
  CHECK(max_abs(named_state("w_white", {{"p", 0.0}}).rho() - projector(w)) < 1e-15);
  CHECK(max_abs(named_state("w_white", {{"p", 1.0}}).rho() - ComplexMatrix::Identity(8, 8) / 8.0) <
        1e-15);

  const auto ce = named_state("counterexample", {{"p", 0.3}});
  CHECK(std::abs(ce.purity() - 0.58) < 1e-12);
  CHECK(std::abs(ce.family()->param("p") - 0.3) == 0.0);

  // the two BC branches of the counterexample are orthogonal
  CHECK(std::abs(ket("00").dot(ket("+1"))) == 0.0);

  const auto wa = named_state("w_asym", {{"p", 0.4}});
  const ComplexMatrix expected =
      0.6 * projector(w) + 0.2 * (projector(ket("000")) + projector(ket("1+1")));
  CHECK(max_abs(wa.rho() - expected) < 1e-15);
}

TEST_CASE("pure families") {
  const ComplexVector v = std::sqrt(0.3) * ket("000") + std::sqrt(0.7) * ket("+11");
  CHECK(max_abs(named_state("ghz_plus", {{"p", 0.3}}).rho() - projector(v)) < 1e-15);
  const ComplexVector m = std::sqrt(0.3) * ket("000") + std::sqrt(0.7) * ket("-11");
  CHECK(max_abs(named_state("ghz_minus", {{"p", 0.3}}).rho() - projector(m)) < 1e-15);
  const auto g = named_state("ghz_general", {{"alpha2", 0.5}});
  CHECK(max_abs(g.rho() - named_state("ghz").rho()) < 1e-15);
  const auto wg = named_state("w_general", {{"alpha2", 1.0 / 3}, {"beta2", 1.0 / 3}, {"gamma2", 1.0 / 3}});
  CHECK(max_abs(wg.rho() - named_state("w").rho()) < 1e-15);
}

TEST_CASE("named_state parameter errors") {
  CHECK_THROWS_AS(named_state("nope"), ParamError);
  CHECK_THROWS_AS(named_state("ghz_plus"), ParamError);
  CHECK_THROWS_AS(named_state("ghz_plus", {{"p", 1.5}}), ParamError);
  CHECK_THROWS_AS(named_state("ghz_plus", {{"q", 0.5}}), ParamError);
  CHECK_THROWS_AS(named_state("w_general", {{"alpha2", 0.5}, {"beta2", 0.5}, {"gamma2", 0.5}}),
                  ParamError);
  for (const auto& f : known_families()) CHECK_FALSE(f.empty());
}

TEST_CASE("from_acin") {
  AcinParams p;
  CHECK(max_abs(from_acin(p).rho() - projector(ket("000"))) < 1e-15);
  p.lambda = {1 / std::sqrt(2.0), 0, 0, 0, 1 / std::sqrt(2.0)};
  CHECK(max_abs(from_acin(p).rho() - named_state("ghz").rho()) < 1e-15);
  p.lambda = {0.5, 0.5, 0.5, 0.5, 0.0};
  p.phi = 1.0;
  const auto s = from_acin(p);
  CHECK(std::abs(s.purity() - 1.0) < 1e-12);
  ComplexVector psi = 0.5 * (ket("000") + std::exp(Complex(0, 1.0)) * ket("100") + ket("101") + ket("110"));
  CHECK(max_abs(s.rho() - projector(psi)) < 1e-15);
  p.lambda = {0.5, 0.5, 0.5, 0.5, 0.1};
  CHECK_THROWS_AS(from_acin(p), ParamError);
  p.lambda = {-1, 0, 0, 0, 0};
  CHECK_THROWS_AS(from_acin(p), ParamError);
}

TEST_CASE("single-party reductions of Acin states are valid") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = sample_random_pure(seed, SamplingMethod::acin_uniform);
    for (int k = 0; k < 3; ++k) {
      const int keep[] = {k};
      const auto r = s.reduced(keep);
      CHECK(r.dim() == 2);
      CHECK(std::abs(r.rho().trace() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("state validation") {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(MultipartiteState({2, 2}, m));
  CHECK_THROWS_AS(MultipartiteState({2, 2, 2}, m), DimensionError);
  CHECK_THROWS_AS(MultipartiteState({2, 2}, m * 2.0), StateValidationError);
  ComplexMatrix neg = m;
  neg(0, 0) = -0.25;
  neg(1, 1) = 0.75;
  CHECK_THROWS_AS(MultipartiteState({2, 2}, neg), StateValidationError);
  ComplexMatrix nh = m;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(MultipartiteState({2, 2}, nh), StateValidationError);
  CHECK_THROWS_AS(MultipartiteState::from_pure({2}, ComplexVector::Ones(2)), ParamError);
}

TEST_CASE("Partition parsing and canonical form") {
  const auto p = Partition::parse("BC:A");
  REQUIRE(p.size() == 2);
  CHECK(p.blocks()[0] == std::vector<int>{1, 2});
  CHECK(p.blocks()[1] == std::vector<int>{0});
  CHECK(p.to_string() == "BC:A");
  CHECK(p.canonical().to_string() == "A:BC");
  CHECK(p.covers(3));
  CHECK_FALSE(Partition::parse("A:C").covers(3));
  CHECK(Partition::parse("A:C").parties() == std::vector<int>{0, 2});
  CHECK(Partition::singletons(3).to_string() == "A:B:C");
  CHECK_THROWS_AS(Partition::parse("A"), ParamError);
  CHECK_THROWS_AS(Partition::parse("AB:B"), ParamError);
  CHECK_THROWS_AS(Partition::parse("A:1"), ParamError);
  CHECK_THROWS_AS(Partition::parse("A::B"), ParamError);
}

TEST_CASE("group_blocks regroups and traces out") {
  const auto s = named_state("counterexample", {{"p", 0.3}});
  const auto g = group_blocks(s, Partition::parse("BC:A"));
  CHECK(g.dims() == std::vector<int>{4, 2});
  // |1+1> with BC first becomes |+1>|1>
  const ComplexMatrix expected =
      0.3 * projector(ket("000")) + 0.7 * projector(kron(ket("+1"), ket("1")));
  CHECK(max_abs(g.rho() - expected) < 1e-15);

  const auto ac = group_blocks(s, Partition::parse("C:A"));
  CHECK(ac.dims() == std::vector<int>{2, 2});
  const ComplexMatrix ca = 0.3 * projector(ket("00")) + 0.7 * projector(ket("11"));
  CHECK(max_abs(ac.rho() - ca) < 1e-15);
  CHECK_THROWS_AS(group_blocks(s, Partition::parse("A:D")), DimensionError);
}

TEST_CASE("samplers are deterministic") {
  for (auto m : {SamplingMethod::acin_uniform, SamplingMethod::haar}) {
    const auto a = sample_random_pure(7, m), b = sample_random_pure(7, m);
    CHECK(max_abs(a.rho() - b.rho()) == 0.0);
    CHECK(max_abs(a.rho() - sample_random_pure(8, m).rho()) > 1e-6);
    CHECK(std::abs(a.purity() - 1.0) < 1e-12);
  }
  const auto r8 = sample_random_mixed(3, 8);
  CHECK(max_abs(r8.rho() - sample_random_mixed(3, 8).rho()) == 0.0);
  const auto es = hermitian_eig(r8.rho());
  CHECK(std::abs(es.eigenvalues.mean() - 0.125) < 1e-14);
  CHECK(von_neumann_entropy(sample_random_mixed(3, 1)) < 1e-9);
  CHECK_THROWS_AS(sample_random_mixed(1, 0), ParamError);
  CHECK_THROWS_AS(sample_random_mixed(1, 9), ParamError);
  CHECK(parse_sampling_method("haar") == SamplingMethod::haar);
  CHECK(to_string(SamplingMethod::acin_uniform) == "acin_uniform");
  CHECK_THROWS_AS(parse_sampling_method("uniform"), ParamError);
}

TEST_CASE("sampling moments") {
  const int n = 10000;
  double purity_a = 0.0, l0 = 0.0;
  const int keep_a[] = {0};
  for (int i = 0; i < n; ++i) {
    const auto h = sample_random_pure(i, SamplingMethod::haar);
    purity_a += h.reduced(keep_a).purity();
    l0 += std::pow(sample_acin_params(i).lambda[0], 2);
  }
  // Haar average of Tr rho_A^2 for a 2 x 4 split: (2+4)/(2*4+1)
  CHECK(std::abs(purity_a / n - 2.0 / 3.0) < 0.01);
  // uniform on the 4-simplex: each coordinate has mean 1/5
  CHECK(std::abs(l0 / n - 0.2) < 0.01);
}

TEST_CASE("state files round-trip") {
  const auto path = temp_file("ghz.json");
  const auto s = sample_random_mixed(11, 3);
  save_state(s, path);
  const auto t = load_state(path);
  CHECK(t.dims() == s.dims());
  CHECK(max_abs(t.rho() - s.rho()) <= 1e-15);
  std::filesystem::remove(path);

  const auto named = state_from_json({{"family", "ghz_plus"}, {"params", {{"p", 0.3}}}});
  CHECK(max_abs(named.rho() - named_state("ghz_plus", {{"p", 0.3}}).rho()) == 0.0);
  REQUIRE(named.family().has_value());
}

TEST_CASE("state file errors") {
  nlohmann::json m = nlohmann::json::array();
  for (int i = 0; i < 8; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 8; ++j) row.push_back({i == j ? 0.25 : 0.0, 0.0});
    m.push_back(row);
  }
  // trace 2
  CHECK_THROWS_AS(state_from_json({{"dims", {2, 2, 2}}, {"matrix", m}}), StateValidationError);
  CHECK_THROWS_AS(state_from_json({{"dims", {2, 2}}, {"matrix", m}}), FormatError);
  CHECK_THROWS_AS(state_from_json({{"dims", {2, 2, 2}}}), FormatError);
  CHECK_THROWS_AS(state_from_json({{"dims", "x"}, {"matrix", m}}), FormatError);
  m[0][0] = "a";
  CHECK_THROWS_AS(state_from_json({{"dims", {2, 2, 2}}, {"matrix", m}}), FormatError);

  const auto path = temp_file("bad.json");
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_state(path), FormatError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_state(temp_file("missing.json")), FormatError);
}
