#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcorr/entanglement.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"

using namespace qcorr;

namespace {

double h2(double p) {
  double h = 0;
  for (double x : {p, 1 - p})
    if (x > 0) h -= x * std::log2(x);
  return h;
}

ReeConfig light() {
  ReeConfig c;
  c.restarts = 1;
  c.max_iter = 400;
  return c;
}

OptimizerConfig few_starts() {
  OptimizerConfig c;
  c.starts = 4;
  return c;
}

}  // namespace

TEST_CASE("catalog values") {
  const double log3 = std::log2(3.0);
  const auto w = *named_state("w").family();
  CHECK(std::abs(ree_closed_form(w, Partition::parse("BC:A")) - 0.918296) < 1e-6);
  CHECK(std::abs(ree_closed_form(w, Partition::parse("AC:B")) - (log3 - 2.0 / 3)) < 1e-12);
  CHECK(std::abs(ree_closed_form(w, Partition::parse("A:B:C")) - (2 * log3 - 2)) < 1e-12);
  CHECK(std::abs(ree_closed_form(w, Partition::parse("A:B")) - (log3 - 4.0 / 3)) < 1e-12);

  const auto gp = *named_state("ghz_plus", {{"p", 0.5}}).family();
  CHECK(std::abs(ree_closed_form(gp, Partition::parse("BC:A")) - h2(0.5 + std::sqrt(0.125))) < 1e-12);
  CHECK(std::abs(ree_closed_form(gp, Partition::parse("BC:A")) - 0.600876) < 1e-6);

  const auto g1 = *named_state("ghz_general", {{"alpha2", 1.0}}).family();
  CHECK(ree_closed_form(g1, Partition::parse("A:B:C")) == 0.0);

  CHECK_THROWS_AS(ree_closed_form(*named_state("w_white", {{"p", 0.2}}).family(), Partition::parse("A:B:C")),
                  CatalogMiss);
}

TEST_CASE("catalog respects monotonicity under partial trace") {
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    for (const char* fam : {"ghz_plus", "ghz_general", "w"}) {
      const auto s = std::string(fam) == "w" ? named_state(fam)
                     : std::string(fam) == "ghz_general" ? named_state(fam, {{"alpha2", p}})
                                                         : named_state(fam, {{"p", p}});
      const auto& f = *s.family();
      // E(XY:Z) >= E(X:Z) whenever both are cataloged
      const char* pairs[][2] = {{"AB:C", "A:C"}, {"AB:C", "B:C"}, {"AC:B", "A:B"}, {"BC:A", "A:B"}};
      for (auto& pr : pairs) {
        double big = 0, small = 0;
        try {
          big = ree_closed_form(f, Partition::parse(pr[0]));
          small = ree_closed_form(f, Partition::parse(pr[1]));
        } catch (const CatalogMiss&) {
          continue;
        }
        CAPTURE(fam);
        CAPTURE(pr[0]);
        CHECK(big >= small - 1e-9);
      }
    }
  }
}

TEST_CASE("ghz_plus tripartite value splits") {
  for (double p : {0.2, 0.6}) {
    const auto& f = *named_state("ghz_plus", {{"p", p}}).family();
    const double abc = ree_closed_form(f, Partition::parse("A:B:C"));
    CHECK(std::abs(abc - h2(p)) < 1e-12);
    CHECK(std::abs(abc - (ree_closed_form(f, Partition::parse("A:B")) +
                          ree_closed_form(f, Partition::parse("AB:C")))) < 1e-12);
  }
}

TEST_CASE("ghz_plus keeps entanglement between B and C") {
  for (double p : {0.1, 0.3, 0.5, 0.8}) {
    CAPTURE(p);
    const auto s = named_state("ghz_plus", {{"p", p}});
    const int bc[] = {1, 2};
    const int b[] = {0};
    const int d2[] = {2, 2};
    const ComplexMatrix rho = s.reduced(bc).rho();
    // partial transpose on the second qubit
    ComplexMatrix pt(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) pt(2 * i + j, 2 * k + l) = rho(2 * i + l, 2 * k + j);
    CHECK(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(pt).eigenvalues()(0) < -1e-3);

    // hashing lower bound and the dephased separable state as upper bound
    const double lower = von_neumann_entropy(partial_trace(rho, d2, b)) - von_neumann_entropy(rho);
    const ComplexMatrix diag = rho.diagonal().asDiagonal();
    const double upper = relative_entropy(rho, diag).value;
    CHECK(std::abs(upper - lower) < 1e-9);
    CHECK(std::abs(ree_closed_form(*s.family(), Partition::parse("B:C")) - lower) < 1e-9);
  }
}

TEST_CASE("pure bipartite values") {
  const ComplexVector bell = (ket("00") + ket("11")) / std::sqrt(2.0);
  CHECK(std::abs(pure_bipartite_ree(MultipartiteState::from_pure({2, 2}, bell), Partition::parse("A:B")) - 1.0) <
        1e-12);
  CHECK(std::abs(pure_bipartite_ree(named_state("ghz"), Partition::parse("AB:C")) - 1.0) < 1e-12);
  CHECK(std::abs(pure_bipartite_ree(named_state("w"), Partition::parse("BC:A")) -
                 (std::log2(3.0) - 2.0 / 3)) < 1e-12);
  CHECK_THROWS_AS(pure_bipartite_ree(named_state("w_white", {{"p", 0.1}}), Partition::parse("BC:A")),
                  PurityError);
}

TEST_CASE("estimator on GHZ and W") {
  const auto ghz = named_state("ghz");
  const auto r = ree_upper_bound(ghz, Partition::parse("A:B:C"));
  CHECK(std::abs(r.value - 1.0) < 1e-4);

  const auto w = named_state("w");
  const auto rw = ree_upper_bound(w, Partition::parse("A:B:C"));
  CHECK(std::abs(rw.value - (2 * std::log2(3.0) - 2)) < 5e-3);
  CHECK(rw.value >= 2 * std::log2(3.0) - 2 - 1e-6);
}

TEST_CASE("separable states give zero") {
  const auto ce = named_state("counterexample", {{"p", 0.3}});
  CHECK(std::abs(ree_upper_bound(ce, Partition::parse("A:B:C"), few_starts(), light()).value) < 1e-4);
  const auto prod = MultipartiteState::from_pure({2, 2}, ket("0+"));
  CHECK(std::abs(ree_upper_bound(prod, Partition::parse("A:B"), few_starts(), light()).value) < 1e-8);
}

TEST_CASE("pure bipartite agreement") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto s = sample_random_pure(seed, SamplingMethod::haar);
    const auto part = Partition::parse("AB:C");
    CHECK(std::abs(ree_upper_bound(s, part, few_starts(), light()).value - pure_bipartite_ree(s, part)) < 5e-3);
  }
}

TEST_CASE("result invariants and seeding bounds") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto s = sample_random_mixed(seed, 2 + seed);
    const auto part = Partition::parse(seed == 1 ? "AB:C" : "A:B:C");
    const auto d = discord(s, part, few_starts());
    const auto r = ree_upper_bound(s, part, few_starts(), light(), &d);
    const auto& e = r.ensemble;
    double total = 0;
    for (double w : e.weights) {
      CHECK(w >= 0.0);
      total += w;
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
    for (const auto& term : e.terms)
      for (const auto& v : term) CHECK(std::abs(v.norm() - 1.0) < 1e-10);
    const auto g = group_blocks(s, part);
    CHECK(std::abs(relative_entropy(g.rho(), e.density()).value - r.value) < 1e-8);
    CHECK(r.value >= -1e-6);
    CHECK(r.value <= d.value + 1e-6);
    CHECK(d.value <= total_mutual_information(s, part) + 1e-9);
    CHECK_FALSE(r.seeded_from.empty());
  }
}

TEST_CASE("estimator is deterministic and checks dimensions") {
  const auto s = sample_random_mixed(12, 4);
  const auto part = Partition::parse("A:BC");
  CHECK(ree_upper_bound(s, part, few_starts(), light()).value ==
        ree_upper_bound(s, part, few_starts(), light()).value);
  const MultipartiteState big({3, 3}, ComplexMatrix::Identity(9, 9) / 9.0);
  CHECK_THROWS_AS(ree_upper_bound(big, Partition::parse("A:B"), few_starts(), light()), DimensionError);
}

TEST_CASE("separable ensemble plumbing") {
  SeparableEnsemble e;
  e.dims = {2, 2};
  e.weights = {0.25, 0.75};
  e.terms = {{ket("0"), ket("1")}, {ket("+"), ket("-")}};
  CHECK(max_abs(ComplexMatrix(e.term_vector(0) - ket("01"))) < 1e-15);
  const ComplexMatrix expected = 0.25 * ket("01") * ket("01").adjoint() + 0.75 * ket("+-") * ket("+-").adjoint();
  CHECK(max_abs(e.density() - expected) < 1e-15);
}
