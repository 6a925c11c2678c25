#include "hardylab/prodrule.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support/lattice_oracle.hpp"

using namespace hardylab;
using namespace hardylab::prodrule;

namespace {

// every parametric family member exercised by the randomized trials
std::vector<ProductRuleFunction> family_roster(std::size_t n) {
  return {ProductRuleFunction::const1(n),
          ProductRuleFunction::const0(n),
          ProductRuleFunction::case2(n, 0, 0.0),
          ProductRuleFunction::case2(n, 1, 0.5),
          ProductRuleFunction::case2(n, 1, 2.0, /*sign_carrying=*/true),
          ProductRuleFunction::case2(n, 2, 1.0, /*sign_carrying=*/true),
          ProductRuleFunction::case3(n, {0, 1}, {1.0, 0.5}),
          ProductRuleFunction::case3(n, {0, 2}, {2.0, 1.0}, {true, false})};
}

ExplicitLattice principal_filter(std::size_t n, std::uint32_t generator) {
  ExplicitLattice l;
  l.n = n;
  l.ones.assign(std::size_t{1} << n, false);
  for (std::uint32_t mask = 0; mask < l.ones.size(); ++mask)
    l.ones[mask] = (mask & generator) == generator && generator != 0;
  return l;
}

}  // namespace

TEST_CASE("evaluating the parametric families") {
  SUBCASE("case 2 picks out one eigenvalue") {
    // first eigenvalue, squared
    auto f = ProductRuleFunction::case2(3, 0, 2.0);
    CHECK(evaluate(f, DiagonalOperator({3.0, 5.0, 7.0})) == 9.0);
  }
  SUBCASE("case 2 is the indicator on the singled-out projector") {
    auto f = ProductRuleFunction::case2(3, 0, 0.7);
    CHECK(evaluate(f, DiagonalOperator::projector(3, {0})) == 1.0);
    CHECK(evaluate(f, DiagonalOperator::projector(3, {1})) == 0.0);
  }
  SUBCASE("the constant function is 1 even on the zero operator") {
    auto f = ProductRuleFunction::const1(3);
    CHECK(evaluate(f, DiagonalOperator::zero(3)) == 1.0);
  }
  SUBCASE("sign-carrying case 2") {
    auto f = ProductRuleFunction::case2(3, 0, 1.0, true);
    CHECK(evaluate(f, DiagonalOperator({-2.0, 1.0, 1.0})) == -2.0);
    CHECK(evaluate(f, DiagonalOperator({2.0, 1.0, 1.0})) == 2.0);
  }
  SUBCASE("case 3 multiplies its factors") {
    auto f = ProductRuleFunction::case3(4, {0, 1}, {1.0, 2.0});
    CHECK(evaluate(f, DiagonalOperator({3.0, 2.0, 9.0, 9.0})) ==
          doctest::Approx(12.0).epsilon(1e-12));
    CHECK(evaluate(f, DiagonalOperator({0.0, 2.0, 9.0, 9.0})) == 0.0);
  }
  SUBCASE("dimension mismatches are rejected") {
    auto f = ProductRuleFunction::case2(3, 0, 1.0);
    CHECK_THROWS_AS(evaluate(f, DiagonalOperator({1.0, 2.0, 3.0, 4.0})),
                    DomainError);
  }
  SUBCASE("lattice assignments reject non-projector spectra") {
    auto f = ProductRuleFunction::lattice(principal_filter(3, 0b001));
    CHECK_THROWS_AS(evaluate(f, DiagonalOperator({1.0, 0.5, 0.0})),
                    DomainError);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ProductRuleFunction::case2(3, 5, 1.0), DomainError);
  CHECK_THROWS_AS(ProductRuleFunction::case2(3, 0, -0.5), DomainError);
  CHECK_THROWS_AS(ProductRuleFunction::case3(3, {0}, {1.0}), DomainError);
  CHECK_THROWS_AS(ProductRuleFunction::case3(3, {0, 0}, {1.0, 1.0}),
                  DomainError);
  CHECK_THROWS_AS(ProductRuleFunction::case3(3, {0, 1}, {1.0, 0.0}),
                  DomainError);
  CHECK_THROWS_AS(DiagonalOperator({1.0, 2.0}), DomainError);
}

TEST_CASE("the product rule on explicit operators") {
  auto c1 = ProductRuleFunction::const1(3);
  CHECK(check_product_rule(c1, DiagonalOperator({1.0, -2.0, 0.5}),
                           DiagonalOperator({0.0, 3.0, 2.0})));

  SUBCASE("positive-spectrum pairs under a fractional exponent") {
    auto f = ProductRuleFunction::case2(3, 0, 0.5);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(0.01, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      DiagonalOperator a({dist(rng), dist(rng), dist(rng)});
      DiagonalOperator b({dist(rng), dist(rng), dist(rng)});
      CHECK(check_product_rule(f, a, b));
    }
  }

  SUBCASE("a non-filter lattice assignment fails the rule") {
    // f(P0) = f(P1) = 1 but f(P0 P1) = f(0) = 0
    ExplicitLattice l = ExplicitLattice::from_one_sets(3, {{0}, {1}});
    CHECK_FALSE(l.is_product_closed());
    auto f = ProductRuleFunction::lattice(l);
    CHECK_FALSE(check_product_rule(f, DiagonalOperator::projector(3, {0}),
                                   DiagonalOperator::projector(3, {1})));
  }
}

TEST_CASE("every family member passes seeded random trials") {
  for (std::size_t n : {3u, 4u}) {
    for (const auto& f : family_roster(n)) {
      TrialReport r = random_product_rule_trials(f, 1000, 0xC0FFEE + n);
      INFO(f.describe());
      CHECK(r.failures == 0);
      CHECK(r.trials == 1000);
    }
  }
}

TEST_CASE("functions evaluate to exactly 0 or 1 on projectors") {
  for (const auto& f : family_roster(4)) {
    for (std::uint32_t mask = 0; mask < (1u << 4); ++mask) {
      double v = evaluate(f, DiagonalProjector{4, mask}.to_operator());
      CHECK((v == 0.0 || v == 1.0));
    }
  }
}

TEST_CASE("classification by values on rank-1 projectors") {
  SUBCASE("constant one is case 1") {
    auto report = classify_on_projectors(ProductRuleFunction::const1(3), 3);
    CHECK(report.kind == CaseKind::Case1AllOne);
    CHECK(report.one_singletons.size() == 3);
  }
  SUBCASE("a case-2 member singles out its index") {
    auto report =
        classify_on_projectors(ProductRuleFunction::case2(3, 1, 1.0), 3);
    CHECK(report.kind == CaseKind::Case2SomeOne);
    REQUIRE(report.one_singletons.size() == 1);
    CHECK(report.one_singletons[0] == 1);
  }
  SUBCASE("a case-3 member is 0 on all rank-1 projectors") {
    auto report = classify_on_projectors(
        ProductRuleFunction::case3(3, {0, 1}, {1.0, 1.0}), 3);
    CHECK(report.kind == CaseKind::Case3AllZero);
    REQUIRE(report.minimal_ones.size() == 1);
    CHECK(report.minimal_ones[0].mask == 0b011);
  }
  SUBCASE("constant zero has no 1-valued projector at all") {
    auto report = classify_on_projectors(ProductRuleFunction::const0(3), 3);
    CHECK(report.kind == CaseKind::Case3AllZero);
    CHECK(report.minimal_ones.empty());
  }
}

TEST_CASE("lattice enumeration matches the exhaustive oracle") {
  for (std::size_t n : {3u, 4u}) {
    auto enumerated = enumerate_lattice_assignments(n);
    auto oracle = testing::brute_force_lattice_assignments(n);
    REQUIRE(enumerated.size() == oracle.size());
    std::vector<std::vector<bool>> got;
    for (const auto& l : enumerated) got.push_back(l.ones);
    std::sort(got.begin(), got.end());
    std::sort(oracle.begin(), oracle.end());
    CHECK(got == oracle);
  }
}

TEST_CASE("the enumerated assignments for n = 3 are the expected nine") {
  auto enumerated = enumerate_lattice_assignments(3);
  REQUIRE(enumerated.size() == 9);

  std::vector<std::vector<bool>> expected;
  ExplicitLattice all_zero;
  all_zero.n = 3;
  all_zero.ones.assign(8, false);
  expected.push_back(all_zero.ones);
  ExplicitLattice all_one;
  all_one.n = 3;
  all_one.ones.assign(8, true);
  expected.push_back(all_one.ones);
  for (std::uint32_t g = 1; g < 8; ++g)
    expected.push_back(principal_filter(3, g).ones);

  std::vector<std::vector<bool>> got;
  for (const auto& l : enumerated) got.push_back(l.ones);
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  CHECK(got == expected);
}

TEST_CASE("enumeration counts: 2 constants plus 2^n - 1 principal filters") {
  CHECK(enumerate_lattice_assignments(3).size() == 9);
  CHECK(enumerate_lattice_assignments(4).size() == 17);
  CHECK(enumerate_lattice_assignments(5).size() == 33);
  CHECK_THROWS_AS(enumerate_lattice_assignments(2), DomainError);
  CHECK_THROWS_AS(enumerate_lattice_assignments(6), DomainError);
}

TEST_CASE("enumerated one-families are filters") {
  for (const auto& l : enumerate_lattice_assignments(4)) {
    CHECK(l.is_product_closed());
    std::uint32_t subsets = 1u << l.n;
    bool has_one = false, all_one = true;
    for (std::uint32_t m = 0; m < subsets; ++m) {
      if (l.ones[m]) has_one = true;
      else all_one = false;
    }
    if (!has_one || all_one) continue;
    // upward closed, intersection closed, empty set excluded
    CHECK_FALSE(l.ones[0]);
    for (std::uint32_t a = 0; a < subsets; ++a) {
      if (!l.ones[a]) continue;
      for (std::uint32_t b = 0; b < subsets; ++b) {
        if ((a & b) == a) CHECK(l.ones[b]);  // supersets stay in
        if (l.ones[b]) CHECK(l.ones[a & b]);
      }
    }
  }
}

TEST_CASE("mixed-singleton assignments single out one dimension") {
  CHECK(uniqueness_theorem_check(3));
  CHECK(uniqueness_theorem_check(4));
  CHECK(uniqueness_theorem_check(5));
}

TEST_CASE("assignments 1 on some but not all singletons have one singleton") {
  for (std::size_t n : {3u, 4u, 5u}) {
    for (const auto& l : enumerate_lattice_assignments(n)) {
      std::size_t one_singletons = 0, zero_singletons = 0;
      for (std::size_t i = 0; i < n; ++i)
        (l.ones[std::size_t{1} << i] ? one_singletons : zero_singletons)++;
      if (one_singletons > 0 && zero_singletons > 0)
        CHECK(one_singletons == 1);
    }
  }
}

TEST_CASE("derivation traces") {
  SUBCASE("constant-one chain, including f(K) = f(3 P1) = 1") {
    auto steps = case_derivation_trace(ProductRuleFunction::const1(3));
    REQUIRE_FALSE(steps.empty());
    bool found = false;
    for (const auto& s : steps) {
      CHECK(s.holds);
      if (s.identity.find("f(3 P1)") != std::string::npos) {
        found = true;
        CHECK(s.lhs == 1.0);
        CHECK(s.rhs == 1.0);
      }
    }
    CHECK(found);
  }
  SUBCASE("case-2 reduction to the singled-out eigenvalue") {
    auto steps =
        case_derivation_trace(ProductRuleFunction::case2(3, 1, 0.5, true));
    REQUIRE_FALSE(steps.empty());
    for (const auto& s : steps) {
      INFO(s.identity, ": ", s.lhs, " vs ", s.rhs);
      CHECK(s.holds);
    }
    // the trivial 1 * 1 = 1 multiplicativity instance is part of the trace
    bool trivial = false;
    for (const auto& s : steps)
      if (s.identity.find("f(1 Pi) f(1 Pi)") != std::string::npos)
        trivial = true;
    CHECK(trivial);
  }
  SUBCASE("traces are defined for the constant-one and case-2 families") {
    CHECK_THROWS_AS(case_derivation_trace(ProductRuleFunction::const0(3)),
                    DomainError);
  }
}

TEST_CASE("small exponents approach the support indicator") {
  auto f = ProductRuleFunction::case2(3, 0, 1e-6);
  for (double li : {0.5, 1.0, 2.0}) {
    double v = evaluate(f, DiagonalOperator({li, 1.0, 1.0}));
    CHECK(std::abs(v - 1.0) <= 1e-5);
  }
  CHECK(evaluate(f, DiagonalOperator({0.0, 1.0, 1.0})) == 0.0);
}

TEST_CASE("sign-carrying case 2 under every sign combination") {
  auto f = ProductRuleFunction::case2(3, 0, 1.5, true);
  const double values[] = {1.25, -1.25, 0.75, -0.75};
  for (double a : values)
    for (double b : values) {
      DiagonalOperator ha({a, 1.0, 1.0});
      DiagonalOperator hb({b, 1.0, 1.0});
      CHECK(check_product_rule(f, ha, hb));
    }
}
