#include <doctest.h>

#include <cmath>

#include "growthlab/cayley.hpp"
#include "growthlab/error.hpp"
#include "growthlab/rate.hpp"

using namespace growthlab;

namespace {

GrowthTable table(std::vector<std::uint64_t> v) {
  GrowthTable t;
  t.counts = std::move(v);
  return t;
}

GrowthTable geometric(std::uint64_t base, std::size_t n) {
  std::vector<std::uint64_t> v{1};
  for (std::size_t i = 1; i <= n; ++i) v.push_back(v.back() * base);
  return table(v);
}

GrowthTable f2_closed_form(std::size_t n) {
  std::vector<std::uint64_t> v;
  std::uint64_t p = 1;
  for (std::size_t i = 0; i <= n; ++i, p *= 3) v.push_back(2 * p - 1);
  return table(v);
}

RateHypothesis hyp(FunctionSpec eps, FunctionSpec shift) {
  RateHypothesis h;
  h.epsilon = std::move(eps);
  h.shift = std::move(shift);
  return h;
}

}  // namespace

TEST_CASE("root sequence examples") {
  const auto a = root_sequence(geometric(2, 20));
  CHECK(std::isnan(a[0]));
  for (std::size_t n = 1; n <= 20; ++n) CHECK(a[n] == 2.0);

  std::vector<std::uint64_t> lin;
  for (std::size_t n = 0; n <= 10; ++n) lin.push_back(n + 1);
  const auto b = root_sequence(table(lin));
  CHECK(b[10] == doctest::Approx(std::pow(11.0, 0.1)).epsilon(1e-12));
  CHECK(b[10] == doctest::Approx(1.27).epsilon(0.01));
  for (std::size_t n = 2; n <= 10; ++n) CHECK(b[n] < b[n - 1]);

  const auto c = root_sequence(f2_closed_form(14));
  CHECK(c[14] >= 3.0);
  CHECK(c[14] <= 3.2);
  for (std::size_t n = 6; n <= 14; ++n) CHECK(c[n] < c[n - 1]);
  CHECK_THROWS_AS(root_sequence(table({1, 0, 3})), RangeError);
}

TEST_CASE("roots match the enumerated table") {
  const GrowthTable t = growth_sequence(GroupDescriptor::free(2), nullptr, 8);
  const auto a = root_sequence(t);
  for (std::size_t n = 1; n <= 8; ++n) {
    CHECK(a[n] == doctest::Approx(std::pow(2 * std::pow(3.0, n) - 1, 1.0 / n)).epsilon(1e-12));
  }
}

TEST_CASE("hypothesis check examples") {
  CHECK(check_hypothesis(geometric(2, 12), hyp(FunctionSpec::constant(1), FunctionSpec::constant(0))).ok);
  const auto bad = check_hypothesis(f2_closed_form(12), hyp(FunctionSpec::constant(1), FunctionSpec::constant(0)));
  CHECK_FALSE(bad.ok);
  CHECK(std::find(bad.violations.begin(), bad.violations.end(), std::pair<std::size_t, std::size_t>{1, 1}) !=
        bad.violations.end());
  // Connected concatenation with c = 2 and fibers <= t + 1.
  const auto good = check_hypothesis(f2_closed_form(18), hyp(FunctionSpec::affine(1, 1), FunctionSpec::constant(2)), 8, 8);
  CHECK(good.ok);
  CHECK(good.pairs_checked == 9 * 8);
  CHECK_THROWS_AS(check_hypothesis(f2_closed_form(10), hyp(FunctionSpec::constant(1), FunctionSpec::constant(2)), 8, 8),
                  RangeError);
}

TEST_CASE("growth bound check") {
  RateHypothesis h = hyp(FunctionSpec::constant(1), FunctionSpec::constant(0));
  h.growth_bound = 1.5;
  const auto r = check_hypothesis(geometric(2, 6), h);
  CHECK_FALSE(r.ok);
  CHECK(r.bound_violations.front() == 1);
}

TEST_CASE("lower bound examples") {
  const auto g = fekete_lower_bound(geometric(2, 16), hyp(FunctionSpec::constant(1), FunctionSpec::constant(0)));
  CHECK(g.certified_lower == 2.0);
  CHECK(g.empirical_upper == 2.0);
  CHECK(g.hypothesis_ok);

  const auto f = fekete_lower_bound(f2_closed_form(14), hyp(FunctionSpec::constant(4), FunctionSpec::constant(0)));
  // (beta(14) / 4)^(1/14) with beta(14) = 2 * 3^14 - 1 = 9565937.
  CHECK(f.certified_lower == doctest::Approx(std::pow(9565937.0 / 4, 1.0 / 14)).epsilon(1e-12));
  CHECK(f.certified_lower == doctest::Approx(2.855).epsilon(1e-3));
  CHECK(*f.witness_s == 14);
  CHECK(f.empirical_upper == doctest::Approx(std::pow(9565937.0, 1.0 / 14)).epsilon(1e-12));
  CHECK(f.empirical_upper == doctest::Approx(3.152).epsilon(1e-3));
  CHECK(f.certified_lower <= 3.0);
  CHECK(f.empirical_upper >= 3.0);

  const auto one = fekete_lower_bound(table(std::vector<std::uint64_t>(10, 1)),
                                      hyp(FunctionSpec::constant(1), FunctionSpec::constant(0)));
  CHECK(one.certified_lower == 1.0);
  CHECK(one.empirical_upper == 1.0);
}

TEST_CASE("geometric tables give a collapsed interval") {
  for (std::uint64_t base : {1, 2, 3, 5, 7}) {
    const auto r = fekete_lower_bound(geometric(base, 12), hyp(FunctionSpec::constant(1), FunctionSpec::constant(0)));
    CHECK(r.certified_lower == static_cast<double>(base));
    CHECK(r.empirical_upper == static_cast<double>(base));
  }
}

TEST_CASE("certified lower bound grows with the table") {
  const auto h = hyp(FunctionSpec::affine(1, 1), FunctionSpec::constant(2));
  double prev = 0;
  for (std::size_t n = 2; n <= 18; ++n) {
    const auto r = fekete_lower_bound(f2_closed_form(n), h);
    CHECK(r.certified_lower >= prev);
    prev = r.certified_lower;
    if (r.hypothesis_ok) CHECK(r.certified_lower <= r.empirical_upper);
  }
}

TEST_CASE("quotient-remainder walk") {
  const auto r = fekete_lower_bound(f2_closed_form(10), hyp(FunctionSpec::constant(1), FunctionSpec::constant(2)), 30);
  REQUIRE(r.witness_s.has_value());
  const std::size_t period = *r.witness_s + 2;
  for (const auto& step : r.steps) {
    CHECK(step.n == step.q * period + step.r);
    CHECK(step.r < period);
    CHECK(step.bound <= r.certified_lower + 1e-12);
  }
  CHECK(r.steps.back().n == 30);
}

TEST_CASE("polynomial tables drift toward 1") {
  std::vector<std::uint64_t> lin, f1, cube;
  for (std::uint64_t n = 0; n <= 50; ++n) {
    lin.push_back(n + 1);
    f1.push_back(2 * n + 1);
    cube.push_back((n + 1) * (n + 1) * (n + 1));
  }
  for (const auto& v : {lin, f1, cube}) {
    const auto a = root_sequence(table(v));
    for (std::size_t n = 2; n <= 50; ++n) CHECK(a[n] <= a[n - 1]);
  }
  CHECK(root_sequence(table(lin))[50] < 1.1);
  CHECK(root_sequence(table(f1))[50] < 1.1);
  // 51^(3/50): a cubic has not come down that far yet.
  CHECK(root_sequence(table(cube))[50] == doctest::Approx(std::pow(51.0, 3.0 / 50)).epsilon(1e-12));
}

TEST_CASE("function specs") {
  CHECK(FunctionSpec::parse("const:4")(7) == 4);
  CHECK(FunctionSpec::parse("affine:1.5,2")(2) == 5);
  CHECK(FunctionSpec::parse("table:1,2,4")(2) == 4);
  CHECK(FunctionSpec::parse("3")(0) == 3);
  CHECK_THROWS_AS(FunctionSpec::parse("table:1,2")(5), RangeError);
  CHECK_THROWS_AS(FunctionSpec::parse("affine:1"), MalformedInput);
  CHECK_THROWS_AS(FunctionSpec::parse("const:x"), MalformedInput);
  CHECK(FunctionSpec::parse("affine:0.5,1").natural(2) == 2);
  CHECK_THROWS_AS(FunctionSpec::parse("affine:0.5,1").natural(1), RangeError);
  for (const char* s : {"const:4", "affine:1.5,2", "table:1,2,4"}) CHECK(FunctionSpec::parse(s).to_string() == s);
}
