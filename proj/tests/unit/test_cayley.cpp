#include <doctest.h>

#include <cmath>
#include <set>

#include "growthlab/cayley.hpp"
#include "growthlab/error.hpp"
#include "oracle.hpp"

using namespace growthlab;

namespace {

const GroupDescriptor F1 = GroupDescriptor::free(1);
const GroupDescriptor F2 = GroupDescriptor::free(2);
const GroupDescriptor F2xF1 = GroupDescriptor::product({2, 1});
const GroupDescriptor F2xF2 = GroupDescriptor::product({2, 2});

Element el(const GroupDescriptor& g, const char* text) { return parse_element(g, text); }

std::uint64_t pow_u(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<std::uint64_t> counts(const GrowthTable& t) { return t.counts; }

}  // namespace

TEST_CASE("ball examples") {
  CHECK(enumerate_ball(F2, 0).size() == 1);
  CHECK(enumerate_ball(F2, 1).size() == 5);
  const Ball b2 = enumerate_ball(F2, 2);
  CHECK(b2.size() == 17);
  CHECK(b2.count_within(0) == 1);
  CHECK(b2.count_within(1) == 5);
}

TEST_CASE("ball matches the brute-force string ball") {
  for (int n = 0; n <= 6; ++n) {
    const auto expected = oracle::ball(2, n);
    const Ball b = enumerate_ball(F2, static_cast<std::size_t>(n));
    std::set<std::string> got;
    for (const auto& e : b.elements) got.insert(oracle::str(e));
    CHECK(got == expected);
  }
}

TEST_CASE("ball invariants") {
  const Ball b = enumerate_ball(F2xF1, 4);
  std::unordered_set<Element, ElementHash> members(b.elements.begin(), b.elements.end());
  CHECK(members.size() == b.size());
  CHECK(members.count(F2xF1.identity()));
  for (const auto& e : b.elements) {
    CHECK(e.length() <= 4);
    CHECK(members.count(invert(e)));
  }
  CHECK(std::is_sorted(b.elements.begin(), b.elements.end(), ShortlexLess{}));
  std::size_t prev = 0;
  for (std::size_t r = 0; r <= 4; ++r) {
    CHECK(b.count_within(r) >= prev);
    prev = b.count_within(r);
  }
}

TEST_CASE("ball is independent of the worker count") {
  const Ball one = enumerate_ball(F2xF1, 5, Budget{10'000'000, 1});
  for (std::size_t w : {2, 3, 8}) {
    const Ball many = enumerate_ball(F2xF1, 5, Budget{10'000'000, w});
    CHECK(many.elements == one.elements);
  }
}

TEST_CASE("budget overrun is an error, never a truncated ball") {
  CHECK_THROWS_AS(enumerate_ball(F2, 6, Budget{100, 1}), BudgetExceeded);
  try {
    growth_sequence(F2, nullptr, 6, Budget{100, 1});
    FAIL("expected a budget error");
  } catch (const GrowthBudgetExceeded& e) {
    CHECK(e.radius_reached() == 3);
    CHECK(e.partial().counts == std::vector<std::uint64_t>{1, 5, 17, 53});
  }
}

TEST_CASE("relative ball examples") {
  const Ball cyc = relative_ball(F2, SubgroupOracle::cyclic(F2, el(F2, "a")), 3);
  CHECK(cyc.size() == 7);
  const Ball h = relative_ball(F2, SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bb")}), 2);
  std::set<std::string> got;
  for (const auto& e : h.elements) got.insert(oracle::str(e));
  CHECK(got == std::set<std::string>{"", "aa", "AA", "bb", "BB"});
  CHECK(relative_ball(F2xF2, SubgroupOracle::diagonal(F2xF2), 4).size() == 17);
}

TEST_CASE("growth table examples") {
  CHECK(counts(growth_sequence(F1, nullptr, 4)) == std::vector<std::uint64_t>{1, 3, 5, 7, 9});
  CHECK(counts(growth_sequence(F2, nullptr, 3)) == std::vector<std::uint64_t>{1, 5, 17, 53});
}

TEST_CASE("F2 growth closed forms up to radius 10") {
  const GrowthTable t = growth_sequence(F2, nullptr, 10);
  const auto spheres = t.spheres();
  for (unsigned n = 0; n <= 10; ++n) {
    CHECK(t(n) == 2 * pow_u(3, n) - 1);
    if (n >= 1) CHECK(spheres[n] == 4 * pow_u(3, n - 1));
  }
}

TEST_CASE("Milnor submultiplicativity on whole groups") {
  for (const auto& g : {F1, F2, F2xF1}) {
    const GrowthTable t = growth_sequence(g, nullptr, 8);
    CHECK(t.milnor_checked);
    CHECK(t.milnor_violations.empty());
    CHECK(submultiplicativity_violations(t).empty());
  }
  GrowthTable bad;
  bad.counts = {1, 2, 5};
  CHECK(submultiplicativity_violations(bad) == std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}});
}

TEST_CASE("relative growth is bounded by ambient growth") {
  const GrowthTable g = growth_sequence(F2, nullptr, 8);
  for (const auto& h : {SubgroupOracle::cyclic(F2, el(F2, "ab")), SubgroupOracle::stallings(F2, {el(F2, "aab")}),
                        SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bb")})}) {
    const GrowthTable t = growth_sequence(F2, &h, 8);
    for (std::size_t n = 0; n <= 8; ++n) CHECK(t(n) <= g(n));
  }
}

TEST_CASE("relative ball is closed under inversion for exact oracles") {
  const auto h = SubgroupOracle::stallings(F2, {el(F2, "ab"), el(F2, "bba")});
  const Ball b = relative_ball(F2, h, 7);
  std::unordered_set<Element, ElementHash> members(b.elements.begin(), b.elements.end());
  for (const auto& e : b.elements) CHECK(members.count(invert(e)));
}

TEST_CASE("relative growth of <aa, bb> matches brute-force subgroup products") {
  const auto h = SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bb")});
  const GrowthTable rel = growth_sequence(F2, &h, 8);
  const auto members = oracle::subgroup_products({"aa", "bb"}, 8, 8);
  for (std::size_t n = 0; n <= 8; ++n) {
    std::uint64_t expected = 0;
    for (const auto& w : members) expected += w.size() <= n;
    CHECK(rel(n) == expected);
  }
}

TEST_CASE("exact counting agrees with enumeration") {
  const auto cyc = SubgroupOracle::cyclic(F2, el(F2, "aBab"));
  const auto st = SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bab"), el(F2, "bbb")});
  const auto diag = SubgroupOracle::diagonal(F2xF2);
  const auto hom = SubgroupOracle::graph_of(F2xF2, {parse_word("ab", 2), parse_word("B", 2)});
  const auto prod = parse_subgroup(F2xF2, "prod(\"aa,b\"; cyclic:\"ab\")");
  const auto cyc_prod = SubgroupOracle::cyclic(F2xF1, el(F2xF1, "(ab,a)"));

  CHECK(counts(count_growth(F2, nullptr, 7)) == counts(growth_sequence(F2, nullptr, 7)));
  CHECK(counts(count_growth(F2xF1, nullptr, 6)) == counts(growth_sequence(F2xF1, nullptr, 6)));
  CHECK(counts(count_growth(F2, &cyc, 9)) == counts(growth_sequence(F2, &cyc, 9)));
  CHECK(counts(count_growth(F2, &st, 8)) == counts(growth_sequence(F2, &st, 8)));
  CHECK(counts(count_growth(F2xF2, &diag, 6)) == counts(growth_sequence(F2xF2, &diag, 6)));
  CHECK(counts(count_growth(F2xF2, &hom, 6)) == counts(growth_sequence(F2xF2, &hom, 6)));
  CHECK(counts(count_growth(F2xF2, &prod, 5)) == counts(growth_sequence(F2xF2, &prod, 5)));
  CHECK(counts(count_growth(F2xF1, &cyc_prod, 8)) == counts(growth_sequence(F2xF1, &cyc_prod, 8)));

  const auto budgeted = SubgroupOracle::budgeted(F2xF2, {el(F2xF2, "(a,a)")}, 2);
  CHECK_THROWS_AS(count_growth(F2xF2, &budgeted, 3), Unsupported);
}

TEST_CASE("diagonal growth halves the radius") {
  const auto diag = SubgroupOracle::diagonal(F2xF2);
  const GrowthTable d = count_growth(F2xF2, &diag, 12);
  const GrowthTable f = count_growth(F2, nullptr, 6);
  for (std::size_t n = 0; n <= 12; ++n) CHECK(d(n) == f(n / 2));
}

TEST_CASE("budgeted relative growth reports unknowns") {
  const auto h = SubgroupOracle::budgeted(F2xF2, {el(F2xF2, "(a,a)"), el(F2xF2, "(b,b)")}, 1);
  const GrowthTable t = growth_sequence(F2xF2, &h, 4);
  CHECK(t(4) == 5);  // 1, (a,a), (A,A), (b,b), (B,B)
  CHECK(t.unknown.back() > 0);
}

TEST_CASE("distortion examples") {
  const auto a = SubgroupOracle::cyclic(F2, el(F2, "a"));
  CHECK(distortion(F2, {el(F2, "a")}, a, 5).value == 5);
  const auto a2 = SubgroupOracle::cyclic(F2, el(F2, "aa"));
  CHECK(distortion(F2, {el(F2, "aa")}, a2, 5).value == 2);
  const auto h = SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bb")});
  CHECK(distortion(F2, {el(F2, "aa"), el(F2, "bb")}, h, 0).value == 0);
}

TEST_CASE("distortion of <aa, bb> is n/2 and witnesses have that length") {
  const auto h = SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bb")});
  for (std::size_t n = 0; n <= 8; ++n) {
    const auto r = distortion(F2, {el(F2, "aa"), el(F2, "bb")}, h, n);
    CHECK(r.value == n / 2);
    CHECK(r.witness.length() <= n);
  }
}

TEST_CASE("distortion of a conjugated generator") {
  // <bab^-1>: |h|_X = 2 + |k| for h = b a^k B, so Delta(n) = n - 2.
  const auto h = SubgroupOracle::cyclic(F2, el(F2, "baB"));
  for (std::size_t n = 3; n <= 8; ++n) CHECK(distortion(F2, {el(F2, "baB")}, h, n).value == n - 2);
}

TEST_CASE("distortion names a subgroup element outside the span of Y") {
  const auto h = SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bb")});
  CHECK_THROWS_AS(distortion(F2, {el(F2, "aa")}, h, 2), Error);
}
