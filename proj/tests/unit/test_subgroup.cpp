#include <doctest.h>

#include <random>

#include "growthlab/error.hpp"
#include "growthlab/stallings.hpp"
#include "growthlab/subgroup.hpp"
#include "oracle.hpp"

using namespace growthlab;

namespace {

const GroupDescriptor F2 = GroupDescriptor::free(2);
const GroupDescriptor F2xF2 = GroupDescriptor::product({2, 2});
const GroupDescriptor F2xF1 = GroupDescriptor::product({2, 1});

Element el(const GroupDescriptor& g, const char* text) { return parse_element(g, text); }

StallingsGraph graph_of(std::initializer_list<const char*> gens, int rank = 2) {
  std::vector<Word> ws;
  for (auto g : gens) ws.push_back(parse_word(g, rank));
  return StallingsGraph::build(ws, rank);
}

SubgroupOracle stallings(std::vector<std::string> gens) {
  std::vector<Element> es;
  for (const auto& g : gens) es.push_back(oracle::element(F2, g));
  return SubgroupOracle::stallings(F2, es);
}

bool yes(const SubgroupOracle& h, const Element& g) { return h.contains(g) == Membership::yes; }

}  // namespace

TEST_CASE("stallings graph of <a> is one loop") {
  const auto g = graph_of({"a"});
  CHECK(g.vertex_count() == 1);
  CHECK(g.edge_count() == 1);
  CHECK(g.accepts(parse_word("aaaaa", 2)));
  CHECK(g.accepts(parse_word("AA", 2)));
  CHECK_FALSE(g.accepts(parse_word("b", 2)));
}

TEST_CASE("stallings graph of <aa, bb>") {
  const auto g = graph_of({"aa", "bb"});
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 4);
  CHECK_FALSE(g.accepts(parse_word("a", 2)));
  CHECK(g.accepts(parse_word("aabb", 2)));
  CHECK_FALSE(g.accepts(parse_word("ab", 2)));
  CHECK(g.is_folded());
  CHECK(g.is_connected());
}

TEST_CASE("stallings graph of <a, b> is the whole group") {
  const auto g = graph_of({"a", "b"});
  CHECK(g.vertex_count() == 1);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) CHECK(g.accepts(parse_word(oracle::text(oracle::random_reduced(rng, 2, 10)), 2)));
}

TEST_CASE("folding merges and trims") {
  // <ab, aB> folds the two paths starting with a.
  const auto g = graph_of({"ab", "aB"});
  CHECK(g.is_folded());
  CHECK(g.vertex_count() == 2);
  // a conjugate: the hanging tree b...B is trimmed away only at the basepoint.
  const auto c = graph_of({"bab", "B"});
  CHECK(c.vertex_count() == 1);
  CHECK(c.accepts(parse_word("a", 2)));
}

TEST_CASE("stallings membership agrees with brute force on random subgroups") {
  std::mt19937_64 rng(2024);
  const auto candidates = oracle::ball(2, 6);
  for (int trial = 0; trial < 20; ++trial) {
    std::string g1, g2;
    while (g1.empty()) g1 = oracle::random_reduced(rng, 2, 3);
    while (g2.empty() || g2 == g1) g2 = oracle::random_reduced(rng, 2, 3);
    const auto h = stallings({g1, g2});
    // Every product of <= 5 generators is accepted; conversely every accepted
    // word of length <= 4 shows up among deeper products.
    const auto members = oracle::subgroup_products({g1, g2}, 5, 100);
    for (const auto& w : members) CHECK(yes(h, oracle::element(F2, w)));
    const auto deep = oracle::subgroup_products({g1, g2}, 16, 100, 8);
    for (const auto& w : candidates) {
      if (w.size() > 4) continue;
      if (yes(h, oracle::element(F2, w))) CHECK_MESSAGE(deep.count(w), "H=<" << g1 << "," << g2 << "> w=" << w);
    }
  }
}

TEST_CASE("stallings closure on words in the generators") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> gens{"aab", "bA"};
  const auto h = stallings(gens);
  for (int i = 0; i < 300; ++i) {
    std::string w;
    const int len = static_cast<int>(rng() % 9);
    for (int k = 0; k < len; ++k) {
      const auto& g = gens[rng() % 2];
      w = oracle::mul(w, rng() % 2 ? g : oracle::inverse(g));
    }
    CHECK(yes(h, oracle::element(F2, w)));
  }
}

TEST_CASE("stallings sphere counts match brute force for <aa, bb>") {
  const auto g = graph_of({"aa", "bb"});
  const auto spheres = g.sphere_counts(8);
  const auto members = oracle::subgroup_products({"aa", "bb"}, 8, 8);
  for (std::size_t n = 0; n <= 8; ++n) {
    std::uint64_t expected = 0;
    for (const auto& w : members) expected += w.size() == n;
    CHECK(spheres[n] == expected);
  }
}

TEST_CASE("membership examples") {
  CHECK(yes(SubgroupOracle::cyclic(F2, el(F2, "a")), el(F2, "aaaaa")));
  CHECK(stallings({"aa", "bb"}).contains(el(F2, "ab")) == Membership::no);
  const auto diag = SubgroupOracle::diagonal(F2xF2);
  CHECK(yes(diag, el(F2xF2, "(ab,ab)")));
  CHECK(diag.contains(el(F2xF2, "(a,b)")) == Membership::no);
}

TEST_CASE("cyclic oracle accepts powers and rejects non-powers") {
  std::mt19937_64 rng(13);
  for (const char* c : {"a", "ab", "aBab", "baaB", "abAB"}) {
    const Element g = el(F2, c);
    const auto h = SubgroupOracle::cyclic(F2, g);
    for (long long k = -20; k <= 20; ++k) {
      CHECK(yes(h, power(g, k)));
      CHECK(cyclic_exponent(g, power(g, k)) == k);
    }
    // Non-powers: anything outside {g^k} by the string oracle.
    std::set<std::string> powers;
    std::string p;
    const std::string cs = c;
    for (int k = 0; k <= 40; ++k) {
      powers.insert(p);
      powers.insert(oracle::inverse(p));
      p = oracle::mul(p, cs);
    }
    int tested = 0;
    while (tested < 100) {
      const auto w = oracle::random_reduced(rng, 2, 10);
      if (powers.count(w)) continue;
      ++tested;
      CHECK(h.contains(oracle::element(F2, w)) == Membership::no);
    }
  }
}

TEST_CASE("cyclic oracle on a product") {
  const Element c = el(F2xF1, "(ab,a)");
  const auto h = SubgroupOracle::cyclic(F2xF1, c);
  CHECK(yes(h, el(F2xF1, "(abab,aa)")));
  CHECK(h.contains(el(F2xF1, "(abab,a)")) == Membership::no);
  CHECK(h.contains(el(F2xF1, "(ab,1)")) == Membership::no);
}

TEST_CASE("product and pullback oracles") {
  const auto whole1 = std::make_shared<const SubgroupOracle>(SubgroupOracle::whole(GroupDescriptor::free(2)));
  const auto aa = std::make_shared<const SubgroupOracle>(
      SubgroupOracle::stallings(GroupDescriptor::free(2), {el(F2, "aa")}));
  const auto prod = SubgroupOracle::product(F2xF2, {aa, whole1});
  CHECK(yes(prod, el(F2xF2, "(aaaa,abAB)")));
  CHECK(prod.contains(el(F2xF2, "(a,1)")) == Membership::no);

  // Graph of a -> ab, b -> B.
  const auto hom = SubgroupOracle::graph_of(F2xF2, {parse_word("ab", 2), parse_word("B", 2)});
  CHECK(yes(hom, el(F2xF2, "(ab,abB)")));
  CHECK(yes(hom, el(F2xF2, "(ab,a)")));
  CHECK(hom.contains(el(F2xF2, "(ab,b)")) == Membership::no);
}

TEST_CASE("budgeted enumeration never answers no") {
  const auto h = SubgroupOracle::budgeted(F2xF2, {el(F2xF2, "(a,a)"), el(F2xF2, "(b,b)")}, 3);
  CHECK(yes(h, el(F2xF2, "(ab,ab)")));
  CHECK(h.contains(el(F2xF2, "(a,b)")) == Membership::unknown);
  CHECK(h.contains(el(F2xF2, "(abab,abab)")) == Membership::unknown);
  CHECK_FALSE(h.is_exact());
}

TEST_CASE("project and embed") {
  const Element g = el(F2xF2, "(ab,b)");
  CHECK(format_element(project(g, {0})) == "ab");
  CHECK(project(g, {0, 1}) == g);
  CHECK(word_length(project(g, {0})) == 2);
  CHECK(word_length(project(g, {0})) <= word_length(g));
  CHECK(embed(el(F2, "ab"), {0}, F2xF2) == el(F2xF2, "(ab,1)"));
  CHECK(embed(g, {0, 1}, F2xF2) == g);
  CHECK(project(embed(el(F2, "a"), {0}, F2xF2), {1}).is_identity());
  CHECK_THROWS_AS(project(g, {1, 0}), RangeError);
  CHECK_THROWS_AS(project(g, {2}), RangeError);
}

TEST_CASE("project after embed is the identity map; projections shorten") {
  std::mt19937_64 rng(99);
  const GroupDescriptor G = GroupDescriptor::product({2, 1, 2});
  const std::vector<std::vector<std::size_t>> sets{{0}, {1}, {2}, {0, 2}, {0, 1, 2}};
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> parts;
    for (std::size_t f = 0; f < 3; ++f) parts.push_back(oracle::random_reduced(rng, G.rank(f), 6));
    const Element h = oracle::element(G, parts);
    for (const auto& J : sets) {
      const Element p = project(h, J);
      CHECK(word_length(p) <= word_length(h));
      CHECK(project(embed(p, J, G), J) == p);
    }
  }
}

TEST_CASE("subgroup spec grammar round trips") {
  for (const char* text : {"all", "\"aa,bb\"", "cyclic:\"ab\"", "prod(\"aa\"; all)", "diag", "hom:\"ab,B\"",
                           "enum(2):\"(a,a),(b,b)\""}) {
    const GroupDescriptor& g = std::string(text).starts_with("\"aa") || std::string(text).starts_with("cyclic")
                                   ? F2
                                   : F2xF2;
    const auto h = parse_subgroup(g, text);
    CHECK(h.to_spec() == text);
    CHECK(parse_subgroup(g, h.to_spec()).to_spec() == h.to_spec());
  }
  CHECK(parse_subgroup(F2, "aa, bb").to_spec() == "\"aa,bb\"");
  CHECK_THROWS_AS(parse_subgroup(F2, "cyclic:"), MalformedInput);
  CHECK_THROWS_AS(parse_subgroup(F2, "a?"), MalformedInput);
  CHECK_THROWS_AS(SubgroupOracle::diagonal(F2xF1), Error);
}
