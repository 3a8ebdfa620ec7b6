#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "cli/run.hpp"
#include "cli/spec.hpp"
#include "growthlab/cayley.hpp"
#include "growthlab/concat.hpp"
#include "growthlab/hyperbolic.hpp"
#include "growthlab/rate.hpp"
#include "oracle.hpp"

using namespace growthlab;

namespace {

const GroupDescriptor F1 = GroupDescriptor::free(1);
const GroupDescriptor F2 = GroupDescriptor::free(2);
const GroupDescriptor F2xF1 = GroupDescriptor::product({2, 1});
const GroupDescriptor F2xF2 = GroupDescriptor::product({2, 2});

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

std::uint64_t pow_u(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Element el(const GroupDescriptor& g, const char* text) { return parse_element(g, text); }

AmbiguityReport kit_report() {
  AmbiguityOptions opts;
  opts.fit_t_max = 3;
  return measure_ambiguity(ConnectorKit::build(F2, el(F2, "a"), el(F2, "b"), 2), nullptr, 6, 6, Budget{}, opts);
}

void c1(Outcome& o) {
  const GrowthTable t = growth_sequence(F2, nullptr, 12);
  const auto sph = t.spheres();
  for (std::size_t n = 0; n <= 12; ++n) {
    o.require(t(n) == 2 * pow_u(3, n) - 1, "beta(" + std::to_string(n) + ")");
    if (n >= 1) o.require(sph[n] == 4 * pow_u(3, n - 1), "sphere(" + std::to_string(n) + ")");
  }
  o.detail << "beta(12)=" << t(12) << " sphere(12)=" << sph[12];
}

void c2(Outcome& o) {
  for (const auto* g : {&F1, &F2, &F2xF1}) {
    const GrowthTable t = growth_sequence(*g, nullptr, 10);
    const auto v = submultiplicativity_violations(t);
    o.require(v.empty() && t.milnor_violations.empty(), g->to_string() + " has violations");
    o.detail << g->to_string() << ":" << v.size() << " ";
  }
  o.detail << "violations";
}

void c3(Outcome& o) {
  const auto naive = ConnectorKit::naive(F2);
  for (std::size_t t = 0; t <= 5; ++t) {
    const Ball b = enumerate_ball(F2, 2 * t);
    const std::uint64_t fiber = fiber_size(naive, b, nullptr, F2.identity(), t);
    o.require(fiber == 2 * pow_u(3, t) - 1, "t=" + std::to_string(t));
    o.detail << fiber << (t < 5 ? "," : "");
  }
  o.detail << " = beta(0..5)";
}

void c4(Outcome& o) {
  const AmbiguityReport r = kit_report();
  o.require(r.flagged.empty(), std::to_string(r.flagged.size()) + " flagged cells");
  for (std::size_t t = 4; t <= 6; ++t)
    o.require(static_cast<double>(r.max_fiber_by_t[t]) <= r.envelope(t), "envelope broken at t=" + std::to_string(t));
  const std::uint64_t f66 = r.cell(6, 6).max_fiber;
  o.require(f66 * 50 <= 1457, "fiber(6,6) too large");
  o.detail << "envelope " << r.envelope.to_string() << ", fiber(6,6)=" << f66 << ", margin "
           << 1457.0 / static_cast<double>(f66);
}

void c5(Outcome& o) {
  const FunctionSpec l = kit_report().envelope;
  const std::size_t c = 2;

  const GrowthTable f2 = count_growth(F2, nullptr, 18);
  const auto aabb = SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bb")});
  const GrowthTable h = count_growth(F2, &aabb, 18);
  const auto diag = SubgroupOracle::diagonal(F2xF2);
  const GrowthTable d = count_growth(F2xF2, &diag, 18);

  // The diagonal uses connecting pieces inside H; its fibers must also sit
  // under the envelope for the hypothesis to transfer.
  const auto kit = ConnectorKit::from_pieces(
      F2xF2, {el(F2xF2, "(aa,aa)"), el(F2xF2, "(AA,AA)"), el(F2xF2, "(bb,bb)"), el(F2xF2, "(BB,BB)")});
  const AmbiguityReport dr = measure_ambiguity(kit, &diag, 6, 6);
  for (std::size_t t = 0; t <= 6; ++t)
    o.require(static_cast<double>(dr.max_fiber_by_t[t]) <= l(t), "diagonal fiber above l at t=" + std::to_string(t));

  const std::pair<const char*, const GrowthTable*> cases[] = {{"F2", &f2}, {"<aa,bb>", &h}, {"diag", &d}};
  for (const auto& [name, table] : cases) {
    const auto r = verify_supermultiplicativity(*table, c, l, 8, 8);
    o.require(r.ok, std::string(name) + " has " + std::to_string(r.violations.size()) + " violations");
    o.detail << name << ":" << r.violations.size() << " ";
  }
  o.detail << "violations with c=2, l=" << l.to_string();
}

void c6(Outcome& o) {
  const Ball b = enumerate_ball(F2, 4);
  DeltaOptions opts;
  opts.max_tuples = 1'000'000'000;
  const auto est = estimate_delta(FiniteMetric::from_elements(b.elements), opts);
  o.require(est.delta == HalfInteger::from_integer(0), "delta=" + est.delta.to_string());

  std::mt19937_64 rng(20240601);
  std::size_t bad = 0;
  for (int i = 0; i < 10'000; ++i) {
    const Element g = oracle::element(F2, oracle::random_reduced(rng, 2, 12));
    const Element x = oracle::element(F2, oracle::random_reduced(rng, 2, 12));
    const Element y = oracle::element(F2, oracle::random_reduced(rng, 2, 12));
    const Element z = oracle::element(F2, oracle::random_reduced(rng, 2, 12));
    bad += !check_equivariance(g, x, y, z);
  }
  o.require(bad == 0, std::to_string(bad) + " equivariance failures");
  o.detail << "delta=" << est.delta.to_string() << " over " << est.tuples_checked << " tuples, " << bad
           << "/10000 equivariance failures";
}

void c7(Outcome& o) {
  const auto w = acylindricity_witnesses(F2, F2.identity(), el(F2, "aaaaa"), 1);
  o.require(w.count == 3, "count=" + std::to_string(w.count));
  o.detail << "count(a^5)=" << w.count << ", along a^k:";
  std::size_t prev = SIZE_MAX;
  for (std::size_t k = 0; k <= 10; ++k) {
    const auto r = acylindricity_witnesses(F2, F2.identity(), parse_element(F2, k ? std::string(k, 'a') : "1"), 1);
    o.require(r.count <= prev, "increase at k=" + std::to_string(k));
    prev = r.count;
    o.detail << " " << r.count;
  }
}

void c8(Outcome& o) {
  const auto a = SubgroupOracle::cyclic(F2, el(F2, "a"));
  const auto a2 = SubgroupOracle::cyclic(F2, el(F2, "aa"));
  for (std::size_t n = 0; n <= 12; ++n) {
    o.require(distortion(F2, {el(F2, "a")}, a, n).value == n, "<a> at n=" + std::to_string(n));
    o.require(distortion(F2, {el(F2, "aa")}, a2, n).value == n / 2, "<aa> at n=" + std::to_string(n));
  }
  o.detail << "Delta_<a>(n)=n, Delta_<aa>(n)=floor(n/2) for n<=12";
}

void c9(Outcome& o) {
  RateHypothesis hyp;
  hyp.epsilon = kit_report().envelope;
  hyp.shift = FunctionSpec::constant(2);
  const auto f = fekete_lower_bound(count_growth(F2, nullptr, 14), hyp);
  const double width = f.empirical_upper - f.certified_lower;
  o.require(f.hypothesis_ok, "hypothesis fails on the table");
  o.require(f.certified_lower <= 3.0 && 3.0 <= f.empirical_upper, "interval misses 3");
  o.require(width <= 0.5, "width " + std::to_string(width) + " > 0.5");

  GrowthTable pow2;
  for (std::size_t n = 0; n <= 14; ++n) pow2.counts.push_back(pow_u(2, n));
  RateHypothesis one;
  one.epsilon = FunctionSpec::constant(1);
  one.shift = FunctionSpec::constant(0);
  const auto g = fekete_lower_bound(pow2, one);
  o.require(g.certified_lower == 2.0 && g.empirical_upper == 2.0, "2^n does not collapse to [2,2]");

  char buf[160];
  std::snprintf(buf, sizeof buf, "beta_F2: [%.4f, %.4f] width %.4f (s=%zu); 2^n: [%g, %g]", f.certified_lower,
                f.empirical_upper, width, f.witness_s.value_or(0), g.certified_lower, g.empirical_upper);
  o.detail << (o.pass ? "" : " | ") << buf;
}

void c10(Outcome& o) {
  const auto h = SubgroupOracle::stallings(F2, {el(F2, "aa"), el(F2, "bb")});
  const GrowthTable st = growth_sequence(F2, &h, 10);
  const auto members = oracle::subgroup_products({"aa", "bb"}, 5, 10);
  for (std::size_t n = 0; n <= 10; ++n) {
    std::uint64_t expected = 0;
    for (const auto& w : members) expected += w.size() <= n;
    o.require(st(n) == expected, "<aa,bb> at n=" + std::to_string(n));
  }
  const auto diag = SubgroupOracle::diagonal(F2xF2);
  const GrowthTable d = growth_sequence(F2xF2, &diag, 10);
  for (std::size_t n = 0; n <= 10; ++n) o.require(d(n) == 2 * pow_u(3, n / 2) - 1, "diag at n=" + std::to_string(n));
  o.detail << "<aa,bb>: beta_H(10)=" << st(10) << "; diag: beta_H(10)=" << d(10);
}

void c11(Outcome& o) {
  const char* specs[] = {
      "growth --group free:2 --max-radius 12",
      "ambiguity --group free:2 --g a --h b -n 2 --smax 6 --tmax 6 --fit-tmax 3",
      "relgrowth --group free:2 --subgroup 'aa,bb' --max-radius 10",
      "relgrowth --group 'product(free:2,free:2)' --subgroup diag --max-radius 10",
  };
  for (const char* text : specs) {
    std::string first;
    for (std::size_t w : {1, 4, 8}) {
      auto spec = cli::parse_spec(text);
      spec.workers = w;
      const auto art = cli::execute(spec);
      o.require(art.exit_code == 0, std::string(text) + " exited " + std::to_string(art.exit_code));
      if (w == 1) first = art.content;
      else o.require(art.content == first, std::string(text) + " differs at workers=" + std::to_string(w));
    }
  }
  o.detail << "4 artifacts identical at workers 1, 4, 8";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  app.add_option("--criterion", only, "run only these criteria")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::function<void(Outcome&)> checks[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
  // Wall-clock limits in seconds; 0 means none.
  const double limits[] = {60, 0, 0, 600, 0, 0, 0, 0, 10, 0, 0};
  int failed = 0;
  for (int i = 1; i <= 11; ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), i) == only.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      checks[i - 1](o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limits[i - 1] > 0) o.require(secs < limits[i - 1], "over the time limit");
    std::printf("%s criterion %d: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
