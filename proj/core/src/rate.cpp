#include "growthlab/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

// Integer k-th root of x when x is a perfect k-th power.
std::optional<std::uint64_t> exact_root(std::uint64_t x, std::size_t k) {
  if (k == 0) return std::nullopt;
  if (x <= 1) return x;
  const auto guess = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<long double>(x), 1.0L / k)));
  for (std::uint64_t r = guess > 0 ? guess - 1 : 0; r <= guess + 1; ++r) {
    unsigned __int128 p = 1;
    bool over = false;
    for (std::size_t i = 0; i < k && !over; ++i) {
      p *= r;
      over = p > x;
    }
    if (!over && p == x) return r;
  }
  return std::nullopt;
}

double root(long double x, std::size_t k) {
  if (x >= 1 && x <= static_cast<long double>(std::numeric_limits<std::uint64_t>::max()) && x == std::floor(x)) {
    if (auto r = exact_root(static_cast<std::uint64_t>(x), k)) return static_cast<double>(*r);
  }
  return static_cast<double>(std::exp(std::log(x) / static_cast<long double>(k)));
}

}  // namespace

std::vector<double> root_sequence(const GrowthTable& f) {
  std::vector<double> a(f.counts.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t n = 0; n < f.counts.size(); ++n) {
    if (f.counts[n] == 0) throw RangeError("root_sequence: f(" + std::to_string(n) + ") = 0");
    if (n) a[n] = root(static_cast<long double>(f.counts[n]), n);
  }
  return a;
}

HypothesisCheck check_hypothesis(const GrowthTable& f, const RateHypothesis& hyp, std::optional<std::size_t> m_max,
                                 std::optional<std::size_t> n_max) {
  const std::size_t top = f.max_radius();
  if (f.counts.empty()) throw RangeError("check_hypothesis: empty table");
  HypothesisCheck out;
  const std::size_t n_end = n_max.value_or(top);
  for (std::size_t n = hyp.threshold; n <= n_end; ++n) {
    const std::size_t shift = hyp.shift.natural(n);
    if (n_max && m_max && *m_max + n + shift > top) {
      throw RangeError("check_hypothesis: need f up to " + std::to_string(*m_max + n + shift) + ", table ends at " +
                       std::to_string(top));
    }
    if (n + shift > top) break;
    const std::size_t m_end = std::min(m_max.value_or(top), top - n - shift);
    for (std::size_t m = 0; m <= m_end; ++m) {
      const long double lhs = static_cast<long double>(f(m)) * static_cast<long double>(f(n));
      const long double rhs = static_cast<long double>(hyp.epsilon(n)) * static_cast<long double>(f(m + n + shift));
      ++out.pairs_checked;
      if (lhs > rhs) out.violations.emplace_back(m, n);
    }
  }
  if (out.pairs_checked == 0) throw RangeError("check_hypothesis: table too short for any admissible (m, n)");
  for (std::size_t n = 0; n <= top; ++n) {
    const bool below = f(n) < 1;
    const bool above = hyp.growth_bound > 0 &&
                       static_cast<long double>(f(n)) > std::pow(static_cast<long double>(hyp.growth_bound), n);
    if (below || above) out.bound_violations.push_back(n);
  }
  out.ok = out.violations.empty() && out.bound_violations.empty();
  return out;
}

RateEstimate fekete_lower_bound(const GrowthTable& f, const RateHypothesis& hyp, std::size_t steps_to) {
  RateEstimate est;
  est.roots = root_sequence(f);
  const std::size_t top = f.max_radius();
  if (top < std::max<std::size_t>(1, hyp.threshold)) throw RangeError("fekete_lower_bound: empty admissible s range");

  try {
    est.check = check_hypothesis(f, hyp);
    est.hypothesis_ok = est.check.ok;
  } catch (const RangeError&) {
    est.hypothesis_ok = false;
  }

  double best = -1;
  for (std::size_t s = std::max<std::size_t>(1, hyp.threshold); s <= top; ++s) {
    const double eps = hyp.epsilon(s);
    if (!(eps > 0)) throw RangeError("fekete_lower_bound: epsilon must be positive");
    const std::size_t period = s + hyp.shift.natural(s);
    const long double base = static_cast<long double>(f(s)) / static_cast<long double>(eps);
    const double value = root(base, period);
    if (value > best) {
      best = value;
      est.witness_s = s;
    }
  }
  est.certified_lower = std::max(1.0, best);

  // min over n of the suffix maximum of the root sequence.
  double suffix = -1;
  est.empirical_upper = std::numeric_limits<double>::infinity();
  for (std::size_t n = top; n >= 1; --n) {
    suffix = std::max(suffix, est.roots[n]);
    if (suffix <= est.empirical_upper) {
      est.empirical_upper = suffix;
      est.upper_witness_n = n;
    }
  }

  const std::size_t s = *est.witness_s;
  const std::size_t period = s + hyp.shift.natural(s);
  const long double base = static_cast<long double>(f(s)) / static_cast<long double>(hyp.epsilon(s));
  for (std::size_t n = period; n <= std::max(steps_to, top); ++n) {
    LowerBoundStep step{n, n / period, n % period, 0};
    step.bound = static_cast<double>(
        std::exp(static_cast<long double>(step.q) * std::log(base) / static_cast<long double>(n)));
    est.steps.push_back(step);
  }
  return est;
}

}  // namespace growthlab
