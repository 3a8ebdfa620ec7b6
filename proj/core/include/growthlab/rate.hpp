#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "growthlab/cayley.hpp"
#include "growthlab/function_spec.hpp"

namespace growthlab {

// Hypotheses of the limit lemma for a sequence f:
//   f(m) f(n) <= epsilon(n) f(m + n + shift(n))   for n >= threshold, all m,
//   1 <= f(n) <= growth_bound^n.
// They are recorded alongside results and checked on the finite range only.
struct RateHypothesis {
  FunctionSpec epsilon = FunctionSpec::constant(1);
  FunctionSpec shift = FunctionSpec::constant(0);
  std::size_t threshold = 1;
  double growth_bound = 0;  // 0 skips the upper bound check
};

struct HypothesisCheck {
  bool ok = true;
  /// (m, n) pairs violating the inequality.
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  /// n with f(n) < 1 or f(n) > B^n.
  std::vector<std::size_t> bound_violations;
  std::size_t pairs_checked = 0;
};

struct LowerBoundStep {
  std::size_t n = 0;
  std::size_t q = 0;  // n = q (s + l(s)) + r
  std::size_t r = 0;
  double bound = 0;   // lower bound on f(n)^(1/n) from f(n) >= (f(s)/eps(s))^q
};

struct RateEstimate {
  std::vector<double> roots;  // roots[n] = f(n)^(1/n); roots[0] is NaN
  double certified_lower = 1;
  std::optional<std::size_t> witness_s;
  double empirical_upper = 1;
  std::size_t upper_witness_n = 0;
  bool hypothesis_ok = false;
  HypothesisCheck check;
  /// Quotient-remainder walk for the witness s.
  std::vector<LowerBoundStep> steps;
};

/// a_n = f(n)^(1/n) as exp(log f(n) / n) in long double, relative error
/// below 2^-40; exact when f(n) is a perfect n-th power.
std::vector<double> root_sequence(const GrowthTable& f);

/// Checks the inequality for every n >= threshold and m with m + n + l(n)
/// inside the table, or on m <= m_max, n <= n_max when given (RangeError if
/// the table is too short for that).
HypothesisCheck check_hypothesis(const GrowthTable& f, const RateHypothesis& hyp,
                                 std::optional<std::size_t> m_max = std::nullopt,
                                 std::optional<std::size_t> n_max = std::nullopt);

/// certified_lower = max over s >= threshold of (f(s)/eps(s))^(1/(s + l(s))),
/// floored at 1; empirical_upper = min over n of max_{m >= n} a_m.
/// `steps_to` extends the quotient-remainder table up to that n.
RateEstimate fekete_lower_bound(const GrowthTable& f, const RateHypothesis& hyp, std::size_t steps_to = 0);

}  // namespace growthlab
