#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "growthlab/error.hpp"
#include "growthlab/group.hpp"
#include "growthlab/subgroup.hpp"

namespace growthlab {

struct Budget {
  std::size_t max_elements = 10'000'000;
  std::size_t workers = 1;
};

// Elements of word length <= radius, deduplicated and sorted shortlex.
struct Ball {
  GroupDescriptor group;
  std::size_t radius = 0;
  std::vector<Element> elements;
  /// Elements the oracle answered `unknown` for; they are excluded.
  std::size_t unknown_count = 0;

  std::size_t size() const { return elements.size(); }
  /// Number of elements of length <= r (r <= radius).
  std::size_t count_within(std::size_t r) const;
};

// beta(0..N). For relative tables, `unknown` counts are per radius and
// cumulative like the counts.
struct GrowthTable {
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> unknown;
  /// Pairs (m, n) with beta(m+n) > beta(m) beta(n); only filled for whole groups.
  std::vector<std::pair<std::size_t, std::size_t>> milnor_violations;
  bool milnor_checked = false;

  std::size_t max_radius() const { return counts.empty() ? 0 : counts.size() - 1; }
  std::uint64_t operator()(std::size_t n) const { return counts.at(n); }
  /// beta(n) - beta(n-1), with sphere(0) = beta(0).
  std::vector<std::uint64_t> spheres() const;
};

// BudgetExceeded raised from a growth computation, carrying the rows that
// were finished before the budget ran out.
class GrowthBudgetExceeded : public BudgetExceeded {
 public:
  GrowthBudgetExceeded(const BudgetExceeded& cause, GrowthTable partial)
      : BudgetExceeded(cause.what(), cause.radius_reached()), partial_(std::move(partial)) {}
  const GrowthTable& partial() const { return partial_; }

 private:
  GrowthTable partial_;
};

Ball enumerate_ball(const GroupDescriptor& group, std::size_t radius, const Budget& budget = {});

/// B_H(n) = H intersected with B_G(n), by filtering the ambient ball.
Ball relative_ball(const GroupDescriptor& group, const SubgroupOracle& oracle, std::size_t radius,
                   const Budget& budget = {});

/// Growth table by exhaustive enumeration. `oracle == nullptr` means the whole
/// group, in which case submultiplicativity is checked on all m + n <= N.
GrowthTable growth_sequence(const GroupDescriptor& group, const SubgroupOracle* oracle, std::size_t max_radius,
                            const Budget& budget = {});

/// Growth table by exact counting without materializing balls: convolution of
/// free-factor sphere sizes, path counting in Stallings graphs, closed forms for
/// cyclic subgroups, and source-word enumeration for pullbacks. Budgeted
/// enumeration oracles are not supported.
GrowthTable count_growth(const GroupDescriptor& group, const SubgroupOracle* oracle, std::size_t max_radius,
                         const Budget& budget = {});

/// All pairs (m, n), m + n <= N, violating beta(m+n) <= beta(m) beta(n).
std::vector<std::pair<std::size_t, std::size_t>> submultiplicativity_violations(const GrowthTable& table);

struct DistortionOptions {
  std::size_t depth_cap = 64;
  std::size_t node_budget = 50'000'000;
};

struct DistortionResult {
  std::size_t value = 0;
  Element witness;  // an h attaining the maximum
  std::size_t unknown_count = 0;
};

/// Delta(n) = max |h|_Y over h in H with |h|_X <= n, where Y = `generators`.
/// |h|_Y is found by iterative deepening over reduced words in Y.
DistortionResult distortion(const GroupDescriptor& group, const std::vector<Element>& generators,
                            const SubgroupOracle& oracle, std::size_t n, const Budget& budget = {},
                            const DistortionOptions& options = {});

}  // namespace growthlab
