#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/cayley.hpp"
#include "growthlab/function_spec.hpp"
#include "growthlab/group.hpp"
#include "growthlab/hyperbolic.hpp"
#include "growthlab/subgroup.hpp"

namespace growthlab {

// Connecting pieces for the concatenation map (u, v) -> u x_{u,v} v.
//
// A kit built from (g, h, n) holds M_n = (g^n, g^-n, h^n, h^-n) in that order.
// The naive kit has the single piece 1, giving plain multiplication.
class ConnectorKit {
 public:
  /// Throws MalformedInput when g or h is trivial or g and h commute (share
  /// a root, so their axes coincide), and when the four powers are not distinct.
  static ConnectorKit build(const GroupDescriptor& group, const Element& g, const Element& h, long long n,
                            bool assume_independent = false);
  static ConnectorKit naive(const GroupDescriptor& group);
  /// Arbitrary caller-supplied pieces, e.g. pieces chosen inside a subgroup.
  static ConnectorKit from_pieces(const GroupDescriptor& group, std::vector<Element> pieces);

  const GroupDescriptor& group() const { return group_; }
  const std::vector<Element>& pieces() const { return pieces_; }
  const std::vector<Element>& inverse_pieces() const { return inverse_pieces_; }
  /// c_n: maximal word length of a piece.
  std::size_t c() const { return c_; }
  long long exponent() const { return exponent_; }
  const Element& g() const { return g_; }
  const Element& h() const { return h_; }

 private:
  GroupDescriptor group_;
  Element g_, h_;
  long long exponent_ = 0;
  std::vector<Element> pieces_;
  std::vector<Element> inverse_pieces_;
  std::size_t c_ = 0;
};

struct ConnectorChoice {
  std::size_t index = 0;  // into kit.pieces()
  Element piece;
  /// max((u^-1 . x)_1, (v . x^-1)_1)
  HalfInteger score;
};

/// The piece minimizing the score; ties go to the earlier piece.
ConnectorChoice select_connector(const ConnectorKit& kit, const Element& u, const Element& v);

/// Phi_n(u, v) = u x_{u,v} v.
Element concat_apply(const ConnectorKit& kit, const Element& u, const Element& v);

/// Componentwise Phi over a product, one kit per factor (each over that factor alone).
Element product_concat_apply(const std::vector<ConnectorKit>& kits, const Element& u, const Element& v);

/// Number of (u, v) in B_H(s) x B_H(t) with Phi(u, v) = z. Uses that u and the
/// piece determine v, so the cost is |B_H(s)| times the number of pieces.
std::uint64_t fiber_size(const ConnectorKit& kit, const Ball& ball_s, const SubgroupOracle* oracle, const Element& z,
                         std::size_t t);

struct AmbiguityCell {
  std::size_t s = 0;
  std::size_t t = 0;
  std::size_t image_radius = 0;  // s + t + c
  std::uint64_t max_fiber = 0;
  Element argmax;  // shortlex-first image attaining max_fiber
};

struct AmbiguityReport {
  std::size_t s_max = 0;
  std::size_t t_max = 0;
  std::size_t c = 0;
  std::vector<AmbiguityCell> cells;          // row-major: index s * (t_max + 1) + t
  std::vector<std::uint64_t> max_fiber_by_t;  // max over s <= s_max
  /// Affine upper envelope of max_fiber_by_t fitted on t <= fit_t_max.
  FunctionSpec envelope;
  std::size_t fit_t_max = 0;
  /// Cells with t > fit_t_max whose max fiber exceeds the envelope.
  std::vector<std::pair<std::size_t, std::size_t>> flagged;
  HalfInteger max_score;  // largest connector score over all pairs
  std::uint64_t pairs = 0;
  std::size_t unknown_count = 0;
  /// Every image had length <= |u| + |v| + c.
  bool image_containment = true;

  const AmbiguityCell& cell(std::size_t s, std::size_t t) const { return cells.at(s * (t_max + 1) + t); }
};

struct AmbiguityOptions {
  /// Envelope fit range; defaults to t_max / 2.
  std::optional<std::size_t> fit_t_max;
};

/// Exhaustively applies Phi to B_H(s_max) x B_H(t_max), buckets by image and
/// records the largest fiber for every (s, t). `oracle == nullptr` means H = G.
AmbiguityReport measure_ambiguity(const ConnectorKit& kit, const SubgroupOracle* oracle, std::size_t s_max,
                                  std::size_t t_max, const Budget& budget = {}, const AmbiguityOptions& options = {});

/// Same, for the componentwise map over a product group.
AmbiguityReport measure_product_ambiguity(const GroupDescriptor& group, const std::vector<ConnectorKit>& kits,
                                          const SubgroupOracle* oracle, std::size_t s_max, std::size_t t_max,
                                          const Budget& budget = {}, const AmbiguityOptions& options = {});

/// Smallest line y = slope t + intercept lying on or above every point: the
/// slope is the largest increment between consecutive points, the intercept
/// the least that covers all of them.
FunctionSpec fit_affine_envelope(const std::vector<std::uint64_t>& values, std::size_t fit_t_max);

/// Largest connector score over B(r) x B(r) of the ambient group.
HalfInteger max_connector_score(const ConnectorKit& kit, std::size_t radius, const Budget& budget = {});

struct SupermultiplicativityCheck {
  bool ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> violations;
};

// Thrown when B_H(s_max) x B_H(t_max) exceeds the pair budget. Carries the
// report for the largest s that fits, when there is one.
class AmbiguityBudgetExceeded : public BudgetExceeded {
 public:
  AmbiguityBudgetExceeded(const std::string& what, std::size_t s_reached, std::optional<AmbiguityReport> partial)
      : BudgetExceeded(what, s_reached), partial_(std::move(partial)) {}
  const std::optional<AmbiguityReport>& partial() const { return partial_; }

 private:
  std::optional<AmbiguityReport> partial_;
};

/// Checks beta(s) beta(t) <= l(t) beta(s + t + c) for all s <= s_max, t <= t_max.
/// Throws RangeError when the table does not reach s_max + t_max + c.
SupermultiplicativityCheck verify_supermultiplicativity(const GrowthTable& growth, std::size_t c, const FunctionSpec& l,
                                                        std::size_t s_max, std::size_t t_max);

}  // namespace growthlab
