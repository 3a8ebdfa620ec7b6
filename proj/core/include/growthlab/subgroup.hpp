#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "growthlab/group.hpp"
#include "growthlab/stallings.hpp"

namespace growthlab {

// Three-valued membership answer. Only BudgetedEnumeration oracles ever
// answer `unknown`, and they never answer `no`.
enum class Membership { no, yes, unknown };

const char* to_string(Membership m);

class SubgroupOracle;
using OraclePtr = std::shared_ptr<const SubgroupOracle>;

// A membership decision procedure for a subgroup H of a product of free groups.
class SubgroupOracle {
 public:
  /// The whole ambient group.
  struct Whole {};
  /// Finitely generated subgroup of a single free factor.
  struct Stallings {
    StallingsGraph graph;
  };
  /// <c> for one element c; decided by peeling off the conjugating prefix and
  /// matching the cyclically reduced core periodically.
  struct Cyclic {
    Element generator;
  };
  /// H_1 x ... x H_m, one oracle per direct factor over that factor alone.
  struct Product {
    std::vector<OraclePtr> parts;
  };
  /// { g : g_source in base, g_t = phi_t(g_source) for every constraint }.
  /// Factors that are neither source nor constrained are unrestricted.
  struct Pullback {
    struct Constraint {
      std::size_t target;
      std::vector<Word> images;  // image of each source generator
    };
    std::size_t source = 0;
    OraclePtr base;  // over the source factor alone
    std::vector<Constraint> constraints;
  };
  /// Products of at most `radius` generators and their inverses, precomputed.
  struct BudgetedEnumeration {
    std::size_t radius = 0;
    std::shared_ptr<const std::unordered_set<Element, ElementHash>> members;
  };

  using Variant = std::variant<Whole, Stallings, Cyclic, Product, Pullback, BudgetedEnumeration>;

  static SubgroupOracle whole(const GroupDescriptor& group);
  static SubgroupOracle stallings(const GroupDescriptor& group, const std::vector<Element>& generators);
  static SubgroupOracle cyclic(const GroupDescriptor& group, const Element& generator);
  static SubgroupOracle product(const GroupDescriptor& group, std::vector<OraclePtr> parts);
  /// Diagonal {(w, w, ..., w)} of a product of equal-rank factors.
  static SubgroupOracle diagonal(const GroupDescriptor& group);
  /// Graph {(w, phi(w))} of a homomorphism F_{k_0} -> F_{k_1} given by generator images.
  static SubgroupOracle graph_of(const GroupDescriptor& group, std::vector<Word> images);
  static SubgroupOracle pullback(const GroupDescriptor& group, Pullback spec);
  static SubgroupOracle budgeted(const GroupDescriptor& group, const std::vector<Element>& generators,
                                 std::size_t radius, std::size_t element_budget = 10'000'000);

  const GroupDescriptor& group() const { return group_; }
  const Variant& variant() const { return variant_; }
  const std::vector<Element>& generators() const { return generators_; }

  /// Exact answer for every variant except BudgetedEnumeration.
  bool is_exact() const { return !std::holds_alternative<BudgetedEnumeration>(variant_); }

  Membership contains(const Element& g) const;

  /// Canonical subgroup spec string (see parse_subgroup).
  std::string to_spec() const;

 private:
  SubgroupOracle(GroupDescriptor group, Variant v, std::vector<Element> generators)
      : group_(std::move(group)), variant_(std::move(v)), generators_(std::move(generators)) {}

  GroupDescriptor group_;
  Variant variant_;
  std::vector<Element> generators_;
};

/// Exponent k with g = c^k, if any.
std::optional<long long> cyclic_exponent(const Element& c, const Element& g);

/// psi_J: keeps the components listed in `factors` (ascending, distinct).
Element project(const Element& g, const std::vector<std::size_t>& factors);
/// iota_J: places the components of `g` at `factors`, identity elsewhere.
Element embed(const Element& g, const std::vector<std::size_t>& factors, const GroupDescriptor& target);

/// Subgroup spec grammar:
///   all                      whole group
///   "aa, bb"                 generators (Stallings for free groups,
///                            budgeted enumeration for products)
///   cyclic:"ab"              cyclic subgroup
///   diag                     diagonal of a product of equal factors
///   hom:"ab,B"               graph of a homomorphism factor 0 -> factor 1
///   enum(R):"(a,a),(b,b)"    budgeted enumeration with radius R
///   prod(H1; H2; ...)        one spec per factor
/// Quotes are optional.
SubgroupOracle parse_subgroup(const GroupDescriptor& group, std::string_view text);

}  // namespace growthlab
