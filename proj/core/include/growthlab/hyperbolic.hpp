#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/group.hpp"

namespace growthlab {

// Exact value in (1/2)Z, stored as twice the value. Gromov products and
// four-point defects of integer metrics live here.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_twice(long long twice) { return HalfInteger(twice); }
  static constexpr HalfInteger from_integer(long long n) { return HalfInteger(2 * n); }

  constexpr long long twice() const { return twice_; }
  constexpr double value() const { return static_cast<double>(twice_) / 2.0; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// "3" or "2.5".
  std::string to_string() const;

  friend constexpr auto operator<=>(const HalfInteger&, const HalfInteger&) = default;
  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) { return HalfInteger(a.twice_ + b.twice_); }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) { return HalfInteger(a.twice_ - b.twice_); }

 private:
  constexpr explicit HalfInteger(long long twice) : twice_(twice) {}
  long long twice_ = 0;
};

/// (x.y)_o = (d(x,o) + d(y,o) - d(x,y)) / 2 in the word metric.
HalfInteger gromov_product(const Element& x, const Element& y, const Element& o);

// A finite metric space given by a symmetric integer distance matrix.
class FiniteMetric {
 public:
  FiniteMetric() = default;
  FiniteMetric(std::size_t n, std::vector<std::uint32_t> distances);

  static FiniteMetric from_elements(const std::vector<Element>& points);
  /// Square CSV matrix of nonnegative integers; an optional header row or
  /// label column of non-numeric cells is skipped.
  static FiniteMetric from_csv(std::istream& in);

  std::size_t size() const { return n_; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  /// Symmetry, zero diagonal and the triangle inequality on every triple.
  bool satisfies_metric_axioms() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> dist_;
};

struct DeltaOptions {
  enum class Mode { exhaustive, random };
  Mode mode = Mode::exhaustive;
  std::size_t trials = 1'000'000;  // random mode
  std::uint64_t seed = 0;          // random mode
  std::size_t max_tuples = 200'000'000;
  std::size_t workers = 1;
};

struct DeltaEstimate {
  HalfInteger delta;
  /// (o, x, y, z) attaining delta; all zero when delta is zero and no tuple improves on it.
  std::array<std::size_t, 4> witness{};
  std::size_t tuples_checked = 0;
};

/// Smallest delta >= 0 with (x.y)_o >= min((x.z)_o, (z.y)_o) - delta over all
/// ordered 4-tuples (exhaustive, Theta(n^4)) or over sampled tuples. The sample
/// value is a lower bound for the delta of any space containing the sample.
DeltaEstimate estimate_delta(const FiniteMetric& metric, const DeltaOptions& options = {});

// A map from the integer interval [first, first + points.size() - 1] to the group.
struct DiscretePath {
  long long first = 0;
  std::vector<Element> points;

  long long last() const { return first + static_cast<long long>(points.size()) - 1; }
  const Element& at(long long t) const { return points.at(static_cast<std::size_t>(t - first)); }
};

/// n -> g^n x for n in [from, to].
DiscretePath orbit_path(const Element& g, const Element& x, long long from, long long to);

struct QuasigeodesicCheck {
  bool ok = true;
  /// Pair (t, t') with the largest violation of either inequality.
  std::optional<std::pair<long long, long long>> violation;
};

QuasigeodesicCheck is_quasigeodesic(const DiscretePath& path, double lambda, double epsilon);

std::size_t hausdorff_distance(const std::vector<Element>& a, const std::vector<Element>& b);

/// Vertices of the unique geodesic from p to q in a free group's Cayley tree.
std::vector<Element> tree_geodesic(const Element& p, const Element& q);

/// Hausdorff distance between the image of the path and the geodesic joining
/// its endpoints. Free groups only.
std::size_t quasigeodesic_deviation(const DiscretePath& path);

struct AcylindricityWitnesses {
  std::size_t count = 0;
  std::vector<Element> witnesses;  // shortlex order
};

/// All g with d(x, gx) <= eps and d(y, gy) <= eps. The first condition means
/// g = x w x^{-1} with |w| <= eps, so the candidates are finite and exact.
AcylindricityWitnesses acylindricity_witnesses(const GroupDescriptor& group, const Element& x, const Element& y,
                                               std::size_t eps);

/// (x.y)_z == (gx.gy)_{gz}.
bool check_equivariance(const Element& g, const Element& x, const Element& y, const Element& z);

}  // namespace growthlab
