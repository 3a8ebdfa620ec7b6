#include "growthlab/hyperbolic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <random>
#include <sstream>

#include "growthlab/cayley.hpp"
#include "growthlab/error.hpp"
#include "growthlab/parallel.hpp"

namespace growthlab {

std::string HalfInteger::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  const long long whole = twice_ / 2;
  if (twice_ < 0 && whole == 0) return "-0.5";
  return std::to_string(whole) + ".5";
}

HalfInteger gromov_product(const Element& x, const Element& y, const Element& o) {
  const auto twice = static_cast<long long>(distance(x, o) + distance(y, o)) - static_cast<long long>(distance(x, y));
  return HalfInteger::from_twice(twice);
}

// ---------------------------------------------------------------------------

FiniteMetric::FiniteMetric(std::size_t n, std::vector<std::uint32_t> distances) : n_(n), dist_(std::move(distances)) {
  if (dist_.size() != n_ * n_) throw MalformedInput("distance matrix must be n x n");
}

FiniteMetric FiniteMetric::from_elements(const std::vector<Element>& points) {
  const std::size_t n = points.size();
  std::vector<std::uint32_t> d(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i * n + j] = d[j * n + i] = static_cast<std::uint32_t>(distance(points[i], points[j]));
    }
  }
  return FiniteMetric(n, std::move(d));
}

FiniteMetric FiniteMetric::from_csv(std::istream& in) {
  auto numeric = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  auto strip = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
  };
  std::vector<std::vector<std::uint32_t>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(strip(cell));
    if (std::none_of(cells.begin(), cells.end(), numeric)) continue;  // header
    if (!cells.empty() && !numeric(cells.front())) cells.erase(cells.begin());  // label column
    std::vector<std::uint32_t> row;
    for (const auto& c : cells) {
      if (!numeric(c)) {
        throw MalformedInput("distance matrix line " + std::to_string(line_no) + ": `" + c + "` is not a natural number");
      }
      row.push_back(static_cast<std::uint32_t>(std::stoul(c)));
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  std::vector<std::uint32_t> d;
  d.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw MalformedInput("distance matrix is not square");
    d.insert(d.end(), r.begin(), r.end());
  }
  FiniteMetric m(n, std::move(d));
  if (!m.satisfies_metric_axioms()) throw MalformedInput("distance matrix is not a metric");
  return m;
}

bool FiniteMetric::satisfies_metric_axioms() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0) return false;
    for (std::size_t j = 0; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
      if (i != j && (*this)(i, j) == 0) return false;
      for (std::size_t k = 0; k < n_; ++k) {
        if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

DeltaEstimate estimate_delta(const FiniteMetric& metric, const DeltaOptions& options) {
  const std::size_t n = metric.size();
  if (n == 0) throw MalformedInput("estimate_delta: empty sample");
  DeltaEstimate best;

  if (options.mode == DeltaOptions::Mode::random) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    auto gp = [&](std::size_t x, std::size_t y, std::size_t o) {
      return static_cast<long long>(metric(x, o)) + metric(y, o) - static_cast<long long>(metric(x, y));
    };
    for (std::size_t t = 0; t < options.trials; ++t) {
      const std::size_t o = pick(rng), x = pick(rng), y = pick(rng), z = pick(rng);
      const long long defect = std::min(gp(x, z, o), gp(z, y, o)) - gp(x, y, o);
      if (defect > best.delta.twice()) {
        best.delta = HalfInteger::from_twice(defect);
        best.witness = {o, x, y, z};
      }
    }
    best.tuples_checked = options.trials;
    return best;
  }

  const long double tuples = std::pow(static_cast<long double>(n), 4);
  if (tuples > static_cast<long double>(options.max_tuples)) {
    throw RangeError("estimate_delta: " + std::to_string(n) + " points give more than " +
                     std::to_string(options.max_tuples) + " ordered 4-tuples; use random mode or raise the cap");
  }

  const std::size_t workers = std::max<std::size_t>(1, options.workers);
  std::vector<DeltaEstimate> partial(workers);
  parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    std::vector<int> p(n * n);  // twice (x.y)_o for the current o
    DeltaEstimate local;
    for (std::size_t o = begin; o < end; ++o) {
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          p[x * n + y] = static_cast<int>(metric(x, o)) + static_cast<int>(metric(y, o)) - static_cast<int>(metric(x, y));
        }
      }
      for (std::size_t x = 0; x < n; ++x) {
        const int* px = &p[x * n];
        for (std::size_t z = 0; z < n; ++z) {
          const int a = px[z];
          const int* pz = &p[z * n];
          int row_max = 0;
          for (std::size_t y = 0; y < n; ++y) row_max = std::max(row_max, std::min(a, pz[y]) - px[y]);
          if (row_max > local.delta.twice()) {
            for (std::size_t y = 0; y < n; ++y) {
              if (std::min(a, pz[y]) - px[y] == row_max) {
                local.witness = {o, x, y, z};
                break;
              }
            }
            local.delta = HalfInteger::from_twice(row_max);
          }
        }
      }
    }
    local.tuples_checked = (end - begin) * n * n * n;
    partial[w] = local;
  });
  for (const auto& part : partial) {
    if (part.delta > best.delta) {
      best.delta = part.delta;
      best.witness = part.witness;
    }
    best.tuples_checked += part.tuples_checked;
  }
  return best;
}

// ---------------------------------------------------------------------------

DiscretePath orbit_path(const Element& g, const Element& x, long long from, long long to) {
  DiscretePath path{from, {}};
  if (to < from) return path;
  Element cur = multiply(power(g, from), x);
  for (long long t = from; t <= to; ++t) {
    path.points.push_back(cur);
    cur = multiply(g, cur);
  }
  return path;
}

QuasigeodesicCheck is_quasigeodesic(const DiscretePath& path, double lambda, double epsilon) {
  if (lambda < 1.0 || epsilon < 0.0) throw RangeError("is_quasigeodesic: need lambda >= 1 and epsilon >= 0");
  QuasigeodesicCheck result;
  double worst = 0.0;
  const auto n = path.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dt = static_cast<double>(j - i);
      const double d = static_cast<double>(distance(path.points[i], path.points[j]));
      const double below = (dt / lambda - epsilon) - d;  // lower inequality deficit
      const double above = d - (lambda * dt + epsilon);  // upper inequality excess
      const double v = std::max(below, above);
      if (v > 0.0 && v > worst) {
        worst = v;
        result.ok = false;
        result.violation = std::pair{path.first + static_cast<long long>(i), path.first + static_cast<long long>(j)};
      }
    }
  }
  return result;
}

std::size_t hausdorff_distance(const std::vector<Element>& a, const std::vector<Element>& b) {
  if (a.empty() || b.empty()) throw MalformedInput("hausdorff_distance: empty set");
  auto directed = [](const std::vector<Element>& from, const std::vector<Element>& to) {
    std::size_t worst = 0;
    for (const auto& p : from) {
      std::size_t nearest = SIZE_MAX;
      for (const auto& q : to) nearest = std::min(nearest, distance(p, q));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::vector<Element> tree_geodesic(const Element& p, const Element& q) {
  if (p.factor_count() != 1 || q.factor_count() != 1) {
    throw Unsupported("geodesics are unique only in a single free factor");
  }
  const Word step = invert(p).component(0) * q.component(0);
  std::vector<Element> out{p};
  Element cur = p;
  for (std::size_t i = 0; i < step.length(); ++i) {
    const LetterCode c = step[i];
    cur = cur.times({0, static_cast<std::uint16_t>(letter_of(c)), static_cast<std::int8_t>(sign_of(c))});
    out.push_back(cur);
  }
  return out;
}

std::size_t quasigeodesic_deviation(const DiscretePath& path) {
  if (path.points.empty()) throw MalformedInput("quasigeodesic_deviation: empty path");
  if (path.points.front().factor_count() != 1) {
    throw Unsupported("quasigeodesic_deviation: product groups have no unique geodesic between two points");
  }
  return hausdorff_distance(path.points, tree_geodesic(path.points.front(), path.points.back()));
}

AcylindricityWitnesses acylindricity_witnesses(const GroupDescriptor& group, const Element& x, const Element& y,
                                               std::size_t eps) {
  group.validate(x);
  group.validate(y);
  const Element x_inv = invert(x);
  AcylindricityWitnesses out;
  for (const auto& w : enumerate_ball(group, eps).elements) {
    Element g = multiply(multiply(x, w), x_inv);
    if (distance(y, multiply(g, y)) <= eps) out.witnesses.push_back(std::move(g));
  }
  std::sort(out.witnesses.begin(), out.witnesses.end(), ShortlexLess{});
  out.count = out.witnesses.size();
  return out;
}

bool check_equivariance(const Element& g, const Element& x, const Element& y, const Element& z) {
  return gromov_product(x, y, z) == gromov_product(multiply(g, x), multiply(g, y), multiply(g, z));
}

}  // namespace growthlab
