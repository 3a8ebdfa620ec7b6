#include "growthlab/concat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "growthlab/parallel.hpp"

namespace growthlab {

namespace {

// (a.b)_1 in a product of trees is the summed length of the common prefixes.
long long common_prefix(const Element& a, const Element& b) {
  long long n = 0;
  for (std::size_t f = 0; f < a.factor_count(); ++f) {
    const std::string& x = a.component(f).codes();
    const std::string& y = b.component(f).codes();
    auto [ix, iy] = std::mismatch(x.begin(), x.end(), y.begin(), y.end());
    n += ix - x.begin();
  }
  return n;
}

struct Choice {
  std::size_t index;
  long long score;  // integer: products at the identity in trees are integral
};

Choice choose(const ConnectorKit& kit, const Element& u_inv, const Element& v) {
  Choice best{0, std::numeric_limits<long long>::max()};
  for (std::size_t i = 0; i < kit.pieces().size(); ++i) {
    const long long s = std::max(common_prefix(u_inv, kit.pieces()[i]), common_prefix(v, kit.inverse_pieces()[i]));
    if (s < best.score) best = {i, s};
  }
  return best;
}

struct Record {
  Element image;
  std::uint8_t s;
  std::uint8_t t;
};

template <typename Apply>
AmbiguityReport measure_impl(const GroupDescriptor& group, const SubgroupOracle* oracle, std::size_t s_max,
                             std::size_t t_max, std::size_t c, const Budget& budget, const AmbiguityOptions& options,
                             const Apply& apply) {
  if (s_max > 255 || t_max > 255) throw RangeError("measure_ambiguity: radii above 255 are not supported");
  const std::size_t radius = std::max(s_max, t_max);
  const Ball ball = oracle ? relative_ball(group, *oracle, radius, budget) : enumerate_ball(group, radius, budget);
  const std::size_t nu = ball.count_within(s_max);
  const std::size_t nv = ball.count_within(t_max);
  const std::uint64_t pairs = static_cast<std::uint64_t>(nu) * nv;
  if (pairs > budget.max_elements) {
    std::optional<AmbiguityReport> partial;
    std::size_t s_fit = s_max;
    while (s_fit > 0 && static_cast<std::uint64_t>(ball.count_within(s_fit)) * nv > budget.max_elements) --s_fit;
    if (static_cast<std::uint64_t>(ball.count_within(s_fit)) * nv <= budget.max_elements) {
      partial = measure_impl(group, oracle, s_fit, t_max, c, budget, options, apply);
    }
    throw AmbiguityBudgetExceeded("measure_ambiguity: " + std::to_string(pairs) + " pairs exceed the budget of " +
                                      std::to_string(budget.max_elements),
                                  s_fit, std::move(partial));
  }

  const std::size_t workers = std::max<std::size_t>(1, budget.workers);
  std::vector<std::vector<Record>> parts(workers);
  std::vector<long long> scores(workers, 0);
  std::vector<char> contained(workers, 1);
  parallel_chunks(nu, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    auto& out = parts[w];
    out.reserve((end - begin) * nv);
    for (std::size_t i = begin; i < end; ++i) {
      const Element& u = ball.elements[i];
      const Element u_inv = invert(u);
      for (std::size_t j = 0; j < nv; ++j) {
        const Element& v = ball.elements[j];
        long long score = 0;
        Element image = apply(u, u_inv, v, score);
        scores[w] = std::max(scores[w], score);
        if (image.length() > u.length() + v.length() + c) contained[w] = 0;
        out.push_back({std::move(image), static_cast<std::uint8_t>(u.length()), static_cast<std::uint8_t>(v.length())});
      }
    }
  });
  std::vector<Record> records;
  records.reserve(pairs);
  for (auto& p : parts) {
    records.insert(records.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    p.clear();
    p.shrink_to_fit();
  }
  std::sort(records.begin(), records.end(),
            [](const Record& a, const Record& b) { return shortlex_compare(a.image, b.image) < 0; });

  AmbiguityReport report;
  report.s_max = s_max;
  report.t_max = t_max;
  report.c = c;
  report.pairs = pairs;
  report.unknown_count = ball.unknown_count;
  report.image_containment = std::all_of(contained.begin(), contained.end(), [](char b) { return b != 0; });
  report.max_score = HalfInteger::from_integer(*std::max_element(scores.begin(), scores.end()));
  const std::size_t cols = t_max + 1;
  for (std::size_t s = 0; s <= s_max; ++s) {
    for (std::size_t t = 0; t <= t_max; ++t) report.cells.push_back({s, t, s + t + c, 0, group.identity()});
  }

  // Per image: counts by exact (|u|, |v|), then 2D prefix sums give the fiber
  // over B(s) x B(t) for every cell at once.
  std::vector<std::uint64_t> grid((s_max + 1) * cols);
  for (std::size_t lo = 0; lo < records.size();) {
    std::size_t hi = lo;
    std::fill(grid.begin(), grid.end(), 0);
    while (hi < records.size() && records[hi].image == records[lo].image) {
      ++grid[records[hi].s * cols + records[hi].t];
      ++hi;
    }
    for (std::size_t s = 0; s <= s_max; ++s) {
      for (std::size_t t = 0; t <= t_max; ++t) {
        std::uint64_t& g = grid[s * cols + t];
        if (s) g += grid[(s - 1) * cols + t];
        if (t) g += grid[s * cols + t - 1];
        if (s && t) g -= grid[(s - 1) * cols + t - 1];
        AmbiguityCell& cell = report.cells[s * cols + t];
        if (g > cell.max_fiber) {
          cell.max_fiber = g;
          cell.argmax = records[lo].image;
        }
      }
    }
    lo = hi;
  }

  report.max_fiber_by_t.assign(cols, 0);
  for (const auto& cell : report.cells) {
    report.max_fiber_by_t[cell.t] = std::max(report.max_fiber_by_t[cell.t], cell.max_fiber);
  }
  report.fit_t_max = std::min(options.fit_t_max.value_or(t_max / 2), t_max);
  report.envelope = fit_affine_envelope(report.max_fiber_by_t, report.fit_t_max);
  for (const auto& cell : report.cells) {
    if (cell.t > report.fit_t_max && static_cast<double>(cell.max_fiber) > report.envelope(cell.t) + 1e-9) {
      report.flagged.emplace_back(cell.s, cell.t);
    }
  }
  return report;
}

}  // namespace

ConnectorKit ConnectorKit::build(const GroupDescriptor& group, const Element& g, const Element& h, long long n,
                                 bool assume_independent) {
  group.validate(g);
  group.validate(h);
  if (n < 1) throw MalformedInput("connector exponent must be at least 1");
  if (g.is_identity() || h.is_identity()) throw MalformedInput("connector elements must be nontrivial");
  if (!assume_independent && multiply(g, h) == multiply(h, g)) {
    throw MalformedInput("connector elements " + format_element(g) + " and " + format_element(h) +
                         " commute, so they are powers of a common root");
  }
  ConnectorKit kit;
  kit.group_ = group;
  kit.g_ = g;
  kit.h_ = h;
  kit.exponent_ = n;
  kit.pieces_ = {power(g, n), power(g, -n), power(h, n), power(h, -n)};
  for (std::size_t i = 0; i < kit.pieces_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (kit.pieces_[i] == kit.pieces_[j]) throw MalformedInput("connecting pieces are not distinct");
    }
  }
  for (const auto& p : kit.pieces_) {
    kit.inverse_pieces_.push_back(invert(p));
    kit.c_ = std::max(kit.c_, p.length());
  }
  return kit;
}

ConnectorKit ConnectorKit::naive(const GroupDescriptor& group) { return from_pieces(group, {group.identity()}); }

ConnectorKit ConnectorKit::from_pieces(const GroupDescriptor& group, std::vector<Element> pieces) {
  if (pieces.empty()) throw MalformedInput("connector kit needs at least one piece");
  ConnectorKit kit;
  kit.group_ = group;
  kit.g_ = kit.h_ = group.identity();
  for (const auto& p : pieces) {
    group.validate(p);
    kit.inverse_pieces_.push_back(invert(p));
    kit.c_ = std::max(kit.c_, p.length());
  }
  kit.pieces_ = std::move(pieces);
  return kit;
}

ConnectorChoice select_connector(const ConnectorKit& kit, const Element& u, const Element& v) {
  kit.group().validate(u);
  kit.group().validate(v);
  const Choice c = choose(kit, invert(u), v);
  return {c.index, kit.pieces()[c.index], HalfInteger::from_integer(c.score)};
}

Element concat_apply(const ConnectorKit& kit, const Element& u, const Element& v) {
  return multiply(multiply(u, select_connector(kit, u, v).piece), v);
}

Element product_concat_apply(const std::vector<ConnectorKit>& kits, const Element& u, const Element& v) {
  if (kits.size() != u.factor_count() || kits.size() != v.factor_count()) {
    throw DescriptorMismatch("product_concat_apply: need one kit per factor");
  }
  std::vector<Word> out;
  out.reserve(kits.size());
  for (std::size_t f = 0; f < kits.size(); ++f) {
    if (kits[f].group().factor_count() != 1) {
      throw DescriptorMismatch("product_concat_apply: kit " + std::to_string(f) + " is not over a single factor");
    }
    out.push_back(concat_apply(kits[f], Element({u.component(f)}), Element({v.component(f)})).component(0));
  }
  return Element(std::move(out));
}

std::uint64_t fiber_size(const ConnectorKit& kit, const Ball& ball_s, const SubgroupOracle* oracle, const Element& z,
                         std::size_t t) {
  kit.group().validate(z);
  std::uint64_t n = 0;
  for (const Element& u : ball_s.elements) {
    const Element u_inv = invert(u);
    const Element rest = multiply(u_inv, z);
    for (std::size_t i = 0; i < kit.pieces().size(); ++i) {
      // u x v = z forces v = x^-1 u^-1 z.
      const Element v = multiply(kit.inverse_pieces()[i], rest);
      if (v.length() > t) continue;
      if (oracle && oracle->contains(v) != Membership::yes) continue;
      if (choose(kit, u_inv, v).index == i) ++n;
    }
  }
  return n;
}

AmbiguityReport measure_ambiguity(const ConnectorKit& kit, const SubgroupOracle* oracle, std::size_t s_max,
                                  std::size_t t_max, const Budget& budget, const AmbiguityOptions& options) {
  return measure_impl(kit.group(), oracle, s_max, t_max, kit.c(), budget, options,
                      [&kit](const Element& u, const Element& u_inv, const Element& v, long long& score) {
                        const Choice ch = choose(kit, u_inv, v);
                        score = ch.score;
                        return multiply(multiply(u, kit.pieces()[ch.index]), v);
                      });
}

AmbiguityReport measure_product_ambiguity(const GroupDescriptor& group, const std::vector<ConnectorKit>& kits,
                                          const SubgroupOracle* oracle, std::size_t s_max, std::size_t t_max,
                                          const Budget& budget, const AmbiguityOptions& options) {
  if (kits.size() != group.factor_count()) throw DescriptorMismatch("need one connector kit per factor");
  std::size_t c = 0;
  for (std::size_t f = 0; f < kits.size(); ++f) {
    if (kits[f].group() != GroupDescriptor::free(group.rank(f))) {
      throw DescriptorMismatch("connector kit " + std::to_string(f) + " is not over free:" + std::to_string(group.rank(f)));
    }
    c += kits[f].c();
  }
  return measure_impl(group, oracle, s_max, t_max, c, budget, options,
                      [&kits](const Element& u, const Element& u_inv, const Element& v, long long& score) {
                        std::vector<Word> out;
                        out.reserve(kits.size());
                        score = 0;
                        for (std::size_t f = 0; f < kits.size(); ++f) {
                          const Element vf({v.component(f)});
                          const Choice ch = choose(kits[f], Element({u_inv.component(f)}), vf);
                          score = std::max(score, ch.score);
                          out.push_back(u.component(f) * kits[f].pieces()[ch.index].component(0) * v.component(f));
                        }
                        return Element(std::move(out));
                      });
}

FunctionSpec fit_affine_envelope(const std::vector<std::uint64_t>& values, std::size_t fit_t_max) {
  if (values.empty()) throw RangeError("fit_affine_envelope: no data");
  fit_t_max = std::min(fit_t_max, values.size() - 1);
  double slope = 0;
  for (std::size_t t = 1; t <= fit_t_max; ++t) {
    slope = std::max(slope, static_cast<double>(values[t]) - static_cast<double>(values[t - 1]));
  }
  double intercept = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t <= fit_t_max; ++t) {
    intercept = std::max(intercept, static_cast<double>(values[t]) - slope * static_cast<double>(t));
  }
  return FunctionSpec::affine(slope, intercept);
}

HalfInteger max_connector_score(const ConnectorKit& kit, std::size_t radius, const Budget& budget) {
  const Ball ball = enumerate_ball(kit.group(), radius, budget);
  const std::size_t workers = std::max<std::size_t>(1, budget.workers);
  std::vector<long long> best(workers, 0);
  parallel_chunks(ball.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    for (std::size_t i = begin; i < end; ++i) {
      const Element u_inv = invert(ball.elements[i]);
      for (const auto& v : ball.elements) best[w] = std::max(best[w], choose(kit, u_inv, v).score);
    }
  });
  return HalfInteger::from_integer(*std::max_element(best.begin(), best.end()));
}

SupermultiplicativityCheck verify_supermultiplicativity(const GrowthTable& growth, std::size_t c, const FunctionSpec& l,
                                                        std::size_t s_max, std::size_t t_max) {
  if (growth.counts.empty() || growth.max_radius() < s_max + t_max + c) {
    throw RangeError("verify_supermultiplicativity: table reaches radius " + std::to_string(growth.max_radius()) +
                     ", need " + std::to_string(s_max + t_max + c));
  }
  SupermultiplicativityCheck out;
  for (std::size_t s = 0; s <= s_max; ++s) {
    for (std::size_t t = 0; t <= t_max; ++t) {
      const long double lhs = static_cast<long double>(growth(s)) * static_cast<long double>(growth(t));
      const long double rhs = static_cast<long double>(l(t)) * static_cast<long double>(growth(s + t + c));
      if (lhs > rhs) out.violations.emplace_back(s, t);
    }
  }
  out.ok = out.violations.empty();
  return out;
}

}  // namespace growthlab
