#include "growthlab/cayley.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "growthlab/parallel.hpp"

namespace growthlab {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw RangeError("growth count overflows 64 bits");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw RangeError("growth count overflows 64 bits");
  return r;
}

using SphereFn = std::function<void(std::size_t, const std::vector<Element>&)>;

// Breadth-first sphere expansion. Every generator changes the length of one
// component by exactly one, so sphere r is the set of products w x with w in
// sphere r-1 and |w x| = r.
void expand_spheres(const GroupDescriptor& group, std::size_t radius, const Budget& budget, const SphereFn& on_sphere) {
  const auto gens = group.generators();
  std::vector<Element> sphere{group.identity()};
  std::size_t total = 1;
  on_sphere(0, sphere);
  for (std::size_t r = 1; r <= radius; ++r) {
    const std::size_t workers = std::max<std::size_t>(1, budget.workers);
    std::vector<std::vector<Element>> parts(workers);
    parallel_chunks(sphere.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
      auto& out = parts[w];
      out.reserve((end - begin) * (gens.size() - 1));
      for (std::size_t i = begin; i < end; ++i) {
        for (const auto& x : gens) {
          Element e = sphere[i].times(x);
          if (e.length() == r) out.push_back(std::move(e));
        }
      }
      std::sort(out.begin(), out.end(), ShortlexLess{});
      out.erase(std::unique(out.begin(), out.end()), out.end());
    });
    std::vector<Element> next;
    if (parts.size() == 1) {
      next = std::move(parts[0]);
    } else {
      for (auto& p : parts) {
        auto mid = static_cast<std::ptrdiff_t>(next.size());
        next.insert(next.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
        std::inplace_merge(next.begin(), next.begin() + mid, next.end(), ShortlexLess{});
        p.clear();
        p.shrink_to_fit();
      }
      next.erase(std::unique(next.begin(), next.end()), next.end());
    }
    total += next.size();
    if (total > budget.max_elements) {
      throw BudgetExceeded("ball enumeration of " + group.to_string() + " exceeded " +
                               std::to_string(budget.max_elements) + " elements at radius " + std::to_string(r),
                           r - 1);
    }
    on_sphere(r, next);
    sphere = std::move(next);
  }
}

std::vector<Element> filter_members(const SubgroupOracle& oracle, const std::vector<Element>& sphere,
                                    std::size_t workers, std::size_t& unknown) {
  workers = std::max<std::size_t>(1, workers);
  std::vector<std::vector<Element>> kept(workers);
  std::vector<std::size_t> unknowns(workers, 0);
  parallel_chunks(sphere.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    for (std::size_t i = begin; i < end; ++i) {
      switch (oracle.contains(sphere[i])) {
        case Membership::yes: kept[w].push_back(sphere[i]); break;
        case Membership::unknown: ++unknowns[w]; break;
        case Membership::no: break;
      }
    }
  });
  std::vector<Element> out;
  for (std::size_t w = 0; w < workers; ++w) {
    out.insert(out.end(), std::make_move_iterator(kept[w].begin()), std::make_move_iterator(kept[w].end()));
    unknown += unknowns[w];
  }
  return out;
}

std::vector<std::uint64_t> free_spheres(int rank, std::size_t n) {
  std::vector<std::uint64_t> s(n + 1, 0);
  s[0] = 1;
  if (n >= 1) s[1] = 2 * static_cast<std::uint64_t>(rank);
  for (std::size_t i = 2; i <= n; ++i) s[i] = checked_mul(s[i - 1], 2 * static_cast<std::uint64_t>(rank) - 1);
  return s;
}

std::vector<std::uint64_t> convolve(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < out.size() && j < b.size(); ++j) {
      out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
    }
  }
  return out;
}

bool letter_permutation(const std::vector<Word>& images) {
  std::vector<bool> used;
  for (const auto& w : images) {
    if (w.length() != 1) return false;
    const auto l = static_cast<std::size_t>(letter_of(w[0]));
    if (used.size() <= l) used.resize(l + 1, false);
    if (used[l]) return false;
    used[l] = true;
  }
  return true;
}

std::vector<std::uint64_t> pullback_spheres(const GroupDescriptor& group, const SubgroupOracle::Pullback& pb,
                                            std::size_t n, const Budget& budget) {
  // Depth-first over reduced source words, carrying the constraint images.
  bool length_preserving = true;
  for (const auto& c : pb.constraints) length_preserving = length_preserving && letter_permutation(c.images);
  const std::size_t factor = 1 + pb.constraints.size();
  const std::size_t max_source = length_preserving ? n / factor : n;
  const int rank = group.rank(pb.source);

  std::vector<std::uint64_t> spheres(n + 1, 0);
  std::size_t nodes = 0;
  std::vector<Word> images(pb.constraints.size());
  std::function<void(const Word&, std::size_t)> visit = [&](const Word& w, std::size_t image_length) {
    if (++nodes > budget.max_elements) {
      throw BudgetExceeded("pullback counting exceeded " + std::to_string(budget.max_elements) + " source words",
                           0);
    }
    const std::size_t total = w.length() + image_length;
    if (total <= n && pb.base->contains(Element({w})) == Membership::yes) spheres[total] = checked_add(spheres[total], 1);
    if (w.length() == max_source) return;
    for (int l = 0; l < rank; ++l) {
      for (int sign : {1, -1}) {
        const LetterCode code = encode_letter(l, sign);
        if (!w.empty() && w[w.length() - 1] == -code) continue;
        std::vector<Word> saved = images;
        std::size_t len = 0;
        for (std::size_t c = 0; c < images.size(); ++c) {
          const Word& img = pb.constraints[c].images[static_cast<std::size_t>(l)];
          images[c] = images[c] * (sign > 0 ? img : img.inverse());
          len += images[c].length();
        }
        visit(w.times(code), len);
        images = std::move(saved);
      }
    }
  };
  visit(Word{}, 0);

  std::vector<bool> constrained(group.factor_count(), false);
  constrained[pb.source] = true;
  for (const auto& c : pb.constraints) constrained[c.target] = true;
  for (std::size_t f = 0; f < group.factor_count(); ++f) {
    if (!constrained[f]) spheres = convolve(spheres, free_spheres(group.rank(f), n));
  }
  return spheres;
}

std::vector<std::uint64_t> counted_spheres(const SubgroupOracle& oracle, std::size_t n, const Budget& budget) {
  const GroupDescriptor& group = oracle.group();
  return std::visit(
      [&](const auto& v) -> std::vector<std::uint64_t> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SubgroupOracle::Whole>) {
          std::vector<std::uint64_t> s = free_spheres(group.rank(0), n);
          for (std::size_t f = 1; f < group.factor_count(); ++f) s = convolve(s, free_spheres(group.rank(f), n));
          return s;
        } else if constexpr (std::is_same_v<T, SubgroupOracle::Stallings>) {
          return v.graph.sphere_counts(n);
        } else if constexpr (std::is_same_v<T, SubgroupOracle::Cyclic>) {
          // |c^k| = sum over factors of 2|p_f| + |k| |r_f| for k != 0, c_f = p_f r_f p_f^-1.
          std::size_t prefix = 0, core = 0;
          for (const auto& w : v.generator.components()) {
            if (w.empty()) continue;
            std::size_t t = 0;
            while (t + 1 < w.length() - t && w[t] == -w[w.length() - 1 - t]) ++t;
            prefix += 2 * t;
            core += w.length() - 2 * t;
          }
          std::vector<std::uint64_t> s(n + 1, 0);
          s[0] = 1;
          if (core == 0) return s;
          for (std::size_t len = prefix + core; len <= n; len += core) s[len] += 2;
          return s;
        } else if constexpr (std::is_same_v<T, SubgroupOracle::Product>) {
          std::vector<std::uint64_t> s = counted_spheres(*v.parts[0], n, budget);
          for (std::size_t f = 1; f < v.parts.size(); ++f) s = convolve(s, counted_spheres(*v.parts[f], n, budget));
          return s;
        } else if constexpr (std::is_same_v<T, SubgroupOracle::Pullback>) {
          return pullback_spheres(group, v, n, budget);
        } else {
          throw Unsupported("exact counting is not available for budgeted enumeration oracles");
        }
      },
      oracle.variant());
}

}  // namespace

std::size_t Ball::count_within(std::size_t r) const {
  auto it = std::partition_point(elements.begin(), elements.end(), [r](const Element& e) { return e.length() <= r; });
  return static_cast<std::size_t>(it - elements.begin());
}

std::vector<std::uint64_t> GrowthTable::spheres() const {
  std::vector<std::uint64_t> s(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) s[i] = i ? counts[i] - counts[i - 1] : counts[i];
  return s;
}

Ball enumerate_ball(const GroupDescriptor& group, std::size_t radius, const Budget& budget) {
  Ball ball{group, radius, {}, 0};
  expand_spheres(group, radius, budget, [&](std::size_t, const std::vector<Element>& sphere) {
    ball.elements.insert(ball.elements.end(), sphere.begin(), sphere.end());
  });
  return ball;
}

Ball relative_ball(const GroupDescriptor& group, const SubgroupOracle& oracle, std::size_t radius,
                   const Budget& budget) {
  if (oracle.group() != group) throw DescriptorMismatch("relative_ball: oracle is over " + oracle.group().to_string());
  Ball ball{group, radius, {}, 0};
  expand_spheres(group, radius, budget, [&](std::size_t, const std::vector<Element>& sphere) {
    auto kept = filter_members(oracle, sphere, budget.workers, ball.unknown_count);
    ball.elements.insert(ball.elements.end(), std::make_move_iterator(kept.begin()), std::make_move_iterator(kept.end()));
  });
  return ball;
}

std::vector<std::pair<std::size_t, std::size_t>> submultiplicativity_violations(const GrowthTable& table) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = table.max_radius();
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t b = 0; a + b <= n; ++b) {
      const unsigned __int128 rhs = static_cast<unsigned __int128>(table.counts[a]) * table.counts[b];
      if (table.counts[a + b] > rhs) out.emplace_back(a, b);
    }
  }
  return out;
}

GrowthTable growth_sequence(const GroupDescriptor& group, const SubgroupOracle* oracle, std::size_t max_radius,
                            const Budget& budget) {
  if (oracle && oracle->group() != group) {
    throw DescriptorMismatch("growth_sequence: oracle is over " + oracle->group().to_string());
  }
  GrowthTable table;
  std::uint64_t running = 0, unknown = 0;
  try {
    expand_spheres(group, max_radius, budget, [&](std::size_t, const std::vector<Element>& sphere) {
      if (oracle) {
        std::size_t u = 0;
        running += filter_members(*oracle, sphere, budget.workers, u).size();
        unknown += u;
      } else {
        running += sphere.size();
      }
      table.counts.push_back(running);
      table.unknown.push_back(unknown);
    });
  } catch (const BudgetExceeded& e) {
    throw GrowthBudgetExceeded(e, std::move(table));
  }
  if (!oracle) {
    table.milnor_checked = true;
    table.milnor_violations = submultiplicativity_violations(table);
  }
  return table;
}

GrowthTable count_growth(const GroupDescriptor& group, const SubgroupOracle* oracle, std::size_t max_radius,
                         const Budget& budget) {
  const SubgroupOracle whole = SubgroupOracle::whole(group);
  const SubgroupOracle& o = oracle ? *oracle : whole;
  if (o.group() != group) throw DescriptorMismatch("count_growth: oracle is over " + o.group().to_string());
  GrowthTable table;
  std::uint64_t running = 0;
  for (auto s : counted_spheres(o, max_radius, budget)) {
    running = checked_add(running, s);
    table.counts.push_back(running);
  }
  table.unknown.assign(table.counts.size(), 0);
  if (!oracle) {
    table.milnor_checked = true;
    table.milnor_violations = submultiplicativity_violations(table);
  }
  return table;
}

DistortionResult distortion(const GroupDescriptor& group, const std::vector<Element>& generators,
                            const SubgroupOracle& oracle, std::size_t n, const Budget& budget,
                            const DistortionOptions& options) {
  std::vector<Element> steps;
  for (const auto& y : generators) {
    group.validate(y);
    steps.push_back(y);
    steps.push_back(invert(y));
  }
  Ball members = relative_ball(group, oracle, n, budget);
  DistortionResult result;
  result.unknown_count = members.unknown_count;
  result.witness = group.identity();

  std::unordered_map<Element, std::size_t, ElementHash> remaining;
  for (std::size_t i = 0; i < members.elements.size(); ++i) remaining.emplace(members.elements[i], i);
  std::vector<std::size_t> y_length(members.elements.size(), 0);
  remaining.erase(group.identity());

  std::size_t nodes = 0;
  auto first_missing = [&] {
    for (const auto& e : members.elements) {
      if (remaining.count(e)) return format_element(e);
    }
    return std::string("?");
  };
  std::function<void(const Element&, int, std::size_t, std::size_t)> dfs = [&](const Element& cur, int last,
                                                                                std::size_t depth, std::size_t target) {
    if (depth == target) {
      if (auto it = remaining.find(cur); it != remaining.end()) {
        y_length[it->second] = target;
        remaining.erase(it);
      }
      return;
    }
    for (std::size_t s = 0; s < steps.size() && !remaining.empty(); ++s) {
      if (last >= 0 && static_cast<int>(s) == (last ^ 1)) continue;
      if (++nodes > options.node_budget) {
        throw BudgetExceeded("distortion: search budget exhausted before finding |h|_Y for h = " + first_missing(), n);
      }
      dfs(multiply(cur, steps[s]), static_cast<int>(s), depth + 1, target);
    }
  };
  for (std::size_t d = 1; d <= options.depth_cap && !remaining.empty(); ++d) dfs(group.identity(), -1, 0, d);
  if (!remaining.empty()) {
    throw BudgetExceeded("distortion: |h|_Y exceeds depth cap " + std::to_string(options.depth_cap) +
                             " for h = " + first_missing(),
                         n);
  }
  for (std::size_t i = 0; i < members.elements.size(); ++i) {
    if (y_length[i] > result.value) {
      result.value = y_length[i];
      result.witness = members.elements[i];
    }
  }
  return result;
}

}  // namespace growthlab
