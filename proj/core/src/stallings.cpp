#include "growthlab/stallings.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // The lower id survives, so the basepoint is never renamed.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace

StallingsGraph StallingsGraph::build(std::span<const Word> generators, int rank) {
  if (rank < 1 || rank > kMaxRank) throw MalformedInput("stallings: rank out of range");
  using Edge = StallingsGraph::Edge;
  std::vector<Edge> edges;
  int vertices = 1;
  for (const Word& w : generators) {
    for (std::size_t i = 0; i < w.length(); ++i) {
      if (letter_of(w[i]) >= rank) throw DescriptorMismatch("stallings: generator letter exceeds rank");
    }
    int cur = 0;
    for (std::size_t i = 0; i < w.length(); ++i) {
      const int next = (i + 1 == w.length()) ? 0 : vertices++;
      const int l = letter_of(w[i]);
      if (w[i] > 0) {
        edges.push_back({cur, l, next});
      } else {
        edges.push_back({next, l, cur});
      }
      cur = next;
    }
  }

  UnionFind uf(static_cast<std::size_t>(vertices));
  auto edge_less = [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.letter, a.to) < std::tie(b.from, b.letter, b.to);
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& e : edges) {
      e.from = uf.find(e.from);
      e.to = uf.find(e.to);
    }
    std::sort(edges.begin(), edges.end(), edge_less);
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::map<std::pair<int, int>, int> out_seen;
    std::map<std::pair<int, int>, int> in_seen;
    for (const auto& e : edges) {
      auto [it_out, fresh_out] = out_seen.emplace(std::pair{uf.find(e.from), e.letter}, e.to);
      if (!fresh_out) changed |= uf.unite(it_out->second, e.to);
      auto [it_in, fresh_in] = in_seen.emplace(std::pair{uf.find(e.to), e.letter}, e.from);
      if (!fresh_in) changed |= uf.unite(it_in->second, e.from);
    }
  }

  // Trim hanging trees: a non-basepoint vertex of degree one never lies on a
  // reduced closed path at the basepoint.
  for (bool trimmed = true; trimmed;) {
    trimmed = false;
    std::vector<int> degree(static_cast<std::size_t>(vertices), 0);
    for (const auto& e : edges) {
      ++degree[e.from];
      ++degree[e.to];
    }
    std::vector<Edge> kept;
    kept.reserve(edges.size());
    for (const auto& e : edges) {
      const bool hanging = (e.from != 0 && degree[e.from] == 1) || (e.to != 0 && degree[e.to] == 1);
      if (hanging) {
        trimmed = true;
      } else {
        kept.push_back(e);
      }
    }
    edges.swap(kept);
  }

  // Renumber breadth-first from the basepoint.
  std::map<std::pair<int, int>, int> out_map;
  std::map<std::pair<int, int>, int> in_map;
  for (const auto& e : edges) {
    out_map[{e.from, e.letter}] = e.to;
    in_map[{e.to, e.letter}] = e.from;
  }
  std::map<int, int> renumber{{0, 0}};
  std::deque<int> queue{0};
  std::vector<int> order;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (int l = 0; l < rank; ++l) {
      for (const auto* m : {&out_map, &in_map}) {
        auto it = m->find({v, l});
        if (it != m->end() && renumber.emplace(it->second, static_cast<int>(renumber.size())).second) {
          queue.push_back(it->second);
        }
      }
    }
  }

  StallingsGraph g;
  g.rank_ = rank;
  g.out_.assign(order.size(), std::vector<int>(static_cast<std::size_t>(rank), -1));
  g.in_.assign(order.size(), std::vector<int>(static_cast<std::size_t>(rank), -1));
  for (const auto& e : edges) {
    const int a = renumber.at(e.from);
    const int b = renumber.at(e.to);
    g.out_[a][e.letter] = b;
    g.in_[b][e.letter] = a;
  }
  return g;
}

std::size_t StallingsGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& row : out_) n += static_cast<std::size_t>(std::count_if(row.begin(), row.end(), [](int t) { return t >= 0; }));
  return n;
}

std::vector<StallingsGraph::Edge> StallingsGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t v = 0; v < out_.size(); ++v) {
    for (int l = 0; l < rank_; ++l) {
      if (out_[v][l] >= 0) out.push_back({static_cast<int>(v), l, out_[v][l]});
    }
  }
  return out;
}

int StallingsGraph::trace(const Word& w) const {
  int v = basepoint();
  for (std::size_t i = 0; i < w.length() && v >= 0; ++i) {
    if (letter_of(w[i]) >= rank_) return -1;
    v = follow(v, w[i]);
  }
  return v;
}

bool StallingsGraph::is_folded() const {
  // Adjacency arrays hold one target per (vertex, letter, direction); check
  // that they describe the same edge set from both sides.
  for (std::size_t v = 0; v < out_.size(); ++v) {
    for (int l = 0; l < rank_; ++l) {
      const int t = out_[v][l];
      if (t >= 0 && in_[t][l] != static_cast<int>(v)) return false;
      const int s = in_[v][l];
      if (s >= 0 && out_[s][l] != static_cast<int>(v)) return false;
    }
  }
  return true;
}

bool StallingsGraph::is_connected() const {
  std::vector<bool> seen(out_.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int l = 0; l < rank_; ++l) {
      for (int t : {out_[v][l], in_[v][l]}) {
        if (t >= 0 && !seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::vector<std::uint64_t> StallingsGraph::sphere_counts(std::size_t max_length) const {
  // State: (vertex, index of the last letter read), index 2k meaning "none".
  const int codes = 2 * rank_;
  const std::size_t stride = static_cast<std::size_t>(codes) + 1;
  auto code_at = [](int idx) { return encode_letter(idx / 2, idx % 2 == 0 ? 1 : -1); };
  std::vector<std::uint64_t> cur(out_.size() * stride, 0), next(out_.size() * stride, 0);
  cur[0 * stride + static_cast<std::size_t>(codes)] = 1;
  std::vector<std::uint64_t> spheres{1};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t v = 0; v < out_.size(); ++v) {
      for (int last = 0; last <= codes; ++last) {
        const std::uint64_t c = cur[v * stride + static_cast<std::size_t>(last)];
        if (c == 0) continue;
        for (int idx = 0; idx < codes; ++idx) {
          if (last != codes && (idx ^ 1) == last) continue;  // would cancel
          const int t = follow(static_cast<int>(v), code_at(idx));
          if (t < 0) continue;
          auto& slot = next[static_cast<std::size_t>(t) * stride + static_cast<std::size_t>(idx)];
          if (__builtin_add_overflow(slot, c, &slot)) throw RangeError("stallings: sphere count overflows 64 bits");
        }
      }
    }
    std::uint64_t closed = 0;
    for (int idx = 0; idx < codes; ++idx) {
      if (__builtin_add_overflow(closed, next[static_cast<std::size_t>(idx)], &closed)) {
        throw RangeError("stallings: sphere count overflows 64 bits");
      }
    }
    spheres.push_back(closed);
    cur.swap(next);
  }
  return spheres;
}

}  // namespace growthlab
