#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "growthlab/group.hpp"

namespace growthlab {

// Folded core graph of a finitely generated subgroup of a free group.
//
// Vertices are numbered 0..V-1 in breadth-first order from the basepoint
// (vertex 0), visiting labels in shortlex letter order. Edges carry positive
// generator labels; traversing an edge backwards reads the inverse letter.
// Folded means every (vertex, letter) pair has at most one outgoing and at
// most one incoming edge, so a reduced word traces at most one path.
class StallingsGraph {
 public:
  struct Edge {
    int from;
    int letter;
    int to;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  /// Folds the bouquet of generator loops to a fixed point, merging the
  /// lower-numbered vertex pair first, then trims hanging trees.
  static StallingsGraph build(std::span<const Word> generators, int rank);

  int rank() const { return rank_; }
  std::size_t vertex_count() const { return out_.size(); }
  std::size_t edge_count() const;
  std::vector<Edge> edges() const;
  static constexpr int basepoint() { return 0; }

  /// Vertex reached by reading `code` at `v`, or -1 when there is no such edge.
  int follow(int v, LetterCode code) const {
    const int l = letter_of(code);
    return code > 0 ? out_[v][l] : in_[v][l];
  }

  /// End vertex of the path labelled by `w` from the basepoint, or -1.
  int trace(const Word& w) const;
  bool accepts(const Word& w) const { return trace(w) == basepoint(); }

  /// Checks foldedness and connectivity from the basepoint.
  bool is_folded() const;
  bool is_connected() const;

  /// Number of reduced closed paths at the basepoint of each length 0..max_length,
  /// which equals the number of subgroup elements of each word length.
  std::vector<std::uint64_t> sphere_counts(std::size_t max_length) const;

 private:
  int rank_ = 0;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

}  // namespace growthlab
