#pragma once

#include "multitile/lattice.hpp"

#include <cstddef>
#include <vector>

namespace multitile {

using RealPoint = std::vector<double>;

/// Tolerance for grouping real frequency coordinates into one tree node.
inline constexpr double kFrequencyTol = 1e-9;

/// k distinct vectors in R^d.
struct FrequencySet {
  std::vector<RealPoint> vectors;

  int dimension() const { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }
  std::size_t size() const { return vectors.size(); }
};

/// Throws InvalidInput on empty, ragged, or duplicate input.
FrequencySet make_frequency_set(std::vector<RealPoint> vectors);
FrequencySet frequency_set_from_offsets(const std::vector<IntVector>& offsets);

/// Lexicographic comparison with kFrequencyTol per coordinate.
bool approx_less(const RealPoint& a, const RealPoint& b);
bool approx_equal(const RealPoint& a, const RealPoint& b);

/// A node of M^{l-1} seen as the parent of level-l children.
struct ParentNode {
  RealPoint prefix;               // empty for the level-1 root
  std::vector<double> children;   // Z^l_i, ascending
  std::size_t q_begin = 0;        // Q_i = [q_begin, q_end)
  std::size_t q_end = 0;
};

struct TreeLevel {
  /// Ordered by child count, ties broken lexicographically by prefix.
  std::vector<ParentNode> parents;

  /// N_l = #M^l.
  std::size_t node_count() const;
};

/// Prefix tree of a frequency set: levels[l-1] holds the parents of level l.
struct FrequencyTree {
  FrequencySet frequencies;
  std::vector<TreeLevel> levels;

  int dimension() const { return static_cast<int>(levels.size()); }
  /// #M^l for l in 1..d.
  std::size_t count(int l) const { return levels[static_cast<std::size_t>(l - 1)].node_count(); }
};

FrequencyTree build_tree(const FrequencySet& fs);

/// K^d(M^d): one non-negative multi-index per frequency vector, emitted in
/// the order of the recursion (parent, then inner index, then Q window).
using ShiftIndexSet = std::vector<IntVector>;

ShiftIndexSet shift_index_set(const FrequencyTree& tree);

}  // namespace multitile
