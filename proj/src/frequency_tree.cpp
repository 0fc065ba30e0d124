#include "multitile/frequency_tree.hpp"

#include "multitile/error.hpp"

#include <algorithm>
#include <cmath>

namespace multitile {

bool approx_less(const RealPoint& a, const RealPoint& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(a[i] - b[i]) > kFrequencyTol) return a[i] < b[i];
  }
  return a.size() < b.size();
}

bool approx_equal(const RealPoint& a, const RealPoint& b) {
  return !approx_less(a, b) && !approx_less(b, a);
}

FrequencySet make_frequency_set(std::vector<RealPoint> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::InvalidInput, "frequency set is empty");
  const std::size_t d = vectors.front().size();
  if (d == 0) throw Error(ErrorCode::InvalidInput, "frequency vectors have dimension 0");
  for (const auto& v : vectors)
    if (v.size() != d) throw Error(ErrorCode::InvalidInput, "frequency vectors have mixed dimension");
  auto sorted = vectors;
  std::sort(sorted.begin(), sorted.end(), approx_less);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (approx_equal(sorted[i - 1], sorted[i])) throw Error(ErrorCode::InvalidInput, "frequency vectors not distinct");
  return FrequencySet{std::move(vectors)};
}

FrequencySet frequency_set_from_offsets(const std::vector<IntVector>& offsets) {
  std::vector<RealPoint> vectors;
  vectors.reserve(offsets.size());
  for (const auto& z : offsets) vectors.emplace_back(z.begin(), z.end());
  return make_frequency_set(std::move(vectors));
}

std::size_t TreeLevel::node_count() const {
  std::size_t n = 0;
  for (const auto& p : parents) n += p.children.size();
  return n;
}

namespace {

RealPoint prefix_of(const RealPoint& v, std::size_t len) { return RealPoint(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(len)); }

// Level-l parents (l >= 2): distinct (l-1)-prefixes with their last-coordinate children.
std::vector<ParentNode> group_level(const std::vector<RealPoint>& vectors, std::size_t l) {
  std::vector<RealPoint> nodes;
  nodes.reserve(vectors.size());
  for (const auto& v : vectors) nodes.push_back(prefix_of(v, l));
  std::sort(nodes.begin(), nodes.end(), approx_less);
  nodes.erase(std::unique(nodes.begin(), nodes.end(), approx_equal), nodes.end());

  std::vector<ParentNode> parents;
  std::size_t i = 0;
  while (i < nodes.size()) {
    ParentNode p;
    p.prefix = prefix_of(nodes[i], l - 1);
    while (i < nodes.size() && approx_equal(prefix_of(nodes[i], l - 1), p.prefix)) {
      p.children.push_back(nodes[i][l - 1]);
      ++i;
    }
    parents.push_back(std::move(p));
  }
  std::stable_sort(parents.begin(), parents.end(), [](const ParentNode& a, const ParentNode& b) {
    return a.children.size() < b.children.size();
  });
  std::size_t prev = 0;
  for (auto& p : parents) {
    p.q_begin = prev;
    p.q_end = p.children.size();
    prev = p.children.size();
  }
  return parents;
}

}  // namespace

FrequencyTree build_tree(const FrequencySet& fs) {
  if (fs.size() == 0) throw Error(ErrorCode::InvalidInput, "frequency set is empty");
  const auto d = static_cast<std::size_t>(fs.dimension());
  FrequencyTree tree;
  tree.frequencies = fs;
  tree.levels.resize(d);

  ParentNode root;
  for (const auto& v : fs.vectors) root.children.push_back(v[0]);
  std::sort(root.children.begin(), root.children.end());
  root.children.erase(std::unique(root.children.begin(), root.children.end(),
                                  [](double a, double b) { return std::abs(a - b) <= kFrequencyTol; }),
                      root.children.end());
  root.q_begin = 0;
  root.q_end = root.children.size();
  tree.levels[0].parents.push_back(std::move(root));

  for (std::size_t l = 2; l <= d; ++l) tree.levels[l - 1].parents = group_level(fs.vectors, l);
  return tree;
}

ShiftIndexSet shift_index_set(const FrequencyTree& tree) {
  const int d = tree.dimension();
  ShiftIndexSet out;
  if (d == 1) {
    const std::size_t n = tree.count(1);
    for (std::size_t i = 0; i < n; ++i) out.push_back({static_cast<std::int64_t>(i)});
    return out;
  }
  const auto& parents = tree.levels.back().parents;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (parents[i].q_begin == parents[i].q_end) continue;
    std::vector<RealPoint> suffix;
    for (std::size_t j = i; j < parents.size(); ++j) suffix.push_back(parents[j].prefix);
    const ShiftIndexSet inner = shift_index_set(build_tree(FrequencySet{std::move(suffix)}));
    for (const auto& a : inner) {
      for (std::size_t q = parents[i].q_begin; q < parents[i].q_end; ++q) {
        IntVector j = a;
        j.push_back(static_cast<std::int64_t>(q));
        out.push_back(std::move(j));
      }
    }
  }
  return out;
}

}  // namespace multitile
