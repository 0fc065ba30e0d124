#pragma once

#include "multitile/domain.hpp"
#include "multitile/io.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace fixtures {

using multitile::Cell;
using multitile::IntVector;
using multitile::MultiTileDomain;

inline MultiTileDomain make(const Eigen::MatrixXd& basis, std::vector<Cell> cells) {
  return MultiTileDomain(multitile::make_lattice(basis), std::move(cells));
}

inline Cell unit_cell(int d, std::vector<IntVector> offsets) {
  return Cell{{std::vector<double>(static_cast<std::size_t>(d), 0.0), std::vector<double>(static_cast<std::size_t>(d), 1.0)},
              std::move(offsets)};
}

inline Eigen::MatrixXd identity(int d) { return Eigen::MatrixXd::Identity(d, d); }

/// Omega = [0,2), Lambda = Z.
inline MultiTileDomain interval_two() { return make(identity(1), {unit_cell(1, {{0}, {1}})}); }

/// Omega = [0,1) u [2,3), Lambda = Z.
inline MultiTileDomain split_two() { return make(identity(1), {unit_cell(1, {{0}, {2}})}); }

/// Omega = [0,1) u [1,1.5) u [2.5,3): two cells with different offsets.
inline MultiTileDomain two_cell() {
  return make(identity(1), {Cell{{{0.0}, {0.5}}, {{0}, {1}}}, Cell{{{0.5}, {1.0}}, {{0}, {2}}}});
}

/// Omega = [0,1), k = 1.
inline MultiTileDomain unit_interval() { return make(identity(1), {unit_cell(1, {{0}})}); }

/// Unit squares at (0,0), (1,0), (1,1): strongly but not perfectly admissible.
inline MultiTileDomain corner_three() { return make(identity(2), {unit_cell(2, {{0, 0}, {1, 0}, {1, 1}})}); }

/// 2x2 block of unit squares: perfectly admissible 4-tile.
inline MultiTileDomain square_four() { return make(identity(2), {unit_cell(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}})}); }

/// M = diag(2,1) with two translates along the first generator.
inline MultiTileDomain stretched_pair() {
  Eigen::MatrixXd m(2, 2);
  m << 2, 0, 0, 1;
  return make(m, {unit_cell(2, {{0, 0}, {1, 0}})});
}

/// Sheared lattice, two cells with different offset sets but equal shift indices.
inline MultiTileDomain sheared_two_cell() {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.5, 0, 1;
  return make(m, {Cell{{{0.0, 0.0}, {0.5, 1.0}}, {{0, 0}, {1, 0}}}, Cell{{{0.5, 0.0}, {1.0, 1.0}}, {{0, 0}, {2, 0}}}});
}

/// The ten frequency vectors of the four-dimensional worked example.
inline std::vector<IntVector> example_ten() {
  return {{1, 1, 1, 1}, {2, 1, 1, 1}, {3, 1, 1, 1}, {4, 1, 1, 1}, {2, 2, 1, 1},
          {3, 2, 1, 1}, {4, 2, 1, 1}, {2, 2, 1, 2}, {3, 2, 2, 1}, {4, 3, 1, 1}};
}

inline MultiTileDomain example_ten_domain() { return make(identity(4), {unit_cell(4, example_ten())}); }

/// k distinct integer vectors with entries in [lo, hi].
inline std::vector<IntVector> random_offsets(std::mt19937_64& rng, int d, int k, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::set<IntVector> seen;
  while (static_cast<int>(seen.size()) < k) {
    IntVector z;
    for (int i = 0; i < d; ++i) z.push_back(dist(rng));
    seen.insert(z);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace fixtures
