#pragma once

#include "multitile/lattice.hpp"

#include <cstddef>
#include <vector>

namespace multitile {

/// Product of half-open intervals [lower_i, upper_i) inside [0,1)^d, in
/// lattice coordinates.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  double volume() const;
  bool contains(const Eigen::VectorXd& u) const;
};

/// A box of the fundamental domain together with the k integer offsets z_r
/// such that M(u + z_r) lies in the multi-tile for every u in the box.
struct Cell {
  Box box;
  std::vector<IntVector> offsets;
};

struct GridPoint {
  std::size_t cell;
  Eigen::VectorXd u;
};

/// A point of the multi-tile expressed through the region bijections.
struct RegionPoint {
  std::size_t cell;
  int region;  // 0-based index into the cell's sorted offsets
  Eigen::VectorXd u;
};

/// Checks the k-tile invariants on raw cells and returns the common k.
/// Throws NotATiling, InconsistentK, DuplicateOffset or InvalidInput.
int validate(const Lattice& lattice, const std::vector<Cell>& cells);

/// A bounded k-tile given as finitely many boxes of the fundamental domain.
/// Offsets are stored sorted lexicographically; that order defines the
/// regions Omega_1..Omega_k.
class MultiTileDomain {
 public:
  MultiTileDomain(Lattice lattice, std::vector<Cell> cells);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<Cell>& cells() const { return cells_; }
  int k() const { return k_; }
  int dimension() const { return lattice_.dimension(); }
  double measure() const { return k_ * lattice_.volume(); }

  /// Index of the cell owning u. Throws PointOnGap.
  std::size_t locate(const Eigen::VectorXd& u) const;

  /// lambda_1(u)..lambda_k(u) as lattice points M z_r.
  std::vector<Eigen::VectorXd> offsets_at(const Eigen::VectorXd& u) const;

  /// omega_r(u) = M u + lambda_r(u), region 0-based.
  Eigen::VectorXd omega(int region, const Eigen::VectorXd& u) const;
  /// Inverse of omega; throws OutOfDomain when y is not in the tile.
  RegionPoint omega_inverse(const Eigen::VectorXd& y) const;

  /// Per-cell tensor midpoint grids with n points per axis.
  std::vector<GridPoint> sample_grid(int n) const;

 private:
  Lattice lattice_;
  std::vector<Cell> cells_;
  int k_ = 0;
};

}  // namespace multitile
