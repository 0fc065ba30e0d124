#include "multitile/domain.hpp"

#include "multitile/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace multitile {

namespace {

constexpr double kVolumeTol = 1e-10;
constexpr double kOverlapTol = 1e-12;

double snap(double u) { return u >= 1.0 - kBoundarySnap ? 0.0 : u; }

}  // namespace

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

bool Box::contains(const Eigen::VectorXd& u) const {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const double x = snap(u[static_cast<Eigen::Index>(i)]);
    if (x < lower[i] - kBoundarySnap || x >= upper[i] - kBoundarySnap) return false;
  }
  return true;
}

int validate(const Lattice& lattice, const std::vector<Cell>& cells) {
  const auto d = static_cast<std::size_t>(lattice.dimension());
  if (cells.empty()) throw Error(ErrorCode::NotATiling, "domain has no cells");

  double total = 0.0;
  int k = -1;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    if (cell.box.lower.size() != d || cell.box.upper.size() != d)
      throw Error(ErrorCode::InvalidInput, "cell " + std::to_string(c) + " box dimension");
    for (std::size_t i = 0; i < d; ++i) {
      const double a = cell.box.lower[i], b = cell.box.upper[i];
      if (!(a >= 0.0 && a < b && b <= 1.0))
        throw Error(ErrorCode::NotATiling, "cell " + std::to_string(c) + " box is not inside [0,1)^d");
    }
    if (cell.offsets.empty()) throw Error(ErrorCode::InvalidInput, "cell " + std::to_string(c) + " has no offsets");
    for (const auto& z : cell.offsets)
      if (z.size() != d) throw Error(ErrorCode::InvalidInput, "cell " + std::to_string(c) + " offset dimension");

    auto sorted = cell.offsets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::DuplicateOffset, "cell " + std::to_string(c));

    const int kc = static_cast<int>(cell.offsets.size());
    if (k < 0) k = kc;
    else if (k != kc)
      throw Error(ErrorCode::InconsistentK, "cell " + std::to_string(c) + " has " + std::to_string(kc) +
                                                " offsets, expected " + std::to_string(k));
    total += cell.box.volume();
  }

  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      bool overlap = true;
      for (std::size_t i = 0; i < d && overlap; ++i) {
        const double lo = std::max(cells[a].box.lower[i], cells[b].box.lower[i]);
        const double hi = std::min(cells[a].box.upper[i], cells[b].box.upper[i]);
        overlap = hi - lo > kOverlapTol;
      }
      if (overlap)
        throw Error(ErrorCode::NotATiling, "cells " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
    }
  }
  if (std::abs(total - 1.0) > kVolumeTol)
    throw Error(ErrorCode::NotATiling, "cell boxes cover volume " + std::to_string(total) + " instead of 1");
  return k;
}

MultiTileDomain::MultiTileDomain(Lattice lattice, std::vector<Cell> cells)
    : lattice_(std::move(lattice)), cells_(std::move(cells)) {
  k_ = validate(lattice_, cells_);
  for (auto& cell : cells_) std::sort(cell.offsets.begin(), cell.offsets.end());
}

std::size_t MultiTileDomain::locate(const Eigen::VectorXd& u) const {
  if (u.size() != dimension()) throw Error(ErrorCode::DimensionMismatch, "point dimension");
  for (std::size_t c = 0; c < cells_.size(); ++c)
    if (cells_[c].box.contains(u)) return c;
  throw Error(ErrorCode::PointOnGap, "point is not owned by any cell");
}

std::vector<Eigen::VectorXd> MultiTileDomain::offsets_at(const Eigen::VectorXd& u) const {
  const Cell& cell = cells_[locate(u)];
  std::vector<Eigen::VectorXd> out;
  out.reserve(cell.offsets.size());
  for (const auto& z : cell.offsets) out.push_back(lattice_.point(z));
  return out;
}

Eigen::VectorXd MultiTileDomain::omega(int region, const Eigen::VectorXd& u) const {
  if (region < 0 || region >= k_) throw Error(ErrorCode::InvalidInput, "region index out of range");
  const Cell& cell = cells_[locate(u)];
  return lattice_.basis() * (u + to_eigen(cell.offsets[static_cast<std::size_t>(region)]));
}

RegionPoint MultiTileDomain::omega_inverse(const Eigen::VectorXd& y) const {
  if (y.size() != dimension()) throw Error(ErrorCode::DimensionMismatch, "point dimension");
  const Reduced red = reduce(lattice_, y);
  std::size_t c = 0;
  try {
    c = locate(red.u);
  } catch (const Error&) {
    throw Error(ErrorCode::OutOfDomain, "point lies on a gap between cells");
  }
  const auto& offsets = cells_[c].offsets;
  const auto it = std::find(offsets.begin(), offsets.end(), red.z);
  if (it == offsets.end()) throw Error(ErrorCode::OutOfDomain, "point is not in any translated cell");
  return {c, static_cast<int>(it - offsets.begin()), red.u};
}

std::vector<GridPoint> MultiTileDomain::sample_grid(int n) const {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "grid size must be >= 1");
  const int d = dimension();
  std::vector<GridPoint> out;
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const Box& box = cells_[c].box;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Eigen::VectorXd u(d);
      for (int i = 0; i < d; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        u[i] = box.lower[ii] + (idx[ii] + 0.5) * (box.upper[ii] - box.lower[ii]) / n;
      }
      out.push_back({c, std::move(u)});
      // last axis varies fastest
      int axis = d - 1;
      while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == n) idx[static_cast<std::size_t>(axis--)] = 0;
      if (axis < 0) break;
    }
  }
  return out;
}

}  // namespace multitile
