#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace multitile {

using IntVector = std::vector<std::int64_t>;

/// Tolerance used to snap fundamental-domain coordinates near 1 back to 0.
inline constexpr double kBoundarySnap = 1e-12;

/// A full-rank lattice M Z^d. Columns of the basis are the generators.
/// Immutable after construction.
class Lattice {
 public:
  const Eigen::MatrixXd& basis() const { return basis_; }
  /// M^{-T}; its columns generate the dual lattice.
  const Eigen::MatrixXd& dual_basis() const { return dual_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  double volume() const { return volume_; }
  int dimension() const { return static_cast<int>(basis_.rows()); }

  /// M z for integer coordinates z.
  Eigen::VectorXd point(const IntVector& z) const;
  /// M^{-1} x.
  Eigen::VectorXd coordinates(const Eigen::VectorXd& x) const { return inverse_ * x; }

 private:
  friend Lattice make_lattice(const Eigen::MatrixXd& basis);
  Lattice() = default;

  Eigen::MatrixXd basis_;
  Eigen::MatrixXd dual_;
  Eigen::MatrixXd inverse_;
  double volume_ = 0.0;
};

/// Throws Error(SingularBasis) when |det M| is below 1e-12 relative to the
/// basis scale, Error(InvalidInput) for non-square or non-finite input.
Lattice make_lattice(const Eigen::MatrixXd& basis);

struct Reduced {
  Eigen::VectorXd u;  // in [0,1)^d
  IntVector z;
};

/// Splits x = M (u + z) with u in [0,1)^d.
Reduced reduce(const Lattice& lat, const Eigen::VectorXd& x);

/// M^{-T} z.
Eigen::VectorXd dual_point(const Lattice& lat, const IntVector& z);

Eigen::VectorXd to_eigen(const IntVector& z);

}  // namespace multitile
