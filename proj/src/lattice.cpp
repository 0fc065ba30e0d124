#include "multitile/lattice.hpp"

#include "multitile/error.hpp"

#include <cmath>

namespace multitile {

Eigen::VectorXd to_eigen(const IntVector& z) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) out[static_cast<Eigen::Index>(i)] = static_cast<double>(z[i]);
  return out;
}

Lattice make_lattice(const Eigen::MatrixXd& basis) {
  if (basis.rows() == 0 || basis.rows() != basis.cols())
    throw Error(ErrorCode::InvalidInput, "lattice basis must be a non-empty square matrix");
  if (!basis.allFinite()) throw Error(ErrorCode::InvalidInput, "lattice basis has non-finite entries");

  const double det = basis.determinant();
  const double scale = std::pow(std::max(1.0, basis.cwiseAbs().maxCoeff()), static_cast<double>(basis.rows()));
  if (!(std::abs(det) >= 1e-12 * scale))
    throw Error(ErrorCode::SingularBasis, "|det M| = " + std::to_string(std::abs(det)));

  Lattice lat;
  lat.basis_ = basis;
  lat.inverse_ = basis.fullPivLu().inverse();
  lat.dual_ = lat.inverse_.transpose();
  lat.volume_ = std::abs(det);
  return lat;
}

Eigen::VectorXd Lattice::point(const IntVector& z) const {
  if (static_cast<Eigen::Index>(z.size()) != basis_.cols())
    throw Error(ErrorCode::DimensionMismatch, "integer vector length does not match lattice dimension");
  return basis_ * to_eigen(z);
}

Reduced reduce(const Lattice& lat, const Eigen::VectorXd& x) {
  if (x.size() != lat.dimension()) throw Error(ErrorCode::DimensionMismatch, "point dimension");
  Eigen::VectorXd c = lat.coordinates(x);
  Reduced out{Eigen::VectorXd(c.size()), IntVector(static_cast<std::size_t>(c.size()))};
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double fl = std::floor(c[i]);
    double u = c[i] - fl;
    if (u >= 1.0 - kBoundarySnap) {
      u = 0.0;
      fl += 1.0;
    } else if (u < 0.0) {
      u = 0.0;
    }
    out.u[i] = u;
    out.z[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(fl);
  }
  return out;
}

Eigen::VectorXd dual_point(const Lattice& lat, const IntVector& z) {
  if (static_cast<int>(z.size()) != lat.dimension())
    throw Error(ErrorCode::DimensionMismatch, "integer vector length does not match lattice dimension");
  return lat.dual_basis() * to_eigen(z);
}

}  // namespace multitile
