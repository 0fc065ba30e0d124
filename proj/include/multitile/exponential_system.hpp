#pragma once

#include "multitile/admissibility.hpp"
#include "multitile/domain.hpp"
#include "multitile/frequency_tree.hpp"
#include "multitile/vandermonde.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace multitile {

/// Lattice shifts a_s = M^{-T}(delta j_s) + eta for each cell, j_s in K^d of
/// that cell. With these, lambda_r . a_s = z_r . (delta j_s) mod 1.
struct ShiftSet {
  std::vector<double> delta;              // diagonal entries
  IntVector eta;                          // dual-lattice integer coordinates
  std::vector<ShiftIndexSet> indices;     // per cell
  bool uniform = true;                    // every cell carries the same index list

  /// a_s for shift index s of the given cell.
  Eigen::VectorXd shift(const Lattice& lattice, std::size_t cell, std::size_t s) const;
};

/// Builds per-cell index sets. When all cells share one index set the lists
/// are reordered to match cell 0, so row s means the same a_s everywhere.
ShiftSet make_shifts(const MultiTileDomain& domain, std::vector<double> delta, IntVector eta = {});

/// V(x) on one cell with its singular values and inverse.
struct PointSystem {
  std::size_t cell = 0;
  Eigen::MatrixXcd v;
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXcd inverse;         // empty when numerically singular

  double sigma_min() const { return singular_values[singular_values.size() - 1]; }
  double sigma_max() const { return singular_values[0]; }
  double condition() const { return sigma_max() / sigma_min(); }
};

/// V_sr = exp(-2 pi i lambda_r . a_s) for the cell owning u.
PointSystem assemble_V(const MultiTileDomain& domain, const ShiftSet& shifts, const Eigen::VectorXd& u);
PointSystem assemble_cell(const MultiTileDomain& domain, const ShiftSet& shifts, std::size_t cell);

/// A domain with a shift set and all per-cell systems precomputed.
class ExponentialSystem {
 public:
  ExponentialSystem(const MultiTileDomain& domain, ShiftSet shifts);

  const MultiTileDomain& domain() const { return domain_; }
  const ShiftSet& shifts() const { return shifts_; }
  const PointSystem& cell_system(std::size_t cell) const { return systems_[cell]; }
  const FrequencyTree& cell_tree(std::size_t cell) const { return trees_[cell]; }
  std::size_t cell_count() const { return systems_.size(); }

  /// Frequency lambda* + a_s with lambda* = M^{-T} dual_index.
  Eigen::VectorXd frequency(std::size_t cell, const IntVector& dual_index, std::size_t s) const;

  /// Throws SingularCell when the cell's V is numerically singular.
  const Eigen::MatrixXcd& inverse(std::size_t cell) const;

 private:
  MultiTileDomain domain_;
  ShiftSet shifts_;
  std::vector<FrequencyTree> trees_;
  std::vector<PointSystem> systems_;
};

/// e^{2 pi i l . y}
Complex exponential(const Eigen::VectorXd& l, const Eigen::VectorXd& y);

struct OrthogonalityReport {
  bool orthogonal = false;
  double max_deviation = 0.0;  // max over cells of |V^*V - kI|_max
};

/// Throws NonUniformShifts.
OrthogonalityReport is_orthogonal(const ExponentialSystem& system);

struct CellBounds {
  std::size_t cell = 0;
  double sigma_min_sq = 0.0;
  double sigma_max_sq = 0.0;
  double condition = 0.0;
  double factored_lower = 0.0;  // prod_l sigma_min(W^l)^2
  double factored_upper = 0.0;  // prod_l sigma_max(W^l)^2
  std::vector<LevelBlocks> levels;
};

struct RieszBounds {
  double alpha = 0.0;  // min over cells of sigma_min(V)^2
  double beta = 0.0;   // max over cells of sigma_max(V)^2
  double frame_lower = 0.0;  // A = vol(Lambda) alpha
  double frame_upper = 0.0;  // B = vol(Lambda) beta
  std::vector<CellBounds> cells;
};

/// Throws SingularCell when some sigma_min < 1e-12.
RieszBounds riesz_bounds(const ExponentialSystem& system);

/// g_l(y) for l = M^{-T} dual_index + a_s. Throws OutOfDomain or SingularCell.
Complex dual_eval(const ExponentialSystem& system, const IntVector& dual_index, std::size_t s, const Eigen::VectorXd& y);

/// Closed-form integral of e_{l - l'} over the tile.
Complex gram(const MultiTileDomain& domain, const Eigen::VectorXd& l, const Eigen::VectorXd& l_prime);

/// Integral of e_theta over the translated cell piece M(box + z), in closed form.
Complex piece_integral(const Lattice& lattice, const Box& box, const IntVector& z, const Eigen::VectorXd& theta);

struct BiorthogonalityReport {
  double max_residual = 0.0;
  std::size_t pairs = 0;
};

/// max |<e_l, g_l'>/|Omega| - [l = l']| over l, l' in L with |lambda*|_inf <= radius,
/// evaluated in closed form piece by piece. Throws NonUniformShifts.
BiorthogonalityReport verify_biorthogonality(const ExponentialSystem& system, int radius);

/// All integer vectors with |z|_inf <= radius in dimension d, lexicographic.
std::vector<IntVector> integer_box(int d, int radius);

}  // namespace multitile
