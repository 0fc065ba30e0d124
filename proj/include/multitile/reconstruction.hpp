#pragma once

#include "multitile/exponential_system.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace multitile {

enum class Provenance { ExactPointwise, CoefficientTruncated };

const char* to_string(Provenance p);

/// F_{j_s}(u), s in the order of the cell's shift index list.
struct SpectralSample {
  std::size_t cell = 0;
  Eigen::VectorXd u;
  std::vector<Complex> values;
};

struct SpectralData {
  std::vector<SpectralSample> samples;
  Provenance provenance = Provenance::ExactPointwise;
  int radius = -1;  // truncation radius in |lambda*|_inf, coefficient data only
};

/// Finite sum f(y) = sum_t c_t e_{l_t}(y).
struct ExponentialSum {
  std::vector<Eigen::VectorXd> frequencies;
  std::vector<Complex> coefficients;

  Complex operator()(const Eigen::VectorXd& y) const;
};

/// F = vol(Lambda) V(u) (f(omega_r(u)))_r per grid point.
SpectralData forward_data(const ExponentialSystem& system, const std::vector<GridPoint>& grid,
                          const std::vector<std::vector<Complex>>& point_values);

/// F_{j_s}(x) = (1/vol) sum_{|lambda*|_inf <= R} <f, e_{lambda*+a_s}> e_{lambda*+a_s}(x),
/// inner products from the closed-form Gram integrals.
SpectralData coefficient_data(const ExponentialSystem& system, const std::vector<GridPoint>& grid,
                              const ExponentialSum& f, int radius);

/// Dense partial-pivot solve of V y = F / vol. Throws SingularMatrix.
std::vector<Complex> reconstruct_direct(const Eigen::MatrixXcd& v, std::span<const Complex> data, double volume);

struct PointResult {
  std::size_t cell = 0;
  Eigen::VectorXd u;
  std::vector<Eigen::VectorXd> y;     // omega_r(u) per region
  std::vector<Complex> values;        // f(omega_r(u)) from the nested solver
  std::vector<double> residual;       // |nested - direct| per region, oracle mode only
};

struct CellDiagnostics {
  std::size_t cell = 0;
  double condition = 0.0;             // kappa(V) of the cell
  std::vector<LevelBlocks> levels;    // kappa of each 1D block
};

struct ReconstructionResult {
  std::vector<PointResult> points;
  std::vector<CellDiagnostics> cells;
  std::vector<std::size_t> skipped;   // sample indices that fell on a gap
  bool oracle = false;
  double max_residual = 0.0;          // max relative |nested - direct| / |direct|
};

/// Nested 1D-Vandermonde recovery at every sample; optionally cross-checked
/// against reconstruct_direct. Work is split across worker_count() threads.
ReconstructionResult reconstruct_grid(const ExponentialSystem& system, const SpectralData& data, bool oracle);

/// MULTITILE_THREADS, 0 or unset meaning hardware concurrency.
unsigned worker_count();

}  // namespace multitile
