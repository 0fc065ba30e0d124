#pragma once

#include "multitile/frequency_tree.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace multitile {

using Complex = std::complex<double>;

/// Above this condition number the 1D solver switches to a dense LU solve.
inline constexpr double kIllConditioned = 1e8;

/// e^{-2 pi i t}, with t reduced mod 1 first so large arguments stay exact.
Complex unit_phase(double t);

/// Square Vandermonde system W_{st} = w_t^s, s = 0..n-1, prepared for
/// repeated solves with fixed nodes.
class VandermondeSystem {
 public:
  /// Throws DuplicateNodes when two nodes are closer than 1e-12.
  explicit VandermondeSystem(std::vector<Complex> nodes);

  std::vector<Complex> solve(std::span<const Complex> rhs) const;

  Eigen::MatrixXcd matrix() const;
  const std::vector<Complex>& nodes() const { return nodes_; }
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }
  double condition() const { return sigma_max_ / sigma_min_; }
  bool ill_conditioned() const { return condition() > kIllConditioned; }

 private:
  std::vector<Complex> nodes_;
  double sigma_min_ = 0.0;
  double sigma_max_ = 0.0;
  std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXcd>> fallback_;
};

struct VandermondeSolution {
  std::vector<Complex> values;
  double condition = 1.0;
  bool ill_conditioned = false;  // warning only; values are still returned
};

/// Solves sum_t w_t^s c_t = rhs_s. Björck–Pereyra recurrences, or dense LU
/// when the system is ill conditioned.
VandermondeSolution solve_vandermonde_1d(std::span<const Complex> nodes, std::span<const Complex> rhs);

/// Singular-value range of the block-diagonal matrix W^l formed by the
/// per-parent Vandermonde blocks of one tree level.
struct LevelBlocks {
  int level = 0;
  std::vector<double> block_condition;  // one per parent, in tree order
  double sigma_min = 0.0;
  double sigma_max = 0.0;

  double condition() const { return sigma_max / sigma_min; }
};

std::vector<LevelBlocks> level_blocks(const FrequencyTree& tree, std::span<const double> delta);

/// Dimension-by-dimension solver for V c = F with
/// V_{j,m} = exp(-2 pi i sum_l delta_l j_l m_l), j in K^d(M^d), m in M^d.
/// Only 1D Vandermonde systems are ever solved; the full V is never formed.
/// Immutable after construction, safe to share across threads.
class NestedSolver {
 public:
  NestedSolver(const FrequencyTree& tree, std::span<const double> delta);
  ~NestedSolver();
  NestedSolver(NestedSolver&&) noexcept;
  NestedSolver& operator=(NestedSolver&&) noexcept;

  /// Row order expected by solve(); equals shift_index_set(tree).
  const ShiftIndexSet& indices() const;

  /// Returns c in the order of tree.frequencies.vectors.
  std::vector<Complex> solve(std::span<const Complex> data) const;

 private:
  struct Plan;
  std::unique_ptr<const Plan> plan_;
};

/// One-shot form of NestedSolver::solve; throws DuplicateNodes when the
/// residues at some level collide, DimensionMismatch on size errors.
std::vector<Complex> reconstruct_point(const FrequencyTree& tree, std::span<const double> delta,
                                       std::span<const Complex> data);

}  // namespace multitile
