#include "multitile/vandermonde.hpp"

#include "multitile/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace multitile {

Complex unit_phase(double t) {
  const double frac = t - std::round(t);
  return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

namespace {

constexpr double kNodeSeparation = 1e-12;

double scaled_phase_argument(const RealPoint& m, const IntVector& j, std::span<const double> delta) {
  double t = 0.0;
  for (std::size_t i = 0; i < j.size(); ++i) t += delta[i] * static_cast<double>(j[i]) * m[i];
  return t;
}

}  // namespace

VandermondeSystem::VandermondeSystem(std::vector<Complex> nodes) : nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "Vandermonde system with no nodes");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (std::abs(nodes_[a] - nodes_[b]) < kNodeSeparation)
        throw Error(ErrorCode::DuplicateNodes, "nodes " + std::to_string(a) + " and " + std::to_string(b) + " coincide");

  const Eigen::MatrixXcd w = matrix();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w);
  const auto& s = svd.singularValues();
  sigma_max_ = s[0];
  sigma_min_ = s[s.size() - 1];
  if (ill_conditioned()) fallback_ = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXcd>>(w);
}

Eigen::MatrixXcd VandermondeSystem::matrix() const {
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXcd w(n, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    Complex p = 1.0;
    for (Eigen::Index s = 0; s < n; ++s) {
      w(s, t) = p;
      p *= nodes_[static_cast<std::size_t>(t)];
    }
  }
  return w;
}

std::vector<Complex> VandermondeSystem::solve(std::span<const Complex> rhs) const {
  const std::size_t size = nodes_.size();
  if (rhs.size() != size) throw Error(ErrorCode::DimensionMismatch, "Vandermonde right-hand side length");

  if (fallback_) {
    Eigen::VectorXcd b(static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < size; ++i) b[static_cast<Eigen::Index>(i)] = rhs[i];
    const Eigen::VectorXcd x = fallback_->solve(b);
    return {x.data(), x.data() + x.size()};
  }

  // Björck–Pereyra for the dual system W c = b (Golub & Van Loan 4.6.2).
  std::vector<Complex> b(rhs.begin(), rhs.end());
  const std::size_t n = size - 1;
  const auto& x = nodes_;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = n; i > k; --i) b[i] -= x[k] * b[i - 1];
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t i = kk + 1; i <= n; ++i) b[i] /= (x[i] - x[i - kk - 1]);
    for (std::size_t i = kk; i < n; ++i) b[i] -= b[i + 1];
  }
  return b;
}

VandermondeSolution solve_vandermonde_1d(std::span<const Complex> nodes, std::span<const Complex> rhs) {
  VandermondeSystem system(std::vector<Complex>(nodes.begin(), nodes.end()));
  return {system.solve(rhs), system.condition(), system.ill_conditioned()};
}

std::vector<LevelBlocks> level_blocks(const FrequencyTree& tree, std::span<const double> delta) {
  if (delta.size() < static_cast<std::size_t>(tree.dimension()))
    throw Error(ErrorCode::DimensionMismatch, "delta shorter than tree dimension");
  std::vector<LevelBlocks> out;
  for (int l = 1; l <= tree.dimension(); ++l) {
    LevelBlocks lb;
    lb.level = l;
    lb.sigma_min = std::numeric_limits<double>::infinity();
    for (const auto& parent : tree.levels[static_cast<std::size_t>(l - 1)].parents) {
      std::vector<Complex> nodes;
      for (double z : parent.children) nodes.push_back(unit_phase(delta[static_cast<std::size_t>(l - 1)] * z));
      const VandermondeSystem block(std::move(nodes));
      lb.block_condition.push_back(block.condition());
      lb.sigma_min = std::min(lb.sigma_min, block.sigma_min());
      lb.sigma_max = std::max(lb.sigma_max, block.sigma_max());
    }
    out.push_back(std::move(lb));
  }
  return out;
}

struct NestedSolver::Plan {
  struct Block {
    std::vector<std::size_t> out;        // output position of each child
    std::vector<double> child_args;      // delta_l * z per child
    std::optional<VandermondeSystem> system;
    std::size_t q_begin = 0;
    std::size_t q_end = 0;
    std::unique_ptr<const Plan> sub;     // suffix of parents starting here
    std::vector<std::vector<std::size_t>> rows;  // [j_l - q_begin][sub row] -> data row
    Eigen::MatrixXcd correction;         // (sub rows) x (earlier parents)
  };

  std::size_t size = 0;
  ShiftIndexSet indices;
  std::optional<VandermondeSystem> base;  // dimension 1
  std::vector<Block> blocks;              // dimension >= 2

  Plan(const std::vector<RealPoint>& vectors, std::span<const double> delta);
  std::vector<Complex> solve(std::span<const Complex> data) const;
};

NestedSolver::Plan::Plan(const std::vector<RealPoint>& vectors, std::span<const double> delta) : size(vectors.size()) {
  const std::size_t d = vectors.front().size();
  if (delta.size() < d) throw Error(ErrorCode::DimensionMismatch, "delta shorter than frequency dimension");

  if (d == 1) {
    std::vector<Complex> nodes;
    for (std::size_t t = 0; t < size; ++t) {
      nodes.push_back(unit_phase(delta[0] * vectors[t][0]));
      indices.push_back({static_cast<std::int64_t>(t)});
    }
    base.emplace(std::move(nodes));
    return;
  }

  const FrequencyTree tree = build_tree(FrequencySet{vectors});
  const auto& parents = tree.levels.back().parents;
  const double delta_l = delta[d - 1];
  blocks.resize(parents.size());

  for (std::size_t i = 0; i < parents.size(); ++i) {
    Block& block = blocks[i];
    const ParentNode& parent = parents[i];
    block.q_begin = parent.q_begin;
    block.q_end = parent.q_end;

    std::vector<Complex> nodes;
    for (double z : parent.children) {
      RealPoint full = parent.prefix;
      full.push_back(z);
      std::size_t pos = 0;
      while (!approx_equal(vectors[pos], full)) ++pos;
      block.out.push_back(pos);
      block.child_args.push_back(delta_l * z);
      nodes.push_back(unit_phase(delta_l * z));
    }
    block.system.emplace(std::move(nodes));

    if (block.q_begin == block.q_end) continue;

    std::vector<RealPoint> suffix;
    for (std::size_t j = i; j < parents.size(); ++j) suffix.push_back(parents[j].prefix);
    block.sub = std::make_unique<const Plan>(suffix, delta);

    const auto& sub_rows = block.sub->indices;
    block.rows.assign(block.q_end - block.q_begin, std::vector<std::size_t>(sub_rows.size()));
    for (std::size_t a = 0; a < sub_rows.size(); ++a) {
      for (std::size_t q = block.q_begin; q < block.q_end; ++q) {
        IntVector j = sub_rows[a];
        j.push_back(static_cast<std::int64_t>(q));
        block.rows[q - block.q_begin][a] = indices.size();
        indices.push_back(std::move(j));
      }
    }
    block.correction.resize(static_cast<Eigen::Index>(sub_rows.size()), static_cast<Eigen::Index>(i));
    for (std::size_t a = 0; a < sub_rows.size(); ++a)
      for (std::size_t q = 0; q < i; ++q)
        block.correction(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(q)) =
            unit_phase(scaled_phase_argument(parents[q].prefix, sub_rows[a], delta));
  }
}

std::vector<Complex> NestedSolver::Plan::solve(std::span<const Complex> data) const {
  if (data.size() != size) throw Error(ErrorCode::DimensionMismatch, "data length does not match frequency count");
  if (base) return base->solve(data);

  std::vector<Complex> out(size);
  // moments[i][t] = sum_z w_z^t c_(prefix_i, z), filled block by block.
  std::vector<std::vector<Complex>> moments(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) moments[i].resize(blocks[i].out.size());

  std::vector<Complex> rhs;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& block = blocks[i];
    for (std::size_t jl = block.q_begin; jl < block.q_end; ++jl) {
      const auto& rows = block.rows[jl - block.q_begin];
      rhs.assign(rows.size(), Complex{});
      for (std::size_t a = 0; a < rows.size(); ++a) rhs[a] = data[rows[a]];
      for (std::size_t q = 0; q < i; ++q) {
        // parent q is fully solved; evaluate its moment at j_l beyond its own window
        Complex moment{};
        const Block& done = blocks[q];
        for (std::size_t t = 0; t < done.out.size(); ++t)
          moment += out[done.out[t]] * unit_phase(done.child_args[t] * static_cast<double>(jl));
        for (std::size_t a = 0; a < rows.size(); ++a)
          rhs[a] -= block.correction(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(q)) * moment;
      }
      const std::vector<Complex> sol = block.sub->solve(rhs);
      for (std::size_t t = 0; t < sol.size(); ++t) moments[i + t][jl] = sol[t];
    }
    const std::vector<Complex> values = block.system->solve(moments[i]);
    for (std::size_t t = 0; t < values.size(); ++t) out[block.out[t]] = values[t];
  }
  return out;
}

NestedSolver::NestedSolver(const FrequencyTree& tree, std::span<const double> delta)
    : plan_(std::make_unique<const Plan>(tree.frequencies.vectors, delta)) {}
NestedSolver::~NestedSolver() = default;
NestedSolver::NestedSolver(NestedSolver&&) noexcept = default;
NestedSolver& NestedSolver::operator=(NestedSolver&&) noexcept = default;

const ShiftIndexSet& NestedSolver::indices() const { return plan_->indices; }

std::vector<Complex> NestedSolver::solve(std::span<const Complex> data) const { return plan_->solve(data); }

std::vector<Complex> reconstruct_point(const FrequencyTree& tree, std::span<const double> delta,
                                       std::span<const Complex> data) {
  return NestedSolver(tree, delta).solve(data);
}

}  // namespace multitile
