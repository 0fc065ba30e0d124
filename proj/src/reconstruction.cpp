#include "multitile/reconstruction.hpp"

#include "multitile/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <cmath>
#include <string>
#include <thread>

namespace multitile {

const char* to_string(Provenance p) {
  return p == Provenance::ExactPointwise ? "exact-pointwise" : "coefficient-truncated";
}

Complex ExponentialSum::operator()(const Eigen::VectorXd& y) const {
  Complex total{};
  for (std::size_t t = 0; t < frequencies.size(); ++t) total += coefficients[t] * exponential(frequencies[t], y);
  return total;
}

unsigned worker_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("MULTITILE_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SpectralData forward_data(const ExponentialSystem& system, const std::vector<GridPoint>& grid,
                          const std::vector<std::vector<Complex>>& point_values) {
  if (grid.size() != point_values.size()) throw Error(ErrorCode::DimensionMismatch, "one value vector per grid point");
  const auto k = static_cast<std::size_t>(system.domain().k());
  const double vol = system.domain().lattice().volume();
  SpectralData data;
  data.provenance = Provenance::ExactPointwise;
  data.samples.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (point_values[i].size() != k) throw Error(ErrorCode::DimensionMismatch, "expected k values per grid point");
    Eigen::VectorXcd f(static_cast<Eigen::Index>(k));
    for (std::size_t r = 0; r < k; ++r) {
      if (!std::isfinite(point_values[i][r].real()) || !std::isfinite(point_values[i][r].imag()))
        throw Error(ErrorCode::InvalidInput, "non-finite point value");
      f[static_cast<Eigen::Index>(r)] = point_values[i][r];
    }
    const Eigen::VectorXcd values = vol * (system.cell_system(grid[i].cell).v * f);
    data.samples.push_back({grid[i].cell, grid[i].u, {values.data(), values.data() + values.size()}});
  }
  return data;
}

SpectralData coefficient_data(const ExponentialSystem& system, const std::vector<GridPoint>& grid,
                              const ExponentialSum& f, int radius) {
  if (radius < 0) throw Error(ErrorCode::InvalidInput, "truncation radius must be >= 0");
  const MultiTileDomain& domain = system.domain();
  const auto k = static_cast<std::size_t>(domain.k());
  const double vol = domain.lattice().volume();
  const auto dual_points = integer_box(domain.dimension(), radius);

  // Frequencies and inner products <f, e_l> per cell (shared when uniform).
  struct Terms {
    std::vector<Eigen::VectorXd> frequency;  // [s * n + p]
    std::vector<Complex> inner;
  };
  std::map<std::size_t, Terms> cache;
  auto terms_for = [&](std::size_t cell) -> const Terms& {
    const std::size_t key = system.shifts().uniform ? 0 : cell;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Terms t;
    for (std::size_t s = 0; s < k; ++s) {
      for (const auto& p : dual_points) {
        Eigen::VectorXd l = system.frequency(key, p, s);
        Complex ip{};
        for (std::size_t m = 0; m < f.frequencies.size(); ++m) ip += f.coefficients[m] * gram(domain, f.frequencies[m], l);
        t.frequency.push_back(std::move(l));
        t.inner.push_back(ip);
      }
    }
    return cache.emplace(key, std::move(t)).first->second;
  };

  SpectralData data;
  data.provenance = Provenance::CoefficientTruncated;
  data.radius = radius;
  for (const auto& gp : grid) {
    const Terms& t = terms_for(gp.cell);
    const Eigen::VectorXd x = domain.lattice().basis() * gp.u;
    SpectralSample sample{gp.cell, gp.u, std::vector<Complex>(k)};
    const std::size_t n = dual_points.size();
    for (std::size_t s = 0; s < k; ++s) {
      Complex sum{};
      for (std::size_t p = 0; p < n; ++p) sum += t.inner[s * n + p] * exponential(t.frequency[s * n + p], x);
      sample.values[s] = sum / vol;
    }
    data.samples.push_back(std::move(sample));
  }
  return data;
}

std::vector<Complex> reconstruct_direct(const Eigen::MatrixXcd& v, std::span<const Complex> data, double volume) {
  if (v.rows() != v.cols() || static_cast<std::size_t>(v.rows()) != data.size())
    throw Error(ErrorCode::DimensionMismatch, "direct solve size mismatch");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  if (svd.singularValues()[v.rows() - 1] < 1e-12) throw Error(ErrorCode::SingularMatrix, "V is numerically singular");
  Eigen::VectorXcd rhs(v.rows());
  for (std::size_t i = 0; i < data.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = data[i] / volume;
  const Eigen::VectorXcd y = v.partialPivLu().solve(rhs);
  return {y.data(), y.data() + y.size()};
}

ReconstructionResult reconstruct_grid(const ExponentialSystem& system, const SpectralData& data, bool oracle) {
  const MultiTileDomain& domain = system.domain();
  const auto k = static_cast<std::size_t>(domain.k());
  const double vol = domain.lattice().volume();

  ReconstructionResult result;
  result.oracle = oracle;

  // Per-cell solvers and the map from shift-list rows to solver rows.
  std::vector<NestedSolver> solvers;
  std::vector<std::vector<std::size_t>> row_map;
  for (std::size_t c = 0; c < system.cell_count(); ++c) {
    solvers.emplace_back(system.cell_tree(c), system.shifts().delta);
    std::map<IntVector, std::size_t> position;
    const auto& solver_rows = solvers.back().indices();
    for (std::size_t i = 0; i < solver_rows.size(); ++i) position[solver_rows[i]] = i;
    std::vector<std::size_t> map;
    for (const auto& j : system.shifts().indices[c]) map.push_back(position.at(j));
    row_map.push_back(std::move(map));
    result.cells.push_back({c, system.cell_system(c).condition(), level_blocks(system.cell_tree(c), system.shifts().delta)});
  }

  std::vector<std::optional<PointResult>> slots(data.samples.size());
  std::vector<double> relative(data.samples.size(), 0.0);
  parallel_for(data.samples.size(), [&](std::size_t i) {
    const SpectralSample& sample = data.samples[i];
    if (sample.values.size() != k) throw Error(ErrorCode::DimensionMismatch, "sample has wrong number of values");
    std::size_t cell = 0;
    try {
      cell = domain.locate(sample.u);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::PointOnGap) return;
      throw;
    }
    if (cell != sample.cell) throw Error(ErrorCode::InvalidInput, "sample cell id does not match its point");

    std::vector<Complex> rhs(k);
    for (std::size_t s = 0; s < k; ++s) rhs[row_map[cell][s]] = sample.values[s] / vol;
    PointResult pr;
    pr.cell = cell;
    pr.u = sample.u;
    pr.values = solvers[cell].solve(rhs);
    for (std::size_t r = 0; r < k; ++r) pr.y.push_back(domain.omega(static_cast<int>(r), sample.u));
    if (oracle) {
      const auto direct = reconstruct_direct(system.cell_system(cell).v, sample.values, vol);
      double diff = 0.0, norm = 0.0;
      for (std::size_t r = 0; r < k; ++r) {
        pr.residual.push_back(std::abs(pr.values[r] - direct[r]));
        diff += std::norm(pr.values[r] - direct[r]);
        norm += std::norm(direct[r]);
      }
      relative[i] = norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
    }
    slots[i] = std::move(pr);
  });

  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) {
      result.skipped.push_back(i);
      continue;
    }
    result.points.push_back(std::move(*slots[i]));
    result.max_residual = std::max(result.max_residual, relative[i]);
  }
  return result;
}

}  // namespace multitile
