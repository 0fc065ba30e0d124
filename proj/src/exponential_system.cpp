#include "multitile/exponential_system.hpp"

#include "multitile/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numbers>
#include <string>

namespace multitile {

namespace {

constexpr double kSingular = 1e-12;
constexpr double kOrthogonalTol = 1e-10;

Complex two_pi_i_exp(double t) { return std::polar(1.0, 2.0 * std::numbers::pi * t); }

// (e^{2 pi i theta b} - e^{2 pi i theta a}) / (2 pi i theta), stable near theta = 0.
Complex interval_integral(double theta, double a, double b) {
  const double width = b - a;
  const double x = std::numbers::pi * theta * width;
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return two_pi_i_exp(0.5 * theta * (a + b)) * (width * sinc);
}

}  // namespace

Eigen::VectorXd ShiftSet::shift(const Lattice& lattice, std::size_t cell, std::size_t s) const {
  const IntVector& j = indices[cell][s];
  Eigen::VectorXd scaled(static_cast<Eigen::Index>(j.size()));
  for (std::size_t l = 0; l < j.size(); ++l) scaled[static_cast<Eigen::Index>(l)] = delta[l] * static_cast<double>(j[l]);
  Eigen::VectorXd a = lattice.dual_basis() * scaled;
  if (!eta.empty()) a += dual_point(lattice, eta);
  return a;
}

ShiftSet make_shifts(const MultiTileDomain& domain, std::vector<double> delta, IntVector eta) {
  const auto d = static_cast<std::size_t>(domain.dimension());
  if (delta.size() != d) throw Error(ErrorCode::DimensionMismatch, "delta must have one entry per dimension");
  if (!eta.empty() && eta.size() != d) throw Error(ErrorCode::DimensionMismatch, "eta must have one entry per dimension");

  ShiftSet shifts;
  shifts.delta = std::move(delta);
  shifts.eta = std::move(eta);
  for (const auto& cell : domain.cells())
    shifts.indices.push_back(shift_index_set(build_tree(frequency_set_from_offsets(cell.offsets))));

  auto sorted_first = shifts.indices.front();
  std::sort(sorted_first.begin(), sorted_first.end());
  for (std::size_t c = 1; c < shifts.indices.size() && shifts.uniform; ++c) {
    auto sorted = shifts.indices[c];
    std::sort(sorted.begin(), sorted.end());
    shifts.uniform = sorted == sorted_first;
  }
  if (shifts.uniform)
    for (std::size_t c = 1; c < shifts.indices.size(); ++c) shifts.indices[c] = shifts.indices.front();
  return shifts;
}

PointSystem assemble_cell(const MultiTileDomain& domain, const ShiftSet& shifts, std::size_t cell) {
  const Lattice& lat = domain.lattice();
  const auto& offsets = domain.cells()[cell].offsets;
  const auto k = static_cast<Eigen::Index>(offsets.size());
  if (shifts.indices[cell].size() != offsets.size())
    throw Error(ErrorCode::DimensionMismatch, "shift index set size differs from k");

  PointSystem ps;
  ps.cell = cell;
  ps.v.resize(k, k);
  for (Eigen::Index s = 0; s < k; ++s) {
    const Eigen::VectorXd a = shifts.shift(lat, cell, static_cast<std::size_t>(s));
    for (Eigen::Index r = 0; r < k; ++r) {
      const Eigen::VectorXd lambda = lat.point(offsets[static_cast<std::size_t>(r)]);
      ps.v(s, r) = unit_phase(lambda.dot(a));
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ps.v);
  ps.singular_values = svd.singularValues();
  if (ps.sigma_min() >= kSingular) ps.inverse = ps.v.partialPivLu().inverse();
  return ps;
}

PointSystem assemble_V(const MultiTileDomain& domain, const ShiftSet& shifts, const Eigen::VectorXd& u) {
  return assemble_cell(domain, shifts, domain.locate(u));
}

ExponentialSystem::ExponentialSystem(const MultiTileDomain& domain, ShiftSet shifts)
    : domain_(domain), shifts_(std::move(shifts)) {
  if (shifts_.indices.size() != domain.cells().size())
    throw Error(ErrorCode::DimensionMismatch, "shift set does not match the domain's cells");
  for (std::size_t c = 0; c < domain.cells().size(); ++c) {
    trees_.push_back(build_tree(frequency_set_from_offsets(domain.cells()[c].offsets)));
    systems_.push_back(assemble_cell(domain, shifts_, c));
  }
}

Eigen::VectorXd ExponentialSystem::frequency(std::size_t cell, const IntVector& dual_index, std::size_t s) const {
  return dual_point(domain_.lattice(), dual_index) + shifts_.shift(domain_.lattice(), cell, s);
}

const Eigen::MatrixXcd& ExponentialSystem::inverse(std::size_t cell) const {
  const PointSystem& ps = systems_[cell];
  if (ps.inverse.size() == 0)
    throw Error(ErrorCode::SingularCell, "cell " + std::to_string(cell) + " has sigma_min " +
                                             std::to_string(ps.sigma_min()));
  return ps.inverse;
}

Complex exponential(const Eigen::VectorXd& l, const Eigen::VectorXd& y) { return two_pi_i_exp(l.dot(y)); }

OrthogonalityReport is_orthogonal(const ExponentialSystem& system) {
  if (!system.shifts().uniform) throw Error(ErrorCode::NonUniformShifts, "cells carry different shift index sets");
  OrthogonalityReport report;
  const double k = system.domain().k();
  for (std::size_t c = 0; c < system.cell_count(); ++c) {
    const auto& v = system.cell_system(c).v;
    const Eigen::MatrixXcd gram = v.adjoint() * v - k * Eigen::MatrixXcd::Identity(v.rows(), v.cols());
    report.max_deviation = std::max(report.max_deviation, gram.cwiseAbs().maxCoeff());
  }
  report.orthogonal = report.max_deviation <= kOrthogonalTol;
  return report;
}

RieszBounds riesz_bounds(const ExponentialSystem& system) {
  RieszBounds out;
  out.alpha = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < system.cell_count(); ++c) {
    const PointSystem& ps = system.cell_system(c);
    if (ps.sigma_min() < kSingular)
      throw Error(ErrorCode::SingularCell, "cell " + std::to_string(c) + " is numerically singular");
    CellBounds cb;
    cb.cell = c;
    cb.sigma_min_sq = ps.sigma_min() * ps.sigma_min();
    cb.sigma_max_sq = ps.sigma_max() * ps.sigma_max();
    cb.condition = ps.condition();
    cb.levels = level_blocks(system.cell_tree(c), system.shifts().delta);
    cb.factored_lower = 1.0;
    cb.factored_upper = 1.0;
    for (const auto& lb : cb.levels) {
      cb.factored_lower *= lb.sigma_min * lb.sigma_min;
      cb.factored_upper *= lb.sigma_max * lb.sigma_max;
    }
    out.alpha = std::min(out.alpha, cb.sigma_min_sq);
    out.beta = std::max(out.beta, cb.sigma_max_sq);
    out.cells.push_back(std::move(cb));
  }
  const double vol = system.domain().lattice().volume();
  out.frame_lower = vol * out.alpha;
  out.frame_upper = vol * out.beta;
  return out;
}

Complex dual_eval(const ExponentialSystem& system, const IntVector& dual_index, std::size_t s, const Eigen::VectorXd& y) {
  const RegionPoint rp = system.domain().omega_inverse(y);
  const auto r = static_cast<Eigen::Index>(rp.region);
  const auto si = static_cast<Eigen::Index>(s);
  const Eigen::MatrixXcd& inv = system.inverse(rp.cell);
  const Complex modulation = static_cast<double>(system.domain().k()) * system.cell_system(rp.cell).v(si, r) * inv(r, si);
  return exponential(system.frequency(rp.cell, dual_index, s), y) * modulation;
}

Complex piece_integral(const Lattice& lattice, const Box& box, const IntVector& z, const Eigen::VectorXd& theta_world) {
  // y = M(u + z): e_theta(y) = e^{2 pi i (M^T theta).(u + z)}, dy = |det M| du
  const Eigen::VectorXd theta = lattice.basis().transpose() * theta_world;
  Complex value = lattice.volume() * two_pi_i_exp(theta.dot(to_eigen(z)));
  for (std::size_t i = 0; i < box.lower.size(); ++i)
    value *= interval_integral(theta[static_cast<Eigen::Index>(i)], box.lower[i], box.upper[i]);
  return value;
}

Complex gram(const MultiTileDomain& domain, const Eigen::VectorXd& l, const Eigen::VectorXd& l_prime) {
  const Eigen::VectorXd theta = l - l_prime;
  Complex total{};
  for (const auto& cell : domain.cells())
    for (const auto& z : cell.offsets) total += piece_integral(domain.lattice(), cell.box, z, theta);
  return total;
}

std::vector<IntVector> integer_box(int d, int radius) {
  std::vector<IntVector> out;
  IntVector z(static_cast<std::size_t>(d), -radius);
  while (true) {
    out.push_back(z);
    int axis = d - 1;
    while (axis >= 0 && ++z[static_cast<std::size_t>(axis)] > radius) z[static_cast<std::size_t>(axis--)] = -radius;
    if (axis < 0) break;
  }
  return out;
}

BiorthogonalityReport verify_biorthogonality(const ExponentialSystem& system, int radius) {
  if (!system.shifts().uniform) throw Error(ErrorCode::NonUniformShifts, "cells carry different shift index sets");
  const MultiTileDomain& domain = system.domain();
  const auto k = static_cast<std::size_t>(domain.k());
  const double measure = domain.measure();

  // g_{l'} on the piece (cell c, region r) is conj-free constant
  // k V_{s'r} (V^{-1})_{rs'} times e_{l'}; precompute those constants.
  std::vector<Eigen::MatrixXcd> modulation(system.cell_count());
  for (std::size_t c = 0; c < system.cell_count(); ++c) {
    const auto& v = system.cell_system(c).v;
    const auto& inv = system.inverse(c);
    modulation[c] = Eigen::MatrixXcd(v.rows(), v.cols());  // (s, r)
    for (Eigen::Index s = 0; s < v.rows(); ++s)
      for (Eigen::Index r = 0; r < v.cols(); ++r) modulation[c](s, r) = static_cast<double>(k) * v(s, r) * inv(r, s);
  }

  const auto lattice_points = integer_box(domain.dimension(), radius);
  struct Label {
    Eigen::VectorXd frequency;
    std::size_t s;
  };
  std::vector<Label> labels;
  for (const auto& lp : lattice_points)
    for (std::size_t s = 0; s < k; ++s) labels.push_back({system.frequency(0, lp, s), s});

  BiorthogonalityReport report;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = 0; b < labels.size(); ++b) {
      const Eigen::VectorXd theta = labels[a].frequency - labels[b].frequency;
      Complex inner{};
      for (std::size_t c = 0; c < system.cell_count(); ++c) {
        const Cell& cell = domain.cells()[c];
        for (std::size_t r = 0; r < k; ++r)
          inner += std::conj(modulation[c](static_cast<Eigen::Index>(labels[b].s), static_cast<Eigen::Index>(r))) *
                   piece_integral(domain.lattice(), cell.box, cell.offsets[r], theta);
      }
      const double expected = a == b ? 1.0 : 0.0;
      report.max_residual = std::max(report.max_residual, std::abs(inner / measure - expected));
      ++report.pairs;
    }
  }
  return report;
}

}  // namespace multitile
