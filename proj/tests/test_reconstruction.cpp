#include "multitile/admissibility.hpp"
#include "multitile/error.hpp"
#include "multitile/reconstruction.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <cstdlib>
#include <random>

using namespace multitile;

namespace {

Eigen::VectorXd v1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

std::vector<std::vector<Complex>> random_values(std::mt19937_64& rng, std::size_t points, int k) {
  std::normal_distribution<double> g;
  std::vector<std::vector<Complex>> out(points);
  for (auto& row : out)
    for (int r = 0; r < k; ++r) row.emplace_back(g(rng), g(rng));
  return out;
}

double max_relative(const ReconstructionResult& res, const std::vector<std::vector<Complex>>& truth) {
  double worst = 0.0;
  for (std::size_t i = 0; i < res.points.size(); ++i) {
    double diff = 0.0, norm = 0.0;
    for (std::size_t r = 0; r < truth[i].size(); ++r) {
      diff += std::norm(res.points[i].values[r] - truth[i][r]);
      norm += std::norm(truth[i][r]);
    }
    worst = std::max(worst, std::sqrt(diff / norm));
  }
  return worst;
}

}  // namespace

TEST_CASE("forward data examples") {
  const auto dom = fixtures::interval_two();
  const ExponentialSystem sys(dom, make_shifts(dom, {0.5}));
  const std::vector<GridPoint> grid{{0, v1(0.5)}};
  const auto data = forward_data(sys, grid, {{1.0, -1.0}});
  CHECK(std::abs(data.samples[0].values[0]) <= 1e-15);
  CHECK(std::abs(data.samples[0].values[1] - 2.0) <= 1e-15);
  CHECK(data.provenance == Provenance::ExactPointwise);

  const auto stretched = fixtures::make([] {
    Eigen::MatrixXd m(2, 2);
    m << 3, 0, 0, 1;
    return m;
  }(), {fixtures::unit_cell(2, {{0, 0}})});
  const ExponentialSystem one(stretched, make_shifts(stretched, {1.0, 1.0}));
  const auto single = forward_data(one, stretched.sample_grid(1), {{Complex(2.0, 1.0)}});
  CHECK(std::abs(single.samples[0].values[0] - 3.0 * Complex(2.0, 1.0)) <= 1e-14);

  CHECK_THROWS_AS(forward_data(sys, grid, {{1.0}}), Error);
}

TEST_CASE("direct solve inverts forward data") {
  std::mt19937_64 rng(8);
  for (const auto& dom : {fixtures::corner_three(), fixtures::two_cell(), fixtures::stretched_pair()}) {
    const ExponentialSystem sys(dom, make_shifts(dom, find_pair(dom, 8, 8).delta()));
    const auto grid = dom.sample_grid(3);
    const auto values = random_values(rng, grid.size(), dom.k());
    const auto data = forward_data(sys, grid, values);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto y = reconstruct_direct(sys.cell_system(grid[i].cell).v, data.samples[i].values, dom.lattice().volume());
      for (int r = 0; r < dom.k(); ++r) CHECK(std::abs(y[static_cast<std::size_t>(r)] - values[i][static_cast<std::size_t>(r)]) <= 1e-12);
    }
  }
  Eigen::MatrixXcd singular = Eigen::MatrixXcd::Ones(2, 2);
  const std::vector<Complex> rhs{1.0, 1.0};
  CHECK_THROWS_AS(reconstruct_direct(singular, rhs, 1.0), Error);
}

TEST_CASE("pointwise round trip on a 64-per-axis grid") {
  std::mt19937_64 rng(12);
  std::vector<MultiTileDomain> domains{fixtures::corner_three(), fixtures::square_four(), fixtures::sheared_two_cell()};
  for (int extra = 0; extra < 3; ++extra) {
    const int k = 4 + extra;
    domains.push_back(fixtures::make(fixtures::identity(2), {fixtures::unit_cell(2, fixtures::random_offsets(rng, 2, k, -5, 5))}));
  }
  for (const auto& dom : domains) {
    const ExponentialSystem sys(dom, make_shifts(dom, find_pair(dom, 2 * dom.k(), 2 * dom.k()).delta()));
    const auto grid = dom.sample_grid(64);
    const auto values = random_values(rng, grid.size(), dom.k());
    const auto res = reconstruct_grid(sys, forward_data(sys, grid, values), true);
    CHECK(res.points.size() == grid.size());
    CHECK(res.skipped.empty());
    CHECK(res.max_residual <= 1e-9);
    CHECK(max_relative(res, values) <= 1e-9);
    for (const auto& p : res.points) CHECK(p.residual.size() == static_cast<std::size_t>(dom.k()));
  }
}

TEST_CASE("zero data gives the zero function") {
  const auto dom = fixtures::corner_three();
  const ExponentialSystem sys(dom, make_shifts(dom, {0.5, 0.5}));
  const auto grid = dom.sample_grid(4);
  SpectralData zero;
  for (const auto& gp : grid) zero.samples.push_back({gp.cell, gp.u, std::vector<Complex>(3)});
  const auto res = reconstruct_grid(sys, zero, true);
  for (const auto& p : res.points)
    for (auto v : p.values) CHECK(std::abs(v) == 0.0);

  const auto zero_coeff = coefficient_data(sys, grid, ExponentialSum{}, 2);
  for (const auto& s : zero_coeff.samples)
    for (auto v : s.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("k = 1 reconstruction divides by the covolume") {
  Eigen::MatrixXd m(1, 1);
  m << 2.5;
  const auto dom = fixtures::make(m, {fixtures::unit_cell(1, {{0}})});
  const ExponentialSystem sys(dom, make_shifts(dom, {1.0}));
  SpectralData data;
  data.samples.push_back({0, v1(0.5), {Complex(5.0, -2.5)}});
  const auto res = reconstruct_grid(sys, data, false);
  CHECK(std::abs(res.points[0].values[0] - Complex(2.0, -1.0)) <= 1e-15);
  CHECK_FALSE(res.oracle);
}

TEST_CASE("eta does not change reconstructions") {
  std::mt19937_64 rng(21);
  const auto dom = fixtures::corner_three();
  const auto delta = find_pair(dom, 6, 6).delta();
  const ExponentialSystem plain(dom, make_shifts(dom, delta));
  const ExponentialSystem moved(dom, make_shifts(dom, delta, {2, -1}));
  const auto grid = dom.sample_grid(5);
  const auto values = random_values(rng, grid.size(), 3);
  const auto a = reconstruct_grid(plain, forward_data(moved, grid, values), false);
  const auto b = reconstruct_grid(moved, forward_data(moved, grid, values), false);
  for (std::size_t i = 0; i < a.points.size(); ++i)
    for (std::size_t r = 0; r < 3; ++r) CHECK(std::abs(a.points[i].values[r] - b.points[i].values[r]) <= 1e-12);

  // Coefficient data: the shifted window covers the same single term.
  const auto two = fixtures::interval_two();
  const ExponentialSystem h0(two, make_shifts(two, {0.5}));
  const ExponentialSystem h1(two, make_shifts(two, {0.5}, {1}));
  const ExponentialSum f{{v1(1.5)}, {1.0}};
  const auto g2 = two.sample_grid(6);
  const auto r0 = reconstruct_grid(h0, coefficient_data(h0, g2, f, 3), false);
  const auto r1 = reconstruct_grid(h1, coefficient_data(h1, g2, f, 3), false);
  for (std::size_t i = 0; i < r0.points.size(); ++i)
    for (std::size_t r = 0; r < 2; ++r) CHECK(std::abs(r0.points[i].values[r] - r1.points[i].values[r]) <= 1e-12);
}

TEST_CASE("coefficient data is exact for a single basis exponential") {
  const auto dom = fixtures::interval_two();
  const ExponentialSystem sys(dom, make_shifts(dom, {0.5}));
  // l0 = -2 + a_1 = -1.5 has |lambda*| = 2
  const ExponentialSum f{{v1(-1.5)}, {Complex(0.5, 2.0)}};
  const auto grid = dom.sample_grid(16);
  for (int radius : {2, 3, 5}) {
    const auto res = reconstruct_grid(sys, coefficient_data(sys, grid, f, radius), true);
    for (const auto& p : res.points)
      for (std::size_t r = 0; r < 2; ++r) CHECK(std::abs(p.values[r] - f(p.y[r])) <= 1e-9);
  }
  const auto short_window = reconstruct_grid(sys, coefficient_data(sys, grid, f, 1), false);
  CHECK(std::abs(short_window.points[0].values[0]) <= 1e-12);
}

TEST_CASE("gap points are skipped and reported") {
  const Lattice z1 = make_lattice(Eigen::MatrixXd::Identity(1, 1));
  const MultiTileDomain cracked(z1, {Cell{{{0.0}, {0.5}}, {{0}, {1}}}, Cell{{{0.5 + 5e-11}, {1.0}}, {{0}, {1}}}});
  const ExponentialSystem sys(cracked, make_shifts(cracked, {0.5}));
  SpectralData data;
  data.samples.push_back({0, v1(0.25), {1.0, 0.0}});
  data.samples.push_back({0, v1(0.5 + 2e-11), {1.0, 0.0}});
  const auto res = reconstruct_grid(sys, data, false);
  CHECK(res.points.size() == 1);
  CHECK(res.skipped == std::vector<std::size_t>{1});
}

TEST_CASE("worker count follows the environment") {
  ::setenv("MULTITILE_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  ::setenv("MULTITILE_THREADS", "0", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("MULTITILE_THREADS");
}
