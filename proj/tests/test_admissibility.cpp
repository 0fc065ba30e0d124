#include "multitile/admissibility.hpp"
#include "multitile/error.hpp"
#include "multitile/exponential_system.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace multitile;

namespace {

AdmissibilityReport check(const MultiTileDomain& dom, std::vector<double> v, std::vector<std::int64_t> q) {
  return check_admissibility(dom, v, q);
}

int rank(AdmissibilityClass c) { return static_cast<int>(c); }

}  // namespace

TEST_CASE("interval [0,2) is perfect with v=1, q=2") {
  const auto r = check(fixtures::interval_two(), {1.0}, {2});
  REQUIRE(r.certificate);
  CHECK(r.cls == AdmissibilityClass::Perfect);
  CHECK(r.certificate->q_star == std::vector<std::int64_t>{2});
  CHECK(r.certificate->delta() == std::vector<double>{0.5});
  REQUIRE(r.certificate->witnesses.size() == 1);
  CHECK(r.certificate->witnesses[0].residues == std::vector<double>{0.0, 1.0});
}

TEST_CASE("split interval collides mod 2 and is strong mod 4") {
  const auto bad = check(fixtures::split_two(), {1.0}, {2});
  CHECK(bad.cls == AdmissibilityClass::None);
  CHECK_FALSE(bad.certificate);
  REQUIRE(bad.collision);
  CHECK(bad.collision->first == 0.0);
  CHECK(bad.collision->second == 2.0);
  CHECK(bad.collision->residue == 0.0);
  CHECK(bad.collision->level == 1);

  const auto good = check(fixtures::split_two(), {1.0}, {4});
  CHECK(good.cls == AdmissibilityClass::Strong);
}

TEST_CASE("non-integer residues are only weak") {
  const auto r = check(fixtures::interval_two(), {0.5}, {2});
  CHECK(r.cls == AdmissibilityClass::Weak);
}

TEST_CASE("k = 1 is perfect for any pair") {
  for (std::int64_t q = 1; q <= 5; ++q) {
    CHECK(check(fixtures::unit_interval(), {3.0}, {q}).cls == AdmissibilityClass::Perfect);
    CHECK(check(fixtures::unit_interval(), {0.5}, {q}).cls == AdmissibilityClass::Perfect);
  }
}

TEST_CASE("find_pair examples") {
  auto c = find_pair(fixtures::interval_two(), 4, 8);
  CHECK(c.v == std::vector<double>{1.0});
  CHECK(c.q == std::vector<std::int64_t>{2});
  CHECK(c.cls == AdmissibilityClass::Perfect);

  c = find_pair(fixtures::split_two(), 8, 8);
  CHECK(c.v == std::vector<double>{1.0});
  CHECK(c.q == std::vector<std::int64_t>{4});
  CHECK(c.cls == AdmissibilityClass::Strong);

  c = find_pair(fixtures::stretched_pair(), 4, 4);
  CHECK(c.v == std::vector<double>{1.0, 1.0});
  CHECK(c.q == std::vector<std::int64_t>{2, 1});
  CHECK(c.cls == AdmissibilityClass::Perfect);

  c = find_pair(fixtures::square_four(), 4, 4);
  CHECK(c.cls == AdmissibilityClass::Perfect);
  CHECK(c.q == std::vector<std::int64_t>{2, 2});

  c = find_pair(fixtures::corner_three(), 4, 4);
  CHECK(c.cls == AdmissibilityClass::Strong);

  CHECK_THROWS_AS(find_pair(fixtures::split_two(), 1, 2), Error);
  try {
    find_pair(fixtures::split_two(), 1, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPairFound);
  }
}

TEST_CASE("doubling q keeps weak certificates weak; class ordering holds") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 3;
    const int k = 1 + trial % 6;
    const auto offsets = fixtures::random_offsets(rng, d, k, -5, 5);
    const auto dom = fixtures::make(fixtures::identity(d), {fixtures::unit_cell(d, offsets)});
    const auto cert = find_pair(dom, 4 * k, 4 * k);
    std::vector<std::int64_t> doubled = cert.q;
    for (auto& q : doubled) q *= 2;
    const auto r = check_admissibility(dom, cert.v, doubled);
    CHECK(rank(r.cls) >= rank(AdmissibilityClass::Weak));
    const auto again = check_admissibility(dom, cert.v, cert.q);
    CHECK(again.cls == cert.cls);
    if (cert.cls == AdmissibilityClass::Perfect) CHECK(cert.q == cert.q_star);
  }
}

TEST_CASE("perfect_shift_1d worked examples") {
  const std::vector<std::int64_t> a{0, 1}, b{0, 2}, c{0, 4}, e{0, 2, 4}, f{0, 1, 3};
  CHECK(perfect_shift_1d(a) == 1.0);
  CHECK(perfect_shift_1d(b) == 0.5);
  CHECK(perfect_shift_1d(c) == 0.25);
  CHECK(perfect_shift_1d(e) == 0.5);
  CHECK_FALSE(perfect_shift_1d(f).has_value());
}

TEST_CASE("perfect_shift_1d agrees with the condition number") {
  for (const std::vector<std::int64_t>& z :
       {std::vector<std::int64_t>{0, 1}, {0, 2}, {0, 4}, {0, 2, 4}, {0, 1, 3}, {-3, 0, 3, 9}}) {
    const auto tau = perfect_shift_1d(z);
    std::vector<IntVector> offsets;
    for (auto x : z) offsets.push_back({x});
    const auto dom = fixtures::make(fixtures::identity(1), {fixtures::unit_cell(1, offsets)});
    if (tau) {
      const ExponentialSystem sys(dom, make_shifts(dom, {*tau / static_cast<double>(z.size())}));
      CHECK(sys.cell_system(0).condition() <= 1 + 1e-10);
    }
  }
}
