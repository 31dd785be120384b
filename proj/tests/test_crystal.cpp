#include <doctest.h>

#include <random>

#include "ratlas/crystal.hpp"
#include "support.hpp"

using namespace ratlas;
using namespace ratlas::crystal;
using namespace testsupport;
using rootfind::SearchRect;

namespace {

CrystalSpec slab(double eps) { return {{0.0, 1.0}, {1.0, eps, 1.0}}; }

CrystalSpec random_crystal(std::mt19937_64& rng, int layers) {
  std::uniform_real_distribution<double> w(0.3, 1.2), e(1.0, 6.0);
  CrystalSpec c;
  c.breakpoints.push_back(0.0);
  for (int j = 0; j < layers; ++j) c.breakpoints.push_back(c.breakpoints.back() + w(rng));
  for (int j = 0; j < layers + 2; ++j) c.permittivities.push_back(e(rng));
  return c;
}

// Optical lengths sqrt(eps) w from small rationals.
CrystalSpec rational_crystal(std::mt19937_64& rng, int layers) {
  const double n[] = {1.0, 1.5, 2.0, 3.0};
  const double w[] = {0.5, 1.0, 1.5};
  CrystalSpec c;
  c.breakpoints.push_back(0.0);
  c.permittivities.push_back(1.0);
  for (int j = 0; j < layers; ++j) {
    const double nj = n[1 + rng() % 3];
    c.permittivities.push_back(nj * nj);
    c.breakpoints.push_back(c.breakpoints.back() + w[rng() % 3] / nj);
  }
  c.permittivities.push_back(n[rng() % 4] * n[rng() % 4]);
  return c;
}

// Layer-by-layer propagation of (f, f'), then the change to the
// normalized variables at both ends.
Eigen::Matrix2cd transfer_oracle(const CrystalSpec& c, cplx k) {
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  for (std::size_t j = 1; j + 1 < c.permittivities.size(); ++j) {
    const double n = std::sqrt(c.permittivities[j]);
    const cplx phi = k * n * (c.breakpoints[j] - c.breakpoints[j - 1]);
    Eigen::Matrix2cd p;
    p << std::cos(phi), std::sin(phi) / (k * n), -k * n * std::sin(phi), std::cos(phi);
    m = p * m;
  }
  const double n0 = std::sqrt(c.permittivities.front()), n1 = std::sqrt(c.permittivities.back());
  Eigen::Matrix2cd left = Eigen::Matrix2cd::Identity(), right = Eigen::Matrix2cd::Identity();
  left(1, 1) = i * k * n0;
  right(1, 1) = 1.0 / (i * k * n1);
  return right * m * left;
}

rootfind::AnalyticFunction sum_function(const ExpSum& s) {
  return rootfind::make_function([s](cplx k) { return s(k); });
}

}  // namespace

TEST_SUITE("crystal") {
  TEST_CASE("uniform medium: identity, no zeros") {
    const CrystalSpec c{{0.0}, {2.0, 2.0}};
    CHECK(c.layers() == 0);
    CHECK((transfer_matrix(c, {1.3, -0.2}) - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
    CHECK(crystal_resonances(c, SearchRect::from_bounds(0.5, 20.0, -5.0, 1.0)).zeros.zeros.empty());
    CHECK(crystal_resonances(slab(1.0), SearchRect::from_bounds(0.5, 40.0, -8.0, 1.0)).zeros.zeros.empty());
  }

  TEST_CASE("transfer matrix matches the (f, f') propagation") {
    std::mt19937_64 rng(80);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 10; ++trial) {
      const auto c = random_crystal(rng, 1 + trial % 4);
      const cplx k{u(rng), 0.3 * u(rng)};
      CHECK((transfer_matrix(c, k) - transfer_oracle(c, k)).norm() <= 1e-11 * transfer_oracle(c, k).norm());
    }
    CHECK_THROWS_AS(transfer_matrix(slab(4.0), cplx{}), Error);
  }

  TEST_CASE("single slab, eps = 4") {
    const auto c = slab(4.0);
    const auto s = crystal_exppoly(c);
    REQUIRE(s.size() == 2);
    CHECK(s.terms().back().frequency - s.terms().front().frequency == doctest::Approx(4.0).epsilon(1e-12));
    const auto rep = crystal_resonances(c, SearchRect::from_bounds(0.3, 20.0, -3.0, 1.0));
    REQUIRE(rep.lattice);
    CHECK(rep.lattice->beta == doctest::Approx(4.0).epsilon(1e-12));
    REQUIRE(rep.lattice->xi.size() == 1);
    CHECK(std::abs(rep.lattice->xi[0].value) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(rep.no_real_resonances);
    REQUIRE(rep.zeros.zeros.size() == 12);
    for (std::size_t j = 0; j < rep.zeros.zeros.size(); ++j) {
      const cplx z = rep.zeros.zeros[j].location;
      CHECK(z.imag() == doctest::Approx(-std::log(9.0) / 4.0).epsilon(1e-9));
      if (j > 0) CHECK(z.real() - rep.zeros.zeros[j - 1].location.real() == doctest::Approx(kPi / 2.0).epsilon(1e-9));
    }
  }

  TEST_CASE("exponential sum is real and equals half the oracle") {
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 10; ++trial) {
      const auto c = random_crystal(rng, 1 + trial % 3);
      const auto s = crystal_exppoly(c);
      CHECK(s.constant_coefficients());
      for (const auto& t : s.terms().terms()) CHECK(t.poly[0].imag() == 0.0);
      for (int p = 0; p < 5; ++p) {
        const cplx k{u(rng), 0.3 * u(rng)};
        CHECK(rel(F_oracle(c, k), 2.0 * s(k)) < 1e-10);
      }
    }
  }

  TEST_CASE("oracle and exponential sum share their zeros") {
    std::mt19937_64 rng(82);
    for (int trial = 0; trial < 5; ++trial) {
      const auto c = random_crystal(rng, 1 + trial % 3);
      const auto rect = SearchRect::from_bounds(0.3, 15.0, -4.0, 0.5);
      const auto a = crystal_resonances(c, rect).zeros;
      const auto b = rootfind::find_zeros(sum_function(crystal_exppoly(c)), rect);
      REQUIRE(a.total() == b.total());
      for (const auto& z : a.zeros) {
        double best = INFINITY;
        for (const auto& w : b.zeros) best = std::min(best, std::abs(w.location - z.location));
        CHECK(best < 1e-7);
      }
    }
  }

  TEST_CASE("no zeros on or above the real axis") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 5; ++trial) {
      const auto c = random_crystal(rng, 2 + trial % 2);
      const auto rep = crystal_resonances(c, SearchRect::from_bounds(-12.0, 12.0, -4.0, 2.0));
      CHECK(rep.no_real_resonances);
      for (const auto& z : rep.zeros.zeros) CHECK(z.location.imag() < 0.0);
    }
  }

  TEST_CASE("rational crystals: zeros on the lattice") {
    std::mt19937_64 rng(84);
    for (int trial = 0; trial < 3; ++trial) {
      const auto c = rational_crystal(rng, 3);
      const auto rect = SearchRect::from_bounds(0.3, 15.0, -6.0, 0.5);
      const auto rep = crystal_resonances(c, rect);
      REQUIRE(rep.lattice);
      CHECK(rep.lattice->min_modulus() > 1.0);
      CHECK(rep.no_real_resonances);
      const auto lat = qgraph::lattice(*rep.lattice, rect);
      int lat_total = 0;
      for (const auto& p : lat) lat_total += p.multiplicity;
      CHECK(lat_total == rep.zeros.total());
      for (const auto& z : rep.zeros.zeros) {
        double best = INFINITY;
        for (const auto& p : lat) best = std::min(best, std::abs(p.k - z.location));
        CHECK(best < 1e-7);
      }
    }
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(validate({{0.0, 0.0}, {1.0, 2.0, 1.0}}), Error);
    CHECK_THROWS_AS(validate({{0.0, 1.0}, {1.0, -2.0, 1.0}}), Error);
    CHECK_THROWS_AS(validate({{0.0, 1.0}, {1.0, 2.0}}), Error);
    CHECK(slab(4.0).optical_lengths() == std::vector<double>{2.0});
  }
}
