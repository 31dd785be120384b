#include <doctest.h>

#include <random>

#include "ratlas/polynomial.hpp"
#include "support.hpp"

using namespace ratlas;
using testsupport::rel;

TEST_SUITE("polynomial") {
  TEST_CASE("trimming and degree") {
    Polynomial p({1.0, 2.0, 0.0});
    CHECK(p.degree() == 1);
    CHECK(Polynomial().degree() == -1);
    CHECK(Polynomial({0.0}).is_zero());
    CHECK(Polynomial::monomial(3.0, 2).degree() == 2);
  }

  TEST_CASE("arithmetic") {
    const Polynomial a{1.0, 1.0};   // 1 + z
    const Polynomial b{-1.0, 1.0};  // -1 + z
    CHECK((a * b) == Polynomial({-1.0, 0.0, 1.0}));
    CHECK((a + b) == Polynomial({0.0, 2.0}));
    CHECK(Polynomial({1.0, 2.0, 3.0}).derivative() == Polynomial({2.0, 6.0}));
    CHECK(a(cplx{2.0, 1.0}) == cplx{3.0, 1.0});
  }

  TEST_CASE("companion roots reproduce the polynomial") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
      const int deg = 1 + trial % 7;
      std::vector<cplx> c;
      for (int k = 0; k <= deg; ++k) c.push_back({n(rng), n(rng)});
      const Polynomial p(c);
      const auto roots = polynomial_roots(p);
      REQUIRE(roots.size() == static_cast<std::size_t>(deg));
      Polynomial rebuilt = Polynomial::constant(p.leading());
      for (const cplx r : roots) rebuilt = rebuilt * Polynomial({-r, 1.0});
      for (int k = 0; k <= deg; ++k) CHECK(std::abs(rebuilt[k] - p[k]) <= 1e-8 * std::abs(p.leading()) * 10);
    }
  }

  TEST_CASE("cluster_roots assigns multiplicity") {
    const Polynomial p = Polynomial({-1.0, 1.0}) * Polynomial({-1.0, 1.0}) * Polynomial({2.0, 1.0});
    const auto c = cluster_roots(polynomial_roots(p), 1e-6);
    REQUIRE(c.size() == 2);
    int total = 0;
    for (const auto& r : c) {
      total += r.multiplicity;
      if (r.multiplicity == 2) CHECK(rel(r.value, 1.0) < 1e-6);
      else CHECK(rel(r.value, -2.0) < 1e-12);
    }
    CHECK(total == 3);
  }
}
