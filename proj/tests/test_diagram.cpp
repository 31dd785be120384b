#include <doctest.h>

#include <random>

#include "ratlas/density.hpp"
#include "ratlas/diagram.hpp"
#include "support.hpp"

using namespace ratlas;
using namespace ratlas::diagram;
using namespace testsupport;

namespace {

DistributionDiagram diagram_of(const geometry::PointConfig& c) {
  return build_diagram(exppoly::build_characteristic_exppoly(c));
}

}  // namespace

TEST_SUITE("diagram") {
  TEST_CASE("two points at distance d") {
    const double d = 1.6;
    const auto diag = diagram_of(two_points(d));
    REQUIRE(diag.M() == 1);
    const auto& s = diag.segments[0];
    CHECK(s.mu == doctest::Approx(1.0 / d).epsilon(1e-14));
    CHECK(s.r == 2);
    REQUIRE(s.q.degree() == 2);
    CHECK(rel(s.q[0], -1.0 / (d * d)) < 1e-14);
    CHECK(s.q[1] == cplx{});
    CHECK(rel(s.q[2], 1.0) < 1e-15);
    REQUIRE(s.omegas.size() == 2);
    std::vector<double> w{s.omegas[0].value.real(), s.omegas[1].value.real()};
    std::sort(w.begin(), w.end());
    CHECK(w[0] == doctest::Approx(-1.0 / d).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(1.0 / d).epsilon(1e-12));
  }

  TEST_CASE("three-point cases") {
    const auto eq = diagram_of(equilateral());
    REQUIRE(eq.M() == 1);
    CHECK(eq.segments[0].mu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eq.segments[0].r == 3);

    const auto col = diagram_of(collinear3());
    REQUIRE(col.M() == 1);
    CHECK(col.segments[0].mu == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(col.segments[0].r == 2);

    const auto c3 = diagram_of(case3());
    REQUIRE(c3.M() == 2);
    CHECK(c3.segments[0].mu == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c3.segments[0].r == 1);
    CHECK(c3.segments[1].mu == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(c3.segments[1].r == 2);
  }

  TEST_CASE("single term gives an empty segment list") {
    const auto d = build_diagram(ExpPoly({{0.0, Polynomial({1.0, 1.0})}}));
    CHECK(d.M() == 0);
    CHECK(d.points.size() == 1);
    CHECK_THROWS_AS(build_diagram(ExpPoly{}), Error);
  }

  TEST_CASE("collinear interior points contribute to q") {
    // (-2, 0), (-1, 1), (0, 2) on one line: q = c0 + c1 w + c2 w^2.
    const ExpPoly d({{-2.0, Polynomial::constant(2.0)},
                     {-1.0, Polynomial({0.0, -3.0})},
                     {0.0, Polynomial({0.0, 0.0, 1.0})}});
    const auto diag = build_diagram(d);
    REQUIRE(diag.M() == 1);
    CHECK(diag.segments[0].incident.size() == 3);
    CHECK(diag.segments[0].q == Polynomial({2.0, -3.0, 1.0}));
    std::vector<double> w;
    for (const auto& o : diag.segments[0].omegas) w.push_back(o.value.real());
    std::sort(w.begin(), w.end());
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(2.0));
  }

  TEST_CASE("predicted_resonances examples") {
    const cplx k = predicted_k(1.0, 1.0, Sign::Plus, 1);
    CHECK(rel(k, cplx{2.0 * kPi - kPi / 2.0, -std::log(2.0 * kPi)}) < 1e-15);

    const double d = 1.3;
    for (int t : {1, 5, 17}) {
      const cplx i{0.0, 1.0};
      const cplx expect = -2.0 * kPi * t / d - (i / d) * std::log(static_cast<double>(t)) + kPi / (2.0 * d) -
                          (i / d) * std::log(2.0 * kPi / d) + (i / d) * std::log(1.0 / d);
      CHECK(rel(predicted_k(1.0 / d, 1.0 / d, Sign::Minus, t), expect) < 1e-14);
    }
    // Negative real omega takes Arg = +pi.
    const cplx neg = predicted_k(1.0, cplx{-2.0, -0.0}, Sign::Plus, 3);
    const cplx pos = predicted_k(1.0, cplx{2.0, 0.0}, Sign::Plus, 3);
    CHECK(rel(neg - pos, cplx{-kPi, 0.0}) < 1e-14);

    const auto seq = predicted_resonances(0.5, 1.0, Sign::Plus, 3, 7);
    CHECK(seq.terms.size() == 5);
    CHECK(seq.terms.front().t == 3);
    CHECK_THROWS_AS(predicted_resonances(1.0, 0.0, Sign::Plus, 1, 3), Error);
    CHECK_THROWS_AS(predicted_resonances(0.0, 1.0, Sign::Plus, 1, 3), Error);
    CHECK_THROWS_AS(predicted_resonances(1.0, 1.0, Sign::Plus, 0, 3), Error);
  }

  TEST_CASE("two points: predicted chains approach the computed zeros") {
    const auto d = exppoly::build_characteristic_exppoly(two_points(1.0));
    const auto diag = build_diagram(d);
    const auto res = density::find_zeros_mirrored(rootfind::exppoly_in_k(d), 140.0, -12.0, 1.0);
    const auto seqs = all_predicted(diag, 1, 22);
    std::vector<double> resid;
    for (int t = 5; t <= 20; ++t) {
      double best = INFINITY;
      for (const auto& s : seqs)
        for (const auto& term : s.terms)
          if (term.t == t)
            for (const auto& z : res.zeros) best = std::min(best, std::abs(z.location - term.k));
      resid.push_back(best);
    }
    CHECK(resid.back() < 0.15);
    CHECK(resid.back() < resid.front());
    CHECK(spearman(std::vector<double>{5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20}, resid) < -0.9);
  }

  TEST_CASE("density_jumps examples") {
    const auto j2 = density_jumps(diagram_of(two_points(2.0)));
    REQUIRE(j2.size() == 1);
    CHECK(j2[0].height == doctest::Approx(4.0 / kPi).epsilon(1e-14));

    const auto j3 = density_jumps(diagram_of(case3()));
    REQUIRE(j3.size() == 2);
    CHECK(j3[0].height == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
    CHECK(j3[1].height == doctest::Approx(3.0 / kPi).epsilon(1e-12));
    CHECK(j3[0].height + j3[1].height == doctest::Approx(3.5 / kPi).epsilon(1e-12));

    const auto je = density_jumps(diagram_of(equilateral()));
    REQUIRE(je.size() == 1);
    CHECK(je[0].height == doctest::Approx(3.0 / kPi).epsilon(1e-12));
  }

  TEST_CASE("r_narrow examples") {
    std::mt19937_64 rng(40);
    for (int trial = 0; trial < 6; ++trial) {
      const auto c = random_config(rng, 4 + trial % 2);
      CHECK(r_narrow(diagram_of(c), geometry::size_profile(c)) == 2);
    }
    CHECK(r_narrow(diagram_of(equilateral()), geometry::size_profile(equilateral())) == 3);
    const auto t = tetrahedron();
    const auto dt = diagram_of(t);
    const int rt = r_narrow(dt, geometry::size_profile(t));
    CHECK(rt >= 3);
    CHECK(rt == dt.segments.back().r);
  }

  TEST_CASE("skew quadrilateral: -Size_4 cancels, r_narrow = 2") {
    const auto q = skew_quad();
    const auto sizes = geometry::size_profile(q);
    CHECK(sizes.sizes[4] == doctest::Approx(4.0 * sizes.diameter).epsilon(1e-12));
    const auto d = exppoly::build_characteristic_exppoly(q);
    CHECK_FALSE(d.has_frequency(-sizes.sizes[4], 1e-9 * sizes.diameter));
    const auto diag = build_diagram(d);
    // hand hull with D = diam, Size_3 = 2D + 2.2:
    // (-(2D + 4.2), 0) -> (-Size_3, 1) -> (-2D, 2) -> (0, 4)
    const double D = sizes.diameter;
    CHECK(sizes.sizes[3] == doctest::Approx(2.0 * D + 2.2).epsilon(1e-12));
    REQUIRE(diag.M() == 3);
    CHECK(diag.segments[0].mu == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(diag.segments[1].mu == doctest::Approx(1.0 / 2.2).epsilon(1e-9));
    CHECK(diag.segments[2].mu == doctest::Approx(1.0 / D).epsilon(1e-9));
    CHECK(r_narrow(diag, sizes) == 2);
  }

  TEST_CASE("check_A3_A5 examples") {
    const double c2 = 1.0, c1 = 3.0 + 2.0 * std::sqrt(2.0);
    const auto nw = nW(c1, c2);
    CHECK_FALSE(check_A3_A5(exppoly::build_characteristic_exppoly(nw), geometry::size_profile(nw)).A3);

    const auto c3 = case3();
    const auto r3 = check_A3_A5(exppoly::build_characteristic_exppoly(c3), geometry::size_profile(c3));
    CHECK(r3.A3);
    CHECK(r3.A4);
    CHECK(r3.A5);

    const auto col = collinear3();
    CHECK_FALSE(check_A3_A5(exppoly::build_characteristic_exppoly(col), geometry::size_profile(col)).A3);
  }

  TEST_CASE("strip_membership examples") {
    const double zeta = 1e6;
    const cplx k = cplx{0.0, 1.0} * zeta;
    CHECK(strip_membership(k, 1.0, std::abs(zeta + std::log(zeta))));
    CHECK(strip_membership(cplx{1e6, 0.0}, 0.0, 0.0));
    CHECK_THROWS_AS(strip_membership(k, 1.0, -1.0), Error);

    for (double mu : {0.5, 1.0, 2.0}) {
      const auto seq = predicted_resonances(mu, cplx{0.7, 0.4}, Sign::Plus, 1, 200);
      std::vector<cplx> first;
      for (int t = 0; t < 10; ++t) first.push_back(seq.terms[t].k);
      const double w = fit_strip_width(first, mu);
      for (std::size_t t = 9; t < seq.terms.size(); ++t) CHECK(strip_membership(seq.terms[t].k, mu, w));
    }
  }

  TEST_CASE("structure theorem invariants on random configs") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + trial % 5;
      const auto c = random_config(rng, n);
      const auto d = exppoly::build_characteristic_exppoly(c);
      const auto diag = build_diagram(d);
      const double diam = geometry::diameter(c);
      REQUIRE(diag.M() >= 1);
      CHECK(diag.M() <= n - 1);
      CHECK(std::abs(diag.segments.back().mu - 1.0 / diam) <= 1e-9 / diam);
      CHECK(diag.segments.back().r >= 2);
      int sum_r = 0;
      double sum_jumps = 0.0;
      for (std::size_t s = 0; s < diag.segments.size(); ++s) {
        const auto& seg = diag.segments[s];
        sum_r += seg.r;
        if (s > 0) CHECK(seg.mu < diag.segments[s - 1].mu);
        CHECK(seg.q.degree() == seg.r);
        CHECK(seg.q[0] != cplx{});
        int mult = 0;
        for (const auto& w : seg.omegas) {
          CHECK(std::abs(w.value) > 0.0);
          mult += w.multiplicity;
        }
        CHECK(mult == seg.r);
        Polynomial rebuilt = Polynomial::constant(seg.q.leading());
        for (const auto& w : seg.omegas)
          for (int m = 0; m < w.multiplicity; ++m) rebuilt = rebuilt * Polynomial({-w.value, 1.0});
        double scale = 0.0;
        for (const cplx x : seg.q.coeffs()) scale = std::max(scale, std::abs(x));
        for (int k = 0; k <= seg.r; ++k) CHECK(std::abs(rebuilt[k] - seg.q[k]) <= 1e-8 * scale);
        const auto& a = diag.points[seg.left];
        for (const auto& p : diag.points) {
          const double line = a.degree + seg.mu * (p.beta - a.beta);
          CHECK(p.degree <= line + 1e-12 * std::max(1.0, std::abs(line)) + 1e-9);
        }
        sum_jumps += (diag.points[seg.right].beta - diag.points[seg.left].beta) / kPi;
      }
      CHECK(sum_r <= n);
      CHECK(sum_r == n - diag.points.front().degree);
      CHECK(diag.points.back().beta == 0.0);
      CHECK(diag.points.back().degree == n);
      CHECK(std::abs(sum_jumps - exppoly::effective_size(d) / kPi) <= 1e-12 * std::max(1.0, sum_jumps));
    }
  }
}
