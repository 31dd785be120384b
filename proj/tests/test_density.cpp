#include <doctest.h>

#include <random>

#include "ratlas/density.hpp"
#include "ratlas/qgraph.hpp"
#include "support.hpp"

using namespace ratlas;
using namespace ratlas::density;
using namespace testsupport;
using rootfind::SearchRect;
using rootfind::Zero;

namespace {

ResonanceMultiset synthetic(std::vector<Zero> zeros, double half = 100.0) {
  ResonanceMultiset r;
  r.zeros = std::move(zeros);
  r.region = SearchRect::from_bounds(-half, half, -half, 1.0);
  return r;
}

ResonanceMultiset point_zeros(const geometry::PointConfig& c, double re_max, double im_min) {
  const auto d = exppoly::build_characteristic_exppoly(c);
  return find_zeros_mirrored(rootfind::exppoly_in_k(d), re_max, im_min, 0.5);
}

double ball_slope(const ResonanceMultiset& res, double R_max) {
  return fit_density(log_profile(res, kMuInfinity, geometric_grid(R_max / 5.0, R_max))).slope;
}

}  // namespace

TEST_SUITE("density") {
  TEST_CASE("counting examples") {
    CHECK(count_ball(synthetic({}), 50.0) == 0);
    const auto r = synthetic({{{1.0, 0.0}, 1}, {{0.0, 2.0}, 2}});
    CHECK(count_ball(r, 1.5) == 1);
    CHECK(count_ball(r, 2.0) == 3);
    CHECK_THROWS_AS(count_ball(r, 200.0), Error);

    const auto below = synthetic({{{3.0, -1.0}, 1}, {{-7.0, -0.2}, 2}, {{0.0, -4.0}, 1}});
    CHECK(count_log(below, -0.5, 50.0) == 0);
    CHECK(count_log(below, kMuInfinity, 50.0) == count_ball(below, 50.0));
    CHECK(count_log(below, kMuInfinity, 5.0) == 2);
    for (double mu : {0.0, 0.3, 1.0})
      for (double R : {3.0, 8.0, 50.0}) CHECK(count_strip(below, mu, 0.0, R) == count_log(below, mu, R));
    CHECK(count_strip(below, 0.0, 10.0, 50.0) == count_ball(below, 50.0));
    // -mu ln(|Re k| + 1) - gamma <= Im k
    CHECK(count_log(below, 1.0, 50.0) == 3);
    CHECK(count_log(below, 0.1, 50.0) == 2);
    CHECK(count_strip(below, 1.0, 2.0, 50.0) == 3);
    CHECK(count_strip(below, 1.0, 4.0, 50.0) == 4);
  }

  TEST_CASE("fit_density") {
    std::vector<Sample> s;
    for (double R : geometric_grid(10.0, 100.0)) s.push_back({0.0, 0.0, R, static_cast<int>(std::floor(3.0 * R + 2.0))});
    const Fit f = fit_density(s);
    CHECK(std::abs(f.slope - 3.0) < 2.0 / 100.0);
    const auto g = geometric_grid(10.0, 100.0, 1.3);
    CHECK(g.front() == 10.0);
    CHECK(g.back() == 100.0);
    for (std::size_t j = 1; j + 1 < g.size(); ++j) CHECK(g[j] == doctest::Approx(g[j - 1] * 1.3));

    std::vector<Sample> few(s.begin(), s.begin() + 4);
    CHECK_THROWS_AS(fit_density(few), Error);
    std::vector<Sample> narrow;
    for (double R : {10.0, 12.0, 14.0, 16.0, 20.0, 30.0}) narrow.push_back({0.0, 0.0, R, 1});
    CHECK_THROWS_AS(fit_density(narrow), Error);
  }

  TEST_CASE("two points, d = 1: total density 2/pi") {
    const auto res = point_zeros(two_points(1.0), 100.0, -8.0);
    CHECK(certified_radius(res) == doctest::Approx(100.0));
    const double slope = ball_slope(res, 100.0);
    CHECK(std::abs(slope - 2.0 / kPi) < 0.1 * 2.0 / kPi);
    CHECK(std::abs(count_ball(res, 100.0) / 100.0 - 2.0 / kPi) < 0.1 * 2.0 / kPi);
  }

  TEST_CASE("equilateral: total density 3/pi") {
    const auto res = point_zeros(equilateral(), 100.0, -10.0);
    CHECK(std::abs(ball_slope(res, 100.0) - 3.0 / kPi) < 0.1 * 3.0 / kPi);
  }

  TEST_CASE("Case 3 triangle: logarithmic densities split by slope") {
    const auto res = point_zeros(case3(), 150.0, -24.0);
    const auto radii = geometric_grid(30.0, 150.0);
    const double d1 = fit_density(log_profile(res, 1.0, radii)).slope;
    const double d3 = fit_density(log_profile(res, 3.0, radii)).slope;
    CHECK(std::abs(d1 - 3.0 / kPi) < 0.15 * 3.0 / kPi);
    CHECK(std::abs(d3 - 3.5 / kPi) < 0.15 * 3.5 / kPi);
    CHECK(fit_density(log_profile(res, 0.3, radii)).slope < 0.5 * d1);
  }

  TEST_CASE("lasso: strip density jumps at gamma = ln 3") {
    qgraph::GraphSpec g;
    g.vertices = {"a"};
    g.edges = {{0, 0, 1.0}};
    g.leads = {0};
    const auto res = qgraph::graph_resonances(g, SearchRect::from_bounds(-130.0, 130.0, -2.0, 0.5));
    const auto radii = geometric_grid(25.0, 125.0);
    const double below = fit_density(strip_profile(res, 0.0, std::log(3.0) - 0.05, radii)).slope;
    const double above = fit_density(strip_profile(res, 0.0, std::log(3.0) + 0.05, radii)).slope;
    CHECK(std::abs(below - 1.0 / kPi) < 0.05 / kPi);
    CHECK(std::abs(above - 2.0 / kPi) < 0.05 / kPi);
  }

  TEST_CASE("monotonicity of counting functions") {
    std::mt19937_64 rng(60);
    std::uniform_real_distribution<double> re(-90, 90), im(-12, 0.5);
    std::vector<Zero> zs;
    for (int j = 0; j < 300; ++j) zs.push_back({{re(rng), im(rng)}, 1 + j % 3});
    const auto r = synthetic(zs);
    const std::vector<double> mus{-0.5, 0.0, 0.2, 0.5, 1.0, 2.0, 5.0, kMuInfinity};
    const std::vector<double> Rs{5, 10, 20, 40, 80, 100};
    for (std::size_t a = 0; a < mus.size(); ++a)
      for (std::size_t b = 0; b < Rs.size(); ++b) {
        if (a + 1 < mus.size()) CHECK(count_log(r, mus[a], Rs[b]) <= count_log(r, mus[a + 1], Rs[b]));
        if (b + 1 < Rs.size()) CHECK(count_log(r, mus[a], Rs[b]) <= count_log(r, mus[a], Rs[b + 1]));
      }
    for (double g = 0.0; g < 12.0; g += 0.5) CHECK(count_strip(r, 0.3, g, 90.0) <= count_strip(r, 0.3, g + 0.5, 90.0));
  }

  TEST_CASE("match_chains: exact synthetic zeros") {
    const auto seq = diagram::predicted_resonances(1.0, cplx{1.0, 0.0}, diagram::Sign::Plus, 1, 12);
    std::vector<Zero> zs;
    for (const auto& t : seq.terms) zs.push_back({t.k, 1});
    const auto rep = match_chains(synthetic(zs), {seq});
    REQUIRE(rep.chains.size() == 1);
    CHECK(rep.chains[0].matched.size() == seq.terms.size());
    for (const auto& m : rep.chains[0].matched) CHECK(m.residual == 0.0);
    CHECK(rep.unmatched_zeros.empty());
    CHECK(rep.chains[0].smallest_t == 1);
  }

  TEST_CASE("match_chains: two points, d = 1") {
    const auto c = two_points(1.0);
    const auto diag = diagram::build_diagram(exppoly::build_characteristic_exppoly(c));
    const auto res = point_zeros(c, 260.0, -9.0);
    const auto rep = match_chains(res, diagram::all_predicted(diag, 1, 45));
    REQUIRE(rep.chains.size() == 4);
    for (const auto& ch : rep.chains) {
      std::vector<double> t, r;
      for (const auto& m : ch.matched)
        if (m.t >= 10 && m.t <= 40) {
          t.push_back(m.t);
          r.push_back(m.residual);
        }
      REQUIRE(t.size() == 31);
      CHECK(spearman(t, r) < -0.9);
    }
    for (const auto& z : rep.unmatched_zeros) CHECK(std::abs(z.location) <= 15.0);
  }

  TEST_CASE("Weyl check on random configs") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 2; ++trial) {
      const auto c = random_config(rng, 3, true);
      const auto d = exppoly::build_characteristic_exppoly(c);
      const auto diag = diagram::build_diagram(d);
      const double W = exppoly::effective_size(d);
      const double R = 60.0 * std::max(1.0, 1.0 / diag.segments.back().mu);
      const auto res = find_zeros_mirrored(rootfind::exppoly_in_k(d), R, -40.0, 0.5);
      CHECK(std::abs(ball_slope(res, R) * kPi / W - 1.0) < 0.1);
    }
  }

  TEST_CASE("case 3: jump near mu = 2 moves toward the slope as R grows") {
    // the chain sits at Im k ~ -2 ln|k| + const, so the fitted location
    // converges only logarithmically
    const auto c = case3();
    const auto diag = diagram::build_diagram(exppoly::build_characteristic_exppoly(c));
    const auto res = point_zeros(c, 1000.0, -24.0);
    auto upper_jump = [&](double R) {
      double loc = 0.0;
      for (const auto& j : detect_jumps(res, diag, geometric_grid(R / 5.0, R)).jumps)
        if (j.predicted_mu > 1.0) loc = j.location;
      return loc;
    };
    const double near = upper_jump(150.0), far = upper_jump(1000.0);
    CHECK(near > 0.0);
    CHECK(std::abs(far / 2.0 - 1.0) < std::abs(near / 2.0 - 1.0));
    CHECK(std::abs(far / 2.0 - 1.0) <= 0.15);
  }
}
