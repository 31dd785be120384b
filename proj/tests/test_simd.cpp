#include <doctest.h>

#include <random>

#include "ratlas/exppoly.hpp"
#include "ratlas/rootfind.hpp"
#include "ratlas/simd/eval_kernels.hpp"
#include "support.hpp"

using namespace ratlas;
using namespace testsupport;

namespace {

struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::set_isa(saved); }
};

std::vector<ScaledComplex> run(simd::Isa isa, const ExpPoly& d, const std::vector<cplx>& z) {
  simd::set_isa(isa);
  std::vector<ScaledComplex> out(z.size());
  exppoly::eval_scaled_batch(d, z, out);
  return out;
}

double scaled_rel(const ScaledComplex& a, const ScaledComplex& b) {
  // Compare a.m e^{a.s} with b.m e^{b.s} without leaving the double range.
  const double s = std::max(a.log_scale, b.log_scale);
  const cplx x = a.mantissa * std::exp(a.log_scale - s), y = b.mantissa * std::exp(b.log_scale - s);
  return rel(x, y);
}

// |a - b| against sum_j |P_j(z)| e^{beta_j Re z - s}: the size of the terms
// being summed, which bounds what any summation order can reproduce.
double term_rel(const ExpPoly& d, cplx z, const ScaledComplex& a, const ScaledComplex& b) {
  const double s = std::max(a.log_scale, b.log_scale);
  double mag = 0.0;
  for (const auto& t : d.terms()) mag += std::abs(t.poly(z)) * std::exp(t.frequency * z.real() - s);
  const cplx x = a.mantissa * std::exp(a.log_scale - s), y = b.mantissa * std::exp(b.log_scale - s);
  return std::abs(x - y) / std::max(mag, 1e-300);
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar kernel matches eval_scaled") {
    IsaGuard g;
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 10; ++trial) {
      const auto d = exppoly::build_characteristic_exppoly(random_config(rng, 2 + trial % 5));
      std::vector<cplx> z;
      for (int p = 0; p < 37; ++p) z.push_back({u(rng), 10.0 * u(rng)});
      const auto out = run(simd::Isa::Scalar, d, z);
      for (std::size_t p = 0; p < z.size(); ++p) CHECK(scaled_rel(out[p], exppoly::eval_scaled(d, z[p])) < 1e-13);
    }
  }

  TEST_CASE("avx2 kernel matches the scalar kernel") {
    IsaGuard g;
    if (!simd::isa_available(simd::Isa::Avx2)) {
      MESSAGE("AVX2 not available on this machine; equivalence not exercised");
      return;
    }
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 40; ++trial) {
      const auto d = exppoly::build_characteristic_exppoly(random_config(rng, 2 + trial % 6));
      std::vector<cplx> z;
      const int n = 1 + trial % 11;  // exercises every tail length
      const double span = trial % 3 == 0 ? 400.0 : 8.0;
      for (int p = 0; p < n; ++p) z.push_back({span * u(rng), span * u(rng)});
      const auto a = run(simd::Isa::Scalar, d, z);
      const auto b = run(simd::Isa::Avx2, d, z);
      for (int p = 0; p < n; ++p) {
        CHECK(a[p].log_scale == b[p].log_scale);
        // phase arguments reach |beta Im z| ~ 4e3, where one ulp is ~5e-13
        const double phase = std::max(std::abs(d.front().frequency), std::abs(d.back().frequency)) * std::abs(z[p].imag());
        CHECK(term_rel(d, z[p], a[p], b[p]) < 1e-14 * (4.0 + phase));
      }
    }
  }

  TEST_CASE("avx2 handles terms far below the scale") {
    IsaGuard g;
    if (!simd::isa_available(simd::Isa::Avx2)) return;
    const ExpPoly d({{-50.0, Polynomial::constant(1.0)}, {0.0, Polynomial({1.0, 2.0})}});
    std::vector<cplx> z{{30.0, 1.0}, {-30.0, 2.0}, {0.0, 0.0}, {800.0, -3.0}, {-800.0, 5.0}};
    const auto a = run(simd::Isa::Scalar, d, z);
    const auto b = run(simd::Isa::Avx2, d, z);
    for (std::size_t p = 0; p < z.size(); ++p) CHECK(scaled_rel(a[p], b[p]) < 1e-12);
  }

  TEST_CASE("zero counts agree between kernels") {
    IsaGuard g;
    const auto d = exppoly::build_characteristic_exppoly(equilateral());
    const auto rect = rootfind::SearchRect::from_bounds(0.5, 30.0, -8.0, 0.5);
    simd::set_isa(simd::Isa::Scalar);
    const int a = rootfind::count_zeros(rootfind::exppoly_in_k(d), rect);
    simd::set_isa(simd::isa_available(simd::Isa::Avx2) ? simd::Isa::Avx2 : simd::Isa::Scalar);
    const int b = rootfind::count_zeros(rootfind::exppoly_in_k(d), rect);
    CHECK(a == b);
    CHECK(a > 0);
  }

  TEST_CASE("set_isa falls back to scalar when unavailable") {
    IsaGuard g;
    simd::set_isa(simd::Isa::Avx2);
    CHECK((simd::active_isa() == simd::Isa::Avx2) == simd::isa_available(simd::Isa::Avx2));
    CHECK(std::string(simd::isa_name(simd::Isa::Scalar)) == "scalar");
  }
}
