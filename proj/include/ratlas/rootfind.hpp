#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ratlas/common.hpp"
#include "ratlas/exppoly.hpp"

namespace ratlas::rootfind {

/// Axis-aligned rectangle center ± (half_re, half_im).
struct SearchRect {
  cplx center;
  double half_re = 1.0;
  double half_im = 1.0;

  static SearchRect from_bounds(double re_min, double re_max, double im_min, double im_max);
  double re_min() const { return center.real() - half_re; }
  double re_max() const { return center.real() + half_re; }
  double im_min() const { return center.imag() - half_im; }
  double im_max() const { return center.imag() + half_im; }
  bool contains(cplx z, double slack = 0.0) const;
  double diameter() const;
};

/// Analytic function given in scaled form (mantissa * e^{log_scale}). The
/// derivative and batch forms are optional; without a derivative the
/// refinement falls back to secant steps. All callables must be safe to
/// call concurrently.
struct AnalyticFunction {
  std::function<ScaledComplex(cplx)> value;
  std::function<ScaledPair(cplx)> with_derivative;
  std::function<void(std::span<const cplx>, std::span<ScaledComplex>)> batch;
  /// Rough bound on |d arg f / dz| along a boundary; sets the initial
  /// sampling density.
  double phase_rate = 1.0;

  void evaluate(std::span<const cplx> z, std::span<ScaledComplex> out) const;
};

AnalyticFunction make_function(std::function<cplx(cplx)> f, std::function<cplx(cplx)> df = {},
                               double phase_rate = 1.0);

/// f(zeta) = D(zeta).
AnalyticFunction exppoly_in_zeta(const ExpPoly& d);
/// f(k) = D(-i k), the resonance variable.
AnalyticFunction exppoly_in_k(const ExpPoly& d);

struct CountOptions {
  int min_samples_per_edge = 32;
  std::size_t boundary_step_cap = std::size_t{1} << 22;  ///< total boundary samples
  int max_refine_depth = 40;
  int inflate_retries = 5;
};

/// Winding number of f along the rectangle boundary. When the boundary is
/// too close to a zero the rectangle is inflated by 1 + 1e-6 j, j = 1..5,
/// and the rectangle actually used is written to *used.
int count_zeros(const AnalyticFunction& f, const SearchRect& rect, CountOptions opts = {},
                SearchRect* used = nullptr);

struct Zero {
  cplx location;
  int multiplicity = 1;
};

struct ResonanceMultiset {
  std::vector<Zero> zeros;  ///< sorted by (re, im)
  SearchRect region;
  double residual_bound = 0.0;

  int total() const;
};

struct FindOptions {
  double tol = 1e-9;  ///< clustering and cell-size tolerance
  int max_depth = 40;
  CountOptions count;
};

ResonanceMultiset find_zeros(const AnalyticFunction& f, const SearchRect& rect, FindOptions opts = {});

/// Damped Newton (secant without a derivative) until
/// |f| <= tol |f'| max(1, |z|); at most 100 iterations.
cplx refine(const AnalyticFunction& f, cplx seed, double tol = 1e-12);

}  // namespace ratlas::rootfind
