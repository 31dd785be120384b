#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ratlas/common.hpp"
#include "ratlas/geometry.hpp"
#include "ratlas/polynomial.hpp"

namespace ratlas {

/// One term P(zeta) e^{frequency * zeta}.
struct ExpTerm {
  double frequency = 0.0;
  Polynomial poly;
};

/// Exponential polynomial sum_j P_j(zeta) e^{beta_j zeta} in canonical form:
/// frequencies strictly increasing, no zero polynomial.
class ExpPoly {
 public:
  ExpPoly() = default;
  /// Throws Error(Input) if `terms` is not canonical.
  explicit ExpPoly(std::vector<ExpTerm> terms);

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const ExpTerm& front() const { return terms_.front(); }
  const ExpTerm& back() const { return terms_.back(); }

  /// Polynomial attached to `frequency` (within `tol`), or the zero
  /// polynomial when the frequency is absent.
  Polynomial at(double frequency, double tol) const;
  bool has_frequency(double frequency, double tol) const { return !at(frequency, tol).is_zero(); }

 private:
  std::vector<ExpTerm> terms_;
};

/// Value mantissa * e^{log_scale}; the real scale keeps the phase exact.
struct ScaledComplex {
  cplx mantissa;
  double log_scale = 0.0;

  cplx value() const { return mantissa * std::exp(log_scale); }
};

/// Value and derivative sharing one scale factor.
struct ScaledPair {
  cplx value;
  cplx derivative;
  double log_scale = 0.0;
};

namespace exppoly {

/// Candidate term before canonicalization. `magnitude[k]` is the largest
/// magnitude that was summed into coefficient k (defaults to |poly[k]|);
/// cancellation is judged against it.
struct RawTerm {
  double frequency = 0.0;
  Polynomial poly;
  std::vector<double> magnitude;
};

struct FrequencyReport {
  double frequency = 0.0;
  int contributions = 0;
  bool cancelled = false;          ///< every coefficient dropped
  int degree = -1;                 ///< surviving degree, -1 when cancelled
  std::vector<int> dropped_degrees;
  bool borderline = false;         ///< some coefficient within 1e3 x coeff_tol of the threshold
};

struct Canonical {
  ExpPoly poly;
  std::vector<FrequencyReport> report;

  std::vector<double> cancelled_frequencies() const;
};

/// Merges candidate frequencies closer than `freq_tol` (absolute), drops
/// coefficients whose merged magnitude is below `coeff_tol` times the
/// largest contribution, and reports what cancelled.
Canonical canonicalize(std::vector<RawTerm> raw, double freq_tol, double coeff_tol);

struct ExpansionOptions {
  double freq_tol = 1e-9;   ///< relative to diam Y
  double coeff_tol = 1e-9;  ///< relative to the largest contribution
};

/// Leibniz expansion of (-4 pi)^N det Gamma(i zeta) over S_N, grouped by
/// (fixed-point set, frequency) before any tolerance-based merging.
std::vector<RawTerm> characteristic_terms(const geometry::PointConfig& config);

Canonical characteristic_expansion(const geometry::PointConfig& config, ExpansionOptions opts = {});

/// D(zeta) = (-4 pi)^N det Gamma_{a,Y}(i zeta) in canonical form.
ExpPoly build_characteristic_exppoly(const geometry::PointConfig& config, ExpansionOptions opts = {});

/// D(zeta). Saturates to DBL_MAX in magnitude (phase kept) and sets
/// *overflow when the value leaves the double range.
cplx eval(const ExpPoly& d, cplx zeta, bool* overflow = nullptr);

ScaledComplex eval_scaled(const ExpPoly& d, cplx zeta);

/// Batched eval_scaled through the runtime-selected kernel.
void eval_scaled_batch(const ExpPoly& d, std::span<const cplx> zeta, std::span<ScaledComplex> out);

ScaledPair eval_with_derivative(const ExpPoly& d, cplx zeta);

/// (beta, P) -> (beta, beta P + P').
ExpPoly derivative(const ExpPoly& d);

Eigen::MatrixXcd gamma_matrix(const geometry::PointConfig& config, cplx z);

/// det Gamma_{a,Y}(z) by LU with partial pivoting; 0 for a singular matrix.
cplx det_gamma(const geometry::PointConfig& config, cplx z);

/// Frequency span -beta_0 (the effective size W(a,Y) for determinants).
double effective_size(const ExpPoly& d);

}  // namespace exppoly
}  // namespace ratlas
