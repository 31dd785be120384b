#pragma once

#include <map>
#include <vector>

#include "ratlas/common.hpp"
#include "ratlas/exppoly.hpp"
#include "ratlas/polynomial.hpp"

namespace ratlas {

/// F(z) = sum_l C_l(z) e^{i b_l z}, frequencies strictly increasing, no zero
/// coefficient polynomial.
class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(ExpPoly terms) : terms_(std::move(terms)) {}

  /// Same (b_l, C_l) list as ExpPoly terms; the exponent is i b z here.
  const ExpPoly& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  cplx operator()(cplx z) const;

  /// D(zeta) = e^{b_0 zeta} F(i zeta): frequencies b_0 - b_l <= 0,
  /// coefficients C_l(i zeta). Zeros satisfy k = i zeta.
  ExpPoly to_zeta() const;

  bool constant_coefficients() const;

 private:
  ExpPoly terms_;
};

namespace symbolic {

/// Exact exponent bookkeeping: a monomial e^{i z (n . rho)} is keyed by the
/// integer vector n over a fixed list of lengths rho.
using Key = std::vector<int>;

class Sum {
 public:
  Sum() = default;
  static Sum constant(cplx c, std::size_t dim);
  static Sum monomial(Polynomial coeff, Key key);

  /// Coefficient plus, per degree, a bound on the sum of magnitudes that
  /// went into it (judges floating-point cancellation).
  struct Entry {
    Polynomial poly;
    std::vector<double> bound;
  };

  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Entry>& terms() const { return terms_; }

  Sum& operator+=(const Sum& rhs);
  friend Sum operator+(Sum a, const Sum& b) { return a += b; }
  friend Sum operator*(const Sum& a, const Sum& b);
  Sum operator-() const;

  cplx eval(cplx z, const std::vector<double>& lengths) const;

  /// Collapses to an ExpSum with b = n . rho, merging equal frequencies and
  /// dropping coefficients below coeff_tol of their largest contribution.
  exppoly::Canonical canonical(const std::vector<double>& lengths, double freq_tol, double coeff_tol) const;

 private:
  std::map<Key, Entry> terms_;
};

/// Determinant by Laplace expansion along rows, memoized on the remaining
/// column subset. Dimension cap 12.
Sum determinant(const std::vector<std::vector<Sum>>& m);

}  // namespace symbolic
}  // namespace ratlas
