#pragma once

#include <initializer_list>
#include <vector>

#include "ratlas/common.hpp"

namespace ratlas {

/// Dense complex polynomial, lowest degree first. The zero polynomial has an
/// empty coefficient list; otherwise the leading coefficient is nonzero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs);

  static Polynomial constant(cplx c) { return Polynomial({c}); }
  static Polynomial monomial(cplx c, int degree);

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }
  cplx operator[](int k) const {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : cplx{};
  }

  cplx operator()(cplx z) const;

  Polynomial derivative() const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator*=(cplx s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

/// Roots of p (degree >= 1) from the eigenvalues of its companion matrix,
/// each polished by one Newton step. Repeated roots appear repeatedly.
std::vector<cplx> polynomial_roots(const Polynomial& p);

struct RootWithMultiplicity {
  cplx value;
  int multiplicity = 1;
};

/// Groups roots that lie within `tol * max(1, |root|)` of each other and
/// replaces each group by its centroid.
std::vector<RootWithMultiplicity> cluster_roots(const std::vector<cplx>& roots, double tol = 1e-7);

}  // namespace ratlas
