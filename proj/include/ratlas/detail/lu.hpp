#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "ratlas/common.hpp"

namespace ratlas::detail {

/// Determinant by Gaussian elimination with partial pivoting. An exactly
/// zero pivot column yields 0 rather than NaN.
inline cplx lu_determinant(Eigen::MatrixXcd a) {
  const Eigen::Index n = a.rows();
  cplx det = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    if (best == 0.0) return cplx{};
    if (p != k) {
      a.row(k).swap(a.row(p));
      det = -det;
    }
    det *= a(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      if (f == cplx{}) continue;
      a.row(i).tail(n - k - 1) -= f * a.row(k).tail(n - k - 1);
    }
  }
  return det;
}

}  // namespace ratlas::detail
