#include <algorithm>
#include <cmath>

#include "ratlas/simd/eval_kernels.hpp"

namespace ratlas::simd {

void eval_scaled_scalar(const PackedExpPoly& d, const double* re, const double* im, std::size_t n,
                        double* out_re, double* out_im, double* out_scale) {
  const std::size_t terms = d.frequency.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (terms == 0) {
      out_re[p] = out_im[p] = out_scale[p] = 0.0;
      continue;
    }
    // beta * re is linear in beta, so the maximum sits at an extreme frequency.
    const double s = std::max(d.frequency.front() * re[p], d.frequency.back() * re[p]);
    double acc_re = 0.0, acc_im = 0.0;
    for (std::size_t j = 0; j < terms; ++j) {
      double h_re = 0.0, h_im = 0.0;
      for (std::size_t k = d.offset[j + 1]; k-- > d.offset[j];) {
        const double t_re = h_re * re[p] - h_im * im[p] + d.coeff_re[k];
        const double t_im = h_re * im[p] + h_im * re[p] + d.coeff_im[k];
        h_re = t_re;
        h_im = t_im;
      }
      const double beta = d.frequency[j];
      const double mag = std::exp(beta * re[p] - s);
      const double e_re = mag * std::cos(beta * im[p]);
      const double e_im = mag * std::sin(beta * im[p]);
      acc_re += h_re * e_re - h_im * e_im;
      acc_im += h_re * e_im + h_im * e_re;
    }
    out_re[p] = acc_re;
    out_im[p] = acc_im;
    out_scale[p] = s;
  }
}

}  // namespace ratlas::simd
