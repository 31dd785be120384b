// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>

#include "ratlas/simd/eval_kernels.hpp"

namespace ratlas::simd {

namespace {

// e^x for x <= 0. Inputs below -708 return 0.
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lo);

  const __m256d fx = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(1.42860682030941723212E-6), x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_fmadd_pd(_mm256_set1_pd(1.26177193074810590878E-4), xx,
                               _mm256_set1_pd(3.02994407707441961300E-2));
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910E-1));
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_fmadd_pd(_mm256_set1_pd(3.00198505138664455042E-6), xx,
                               _mm256_set1_pd(2.52448340349684104192E-3));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766E-1));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000009E0));

  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  __m256i n = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(fx));
  n = _mm256_slli_epi64(_mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52);
  r = _mm256_mul_pd(r, _mm256_castsi256_pd(n));
  return _mm256_andnot_pd(underflow, r);
}

inline __m256d eq(__m256d a, double b) { return _mm256_cmp_pd(a, _mm256_set1_pd(b), _CMP_EQ_OQ); }

// Octant reduction with a three-part pi/4, then the minimax polynomials on
// [-pi/4, pi/4].
inline void sincos(__m256d x, __m256d& s, __m256d& c) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d x_sign = _mm256_and_pd(x, sign_bit);
  const __m256d ax = _mm256_andnot_pd(sign_bit, x);

  __m256d j = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(1.27323954473516268615)));
  j = _mm256_mul_pd(_mm256_floor_pd(_mm256_mul_pd(_mm256_add_pd(j, _mm256_set1_pd(1.0)),
                                                  _mm256_set1_pd(0.5))),
                    _mm256_set1_pd(2.0));
  __m256d z = _mm256_fnmadd_pd(j, _mm256_set1_pd(7.85398125648498535156E-1), ax);
  z = _mm256_fnmadd_pd(j, _mm256_set1_pd(3.77489470793079817668E-8), z);
  z = _mm256_fnmadd_pd(j, _mm256_set1_pd(2.69515142907905952645E-15), z);

  const __m256d j8 = _mm256_fnmadd_pd(
      _mm256_floor_pd(_mm256_mul_pd(j, _mm256_set1_pd(0.125))), _mm256_set1_pd(8.0), j);
  const __m256d swap = _mm256_or_pd(eq(j8, 2.0), eq(j8, 6.0));
  const __m256d sin_neg = _mm256_cmp_pd(j8, _mm256_set1_pd(3.0), _CMP_GT_OQ);
  const __m256d cos_neg = _mm256_or_pd(eq(j8, 2.0), eq(j8, 4.0));

  const __m256d zz = _mm256_mul_pd(z, z);
  __m256d ps = _mm256_set1_pd(1.58962301576546568060E-10);
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-2.50507477628578072866E-8));
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(2.75573136213857245213E-6));
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.98412698295895385996E-4));
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(8.33333333332211858878E-3));
  ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.66666666666666307295E-1));
  ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), ps, z);

  __m256d pc = _mm256_set1_pd(-1.13585365213876817300E-11);
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.08757008419747316778E-9));
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-2.75573141792967388112E-7));
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.48015872888517045348E-5));
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-1.38888888888730564116E-3));
  pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(4.16666666666665929218E-2));
  pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), pc,
                       _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

  s = _mm256_blendv_pd(ps, pc, swap);
  c = _mm256_blendv_pd(pc, ps, swap);
  s = _mm256_xor_pd(s, _mm256_xor_pd(_mm256_and_pd(sin_neg, sign_bit), x_sign));
  c = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign_bit));
}

void eval_block(const PackedExpPoly& d, const double* re_p, const double* im_p, double* out_re,
                double* out_im, double* out_scale) {
  const __m256d re = _mm256_loadu_pd(re_p);
  const __m256d im = _mm256_loadu_pd(im_p);
  const __m256d s = _mm256_max_pd(_mm256_mul_pd(_mm256_set1_pd(d.frequency.front()), re),
                                  _mm256_mul_pd(_mm256_set1_pd(d.frequency.back()), re));
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  for (std::size_t j = 0; j < d.frequency.size(); ++j) {
    __m256d h_re = _mm256_setzero_pd();
    __m256d h_im = _mm256_setzero_pd();
    for (std::size_t k = d.offset[j + 1]; k-- > d.offset[j];) {
      const __m256d t_re = _mm256_fmsub_pd(h_re, re, _mm256_fmsub_pd(h_im, im, _mm256_set1_pd(d.coeff_re[k])));
      const __m256d t_im = _mm256_fmadd_pd(h_re, im, _mm256_fmadd_pd(h_im, re, _mm256_set1_pd(d.coeff_im[k])));
      h_re = t_re;
      h_im = t_im;
    }
    const __m256d beta = _mm256_set1_pd(d.frequency[j]);
    const __m256d mag = exp_nonpositive(_mm256_fmsub_pd(beta, re, s));
    __m256d sn, cs;
    sincos(_mm256_mul_pd(beta, im), sn, cs);
    const __m256d e_re = _mm256_mul_pd(mag, cs);
    const __m256d e_im = _mm256_mul_pd(mag, sn);
    acc_re = _mm256_add_pd(acc_re, _mm256_fmsub_pd(h_re, e_re, _mm256_mul_pd(h_im, e_im)));
    acc_im = _mm256_add_pd(acc_im, _mm256_fmadd_pd(h_re, e_im, _mm256_mul_pd(h_im, e_re)));
  }
  _mm256_storeu_pd(out_re, acc_re);
  _mm256_storeu_pd(out_im, acc_im);
  _mm256_storeu_pd(out_scale, s);
}

}  // namespace

void eval_scaled_avx2(const PackedExpPoly& d, const double* re, const double* im, std::size_t n,
                      double* out_re, double* out_im, double* out_scale) {
  if (d.frequency.empty()) {
    std::fill(out_re, out_re + n, 0.0);
    std::fill(out_im, out_im + n, 0.0);
    std::fill(out_scale, out_scale + n, 0.0);
    return;
  }
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4) eval_block(d, re + p, im + p, out_re + p, out_im + p, out_scale + p);
  if (p == n) return;

  // Pad the tail to one full block.
  double pr[4] = {0, 0, 0, 0}, pi[4] = {0, 0, 0, 0}, orr[4], oi[4], os[4];
  for (std::size_t q = p; q < n; ++q) {
    pr[q - p] = re[q];
    pi[q - p] = im[q];
  }
  eval_block(d, pr, pi, orr, oi, os);
  for (std::size_t q = p; q < n; ++q) {
    out_re[q] = orr[q - p];
    out_im[q] = oi[q - p];
    out_scale[q] = os[q - p];
  }
}

}  // namespace ratlas::simd
