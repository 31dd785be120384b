#pragma once

#include <cstddef>
#include <vector>

namespace ratlas {
class ExpPoly;
}

namespace ratlas::simd {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);

/// Whether the kernel was compiled in and the CPU supports it.
bool isa_available(Isa isa);

/// Best available ISA, unless RESONANCE_ATLAS_SIMD=scalar forces the
/// reference kernels. Overridable with set_isa (tests).
Isa active_isa();
void set_isa(Isa isa);

/// Structure-of-arrays copy of an ExpPoly. Coefficients of term j occupy
/// [offset[j], offset[j+1]), lowest degree first.
struct PackedExpPoly {
  std::vector<double> frequency;
  std::vector<std::size_t> offset;
  std::vector<double> coeff_re;
  std::vector<double> coeff_im;
};

PackedExpPoly pack(const ExpPoly& d);

/// For each point zeta_p = re[p] + i im[p]: s_p = max_j beta_j re[p] and
/// out = sum_j P_j(zeta_p) e^{beta_j zeta_p - s_p}.
using ScaledEvalKernel = void (*)(const PackedExpPoly& d, const double* re, const double* im,
                                  std::size_t n, double* out_re, double* out_im, double* out_scale);

void eval_scaled_scalar(const PackedExpPoly& d, const double* re, const double* im, std::size_t n,
                        double* out_re, double* out_im, double* out_scale);

#if defined(RATLAS_HAVE_AVX2)
void eval_scaled_avx2(const PackedExpPoly& d, const double* re, const double* im, std::size_t n,
                      double* out_re, double* out_im, double* out_scale);
#endif

ScaledEvalKernel scaled_eval_kernel(Isa isa);

}  // namespace ratlas::simd
