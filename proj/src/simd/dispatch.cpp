#include <atomic>
#include <cstdlib>
#include <cstring>

#include "ratlas/exppoly.hpp"
#include "ratlas/simd/eval_kernels.hpp"

namespace ratlas::simd {

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(RATLAS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa detect() {
  if (const char* env = std::getenv("RESONANCE_ATLAS_SIMD"); env && std::strcmp(env, "scalar") == 0)
    return Isa::Scalar;
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

}  // namespace

Isa active_isa() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) isa = Isa::Scalar;
  selected().store(static_cast<int>(isa), std::memory_order_relaxed);
}

PackedExpPoly pack(const ExpPoly& d) {
  PackedExpPoly p;
  p.offset.push_back(0);
  for (const auto& t : d.terms()) {
    p.frequency.push_back(t.frequency);
    for (const cplx c : t.poly.coeffs()) {
      p.coeff_re.push_back(c.real());
      p.coeff_im.push_back(c.imag());
    }
    p.offset.push_back(p.coeff_re.size());
  }
  return p;
}

ScaledEvalKernel scaled_eval_kernel(Isa isa) {
#if defined(RATLAS_HAVE_AVX2)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return &eval_scaled_avx2;
#endif
  (void)isa;
  return &eval_scaled_scalar;
}

}  // namespace ratlas::simd
