#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels.hpp"

namespace qstates::simd {

namespace {

Isa detect() noexcept {
  Isa best = Isa::Scalar;
  if (available(Isa::Avx2)) best = Isa::Avx2;
  if (const char* env = std::getenv("STATES_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && available(Isa::Avx2)) return Isa::Avx2;
  }
  return best;
}

std::atomic<int>& current() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

const KernelTable& table() { return kernels(active()); }

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(QSTATES_HAS_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active() noexcept { return static_cast<Isa>(current().load(std::memory_order_relaxed)); }

bool select(Isa isa) noexcept {
  if (!available(isa)) return false;
  current().store(static_cast<int>(isa), std::memory_order_relaxed);
  return true;
}

const KernelTable& kernels(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("simd variant not available: " + std::string(to_string(isa)));
#if defined(QSTATES_HAS_AVX2)
  if (isa == Isa::Avx2) return detail::kAvx2Kernels;
#endif
  return detail::kScalarKernels;
}

void sincos(const double* x, double* s, double* c, std::size_t n) { table().sincos(x, s, c, n); }

std::complex<double> expi_dot_sum(const double* const* coords, int dims, const double* w, std::size_t n,
                                  const double* p) {
  return table().expi_dot_sum(coords, dims, w, n, p);
}

std::complex<double> modulated_sum(const double* t, const double* re, const double* im, const double* w,
                                   std::size_t n, double omega) {
  return table().modulated_sum(t, re, im, w, n, omega);
}

void trig_poly_modulus(const double* const* coords, int dims, std::size_t n, const double* freq,
                       const std::complex<double>* c, int terms, double* out) {
  table().trig_poly_modulus(coords, dims, n, freq, c, terms, out);
}

}  // namespace qstates::simd
