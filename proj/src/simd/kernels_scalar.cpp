#include <cmath>

#include "kernels.hpp"

namespace qstates::simd::detail {

namespace {

using cplx = std::complex<double>;

void sincos_scalar(const double* x, double* s, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

cplx expi_dot_sum_scalar(const double* const* coords, int dims, const double* w, std::size_t n, const double* p) {
  double re = 0, im = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double phase = 0;
    for (int d = 0; d < dims; ++d) phase += p[d] * coords[d][i];
    re += w[i] * std::cos(phase);
    im += w[i] * std::sin(phase);
  }
  return {re, im};
}

cplx modulated_sum_scalar(const double* t, const double* re, const double* im, const double* w, std::size_t n,
                          double omega) {
  double sr = 0, si = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(omega * t[i]), s = std::sin(omega * t[i]);
    // (re + i im)(c - i s)
    sr += w[i] * (re[i] * c + im[i] * s);
    si += w[i] * (im[i] * c - re[i] * s);
  }
  return {sr, si};
}

void trig_poly_modulus_scalar(const double* const* coords, int dims, std::size_t n, const double* freq,
                              const cplx* c, int terms, double* out) {
  for (std::size_t s = 0; s < n; ++s) {
    double re = 0, im = 0;
    for (int j = 0; j < terms; ++j) {
      double phase = 0;
      for (int d = 0; d < dims; ++d) phase += coords[d][s] * freq[j * dims + d];
      const double cs = std::cos(phase), sn = std::sin(phase);
      re += c[j].real() * cs - c[j].imag() * sn;
      im += c[j].real() * sn + c[j].imag() * cs;
    }
    out[s] = std::hypot(re, im);
  }
}

}  // namespace

const KernelTable kScalarKernels{sincos_scalar, expi_dot_sum_scalar, modulated_sum_scalar,
                                 trig_poly_modulus_scalar};

}  // namespace qstates::simd::detail
