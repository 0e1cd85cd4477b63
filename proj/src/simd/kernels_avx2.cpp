// Compiled with -mavx2 -mfma; only reached after a runtime feature check.

#include <immintrin.h>

#include <cmath>

#include "kernels.hpp"

namespace qstates::simd::detail {

namespace {

using cplx = std::complex<double>;

// Three-part split of pi/2; the first two parts have trailing zero bits so
// q * part is exact for |q| < 2^20.
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624871116645580e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kReductionLimit = 1e6;

// Minimax coefficients on [-pi/4, pi/4] (Cephes sin.c).
constexpr double kSin[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
                            -1.98412698295895385996e-4, 8.33333333332211858878e-3, -1.66666666666666307295e-1};
constexpr double kCos[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
                            2.48015872888517045348e-5, -1.38888888888730564116e-3, 4.16666666666665929218e-2};

inline __m256d poly5(__m256d z, const double* k) {
  __m256d p = _mm256_set1_pd(k[0]);
  for (int i = 1; i < 6; ++i) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(k[i]));
  return p;
}

inline bool needs_scalar(__m256d x) {
  const __m256d ax = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
  const __m256d big = _mm256_cmp_pd(ax, _mm256_set1_pd(kReductionLimit), _CMP_NLE_UQ);  // also NaN
  return _mm256_movemask_pd(big) != 0;
}

inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
  if (needs_scalar(x)) {
    alignas(32) double xs[4], ss[4], cs[4];
    _mm256_store_pd(xs, x);
    for (int i = 0; i < 4; ++i) {
      ss[i] = std::sin(xs[i]);
      cs[i] = std::cos(xs[i]);
    }
    s = _mm256_load_pd(ss);
    c = _mm256_load_pd(cs);
    return;
  }
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Lo), r);

  const __m256d z = _mm256_mul_pd(r, r);
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), poly5(z, kSin), r);
  const __m256d cos_r = _mm256_fmadd_pd(_mm256_mul_pd(z, z), poly5(z, kCos),
                                        _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

  // quadrant = q mod 4, computed in floating point
  const __m256d quad = _mm256_sub_pd(
      q, _mm256_mul_pd(_mm256_set1_pd(4.0), _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25)))));
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0), three = _mm256_set1_pd(3.0);
  const __m256d odd = _mm256_or_pd(_mm256_cmp_pd(quad, one, _CMP_EQ_OQ), _mm256_cmp_pd(quad, three, _CMP_EQ_OQ));
  const __m256d sin_neg = _mm256_cmp_pd(quad, two, _CMP_GE_OQ);  // quadrants 2, 3
  const __m256d cos_neg = _mm256_or_pd(_mm256_cmp_pd(quad, one, _CMP_EQ_OQ), _mm256_cmp_pd(quad, two, _CMP_EQ_OQ));
  const __m256d sign = _mm256_set1_pd(-0.0);

  s = _mm256_blendv_pd(sin_r, cos_r, odd);
  c = _mm256_blendv_pd(cos_r, sin_r, odd);
  s = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign));
  c = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void sincos_avx2(const double* x, double* s, double* c, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    sincos4(_mm256_loadu_pd(x + i), vs, vc);
    _mm256_storeu_pd(s + i, vs);
    _mm256_storeu_pd(c + i, vc);
  }
  for (; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

cplx expi_dot_sum_avx2(const double* const* coords, int dims, const double* w, std::size_t n, const double* p) {
  __m256d acc_re = _mm256_setzero_pd(), acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d phase = _mm256_setzero_pd();
    for (int d = 0; d < dims; ++d) phase = _mm256_fmadd_pd(_mm256_set1_pd(p[d]), _mm256_loadu_pd(coords[d] + i), phase);
    __m256d vs, vc;
    sincos4(phase, vs, vc);
    const __m256d vw = _mm256_loadu_pd(w + i);
    acc_re = _mm256_fmadd_pd(vw, vc, acc_re);
    acc_im = _mm256_fmadd_pd(vw, vs, acc_im);
  }
  double re = hsum(acc_re), im = hsum(acc_im);
  for (; i < n; ++i) {
    double phase = 0;
    for (int d = 0; d < dims; ++d) phase += p[d] * coords[d][i];
    re += w[i] * std::cos(phase);
    im += w[i] * std::sin(phase);
  }
  return {re, im};
}

cplx modulated_sum_avx2(const double* t, const double* re, const double* im, const double* w, std::size_t n,
                        double omega) {
  const __m256d vo = _mm256_set1_pd(omega);
  __m256d acc_re = _mm256_setzero_pd(), acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    sincos4(_mm256_mul_pd(vo, _mm256_loadu_pd(t + i)), vs, vc);
    const __m256d vr = _mm256_loadu_pd(re + i), vi = _mm256_loadu_pd(im + i), vw = _mm256_loadu_pd(w + i);
    const __m256d pr = _mm256_fmadd_pd(vr, vc, _mm256_mul_pd(vi, vs));
    const __m256d pi = _mm256_fmsub_pd(vi, vc, _mm256_mul_pd(vr, vs));
    acc_re = _mm256_fmadd_pd(vw, pr, acc_re);
    acc_im = _mm256_fmadd_pd(vw, pi, acc_im);
  }
  double sr = hsum(acc_re), si = hsum(acc_im);
  for (; i < n; ++i) {
    const double c = std::cos(omega * t[i]), s = std::sin(omega * t[i]);
    sr += w[i] * (re[i] * c + im[i] * s);
    si += w[i] * (im[i] * c - re[i] * s);
  }
  return {sr, si};
}

void trig_poly_modulus_avx2(const double* const* coords, int dims, std::size_t n, const double* freq, const cplx* c,
                            int terms, double* out) {
  std::size_t s = 0;
  for (; s + 4 <= n; s += 4) {
    __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
    for (int j = 0; j < terms; ++j) {
      __m256d phase = _mm256_setzero_pd();
      for (int d = 0; d < dims; ++d) {
        phase = _mm256_fmadd_pd(_mm256_loadu_pd(coords[d] + s), _mm256_set1_pd(freq[j * dims + d]), phase);
      }
      __m256d vs, vc;
      sincos4(phase, vs, vc);
      const __m256d cr = _mm256_set1_pd(c[j].real()), ci = _mm256_set1_pd(c[j].imag());
      re = _mm256_add_pd(re, _mm256_fmsub_pd(cr, vc, _mm256_mul_pd(ci, vs)));
      im = _mm256_add_pd(im, _mm256_fmadd_pd(cr, vs, _mm256_mul_pd(ci, vc)));
    }
    alignas(32) double r[4], q[4];
    _mm256_store_pd(r, re);
    _mm256_store_pd(q, im);
    for (int k = 0; k < 4; ++k) out[s + k] = std::hypot(r[k], q[k]);
  }
  for (; s < n; ++s) {
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

const KernelTable kAvx2Kernels{sincos_avx2, expi_dot_sum_avx2, modulated_sum_avx2, trig_poly_modulus_avx2};

}  // namespace qstates::simd::detail
