#pragma once

// Hot-loop kernels with a scalar reference implementation and an AVX2+FMA
// variant. The variant is picked once at first use from the CPU features;
// STATES_SIMD=scalar|avx2 overrides the choice.

#include <complex>
#include <cstddef>
#include <string_view>

namespace qstates::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;
bool available(Isa isa) noexcept;
Isa active() noexcept;
/// Forces a variant (tests, benchmarks). Returns false if it is not available.
bool select(Isa isa) noexcept;

/// s[i] = sin(x[i]), c[i] = cos(x[i]).
void sincos(const double* x, double* s, double* c, std::size_t n);

/// sum_i w[i] exp(i <p, u_i>), where u_i has components coords[d][i], d < dims.
std::complex<double> expi_dot_sum(const double* const* coords, int dims, const double* w, std::size_t n,
                                  const double* p);

/// sum_i w[i] (re[i] + i im[i]) exp(-i omega t[i]).
std::complex<double> modulated_sum(const double* t, const double* re, const double* im, const double* w,
                                   std::size_t n, double omega);

/// out[s] = | sum_j c[j] exp(i sum_d coords[d][s] freq[j*dims + d]) |  for s < n.
void trig_poly_modulus(const double* const* coords, int dims, std::size_t n, const double* freq,
                       const std::complex<double>* c, int terms, double* out);

/// Direct access to one variant, for equivalence tests.
struct KernelTable {
  void (*sincos)(const double*, double*, double*, std::size_t);
  std::complex<double> (*expi_dot_sum)(const double* const*, int, const double*, std::size_t, const double*);
  std::complex<double> (*modulated_sum)(const double*, const double*, const double*, const double*,
                                        std::size_t, double);
  void (*trig_poly_modulus)(const double* const*, int, std::size_t, const double*,
                            const std::complex<double>*, int, double*);
};

/// Throws std::invalid_argument if the variant is not compiled in or not supported.
const KernelTable& kernels(Isa isa);

}  // namespace qstates::simd
