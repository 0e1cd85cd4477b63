#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qstates/simd.hpp"

using namespace qstates;
using cplx = std::complex<double>;

namespace {

std::vector<simd::Isa> variants() {
  std::vector<simd::Isa> out{simd::Isa::Scalar};
  if (simd::available(simd::Isa::Avx2)) out.push_back(simd::Isa::Avx2);
  return out;
}

std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("sincos against libm") {
    std::mt19937_64 rng(71);
    for (double range : {1.0, 100.0, 1e5}) {
      // Odd length exercises the tail loop.
      const auto x = uniform_vector(rng, 1003, -range, range);
      for (simd::Isa isa : variants()) {
        std::vector<double> s(x.size()), c(x.size());
        simd::kernels(isa).sincos(x.data(), s.data(), c.data(), x.size());
        double worst = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          worst = std::max({worst, std::fabs(s[i] - std::sin(x[i])), std::fabs(c[i] - std::cos(x[i]))});
        }
        INFO(simd::to_string(isa), " range ", range);
        CHECK(worst < 1e-14 * std::max(1.0, range));
      }
    }
  }

  TEST_CASE("expi_dot_sum against a direct sum") {
    std::mt19937_64 rng(72);
    for (int dims : {1, 2, 3}) {
      const std::size_t n = 517;
      std::vector<std::vector<double>> cs;
      std::vector<const double*> ptr;
      for (int d = 0; d < dims; ++d) cs.push_back(uniform_vector(rng, n, -1, 1));
      for (auto& v : cs) ptr.push_back(v.data());
      const auto w = uniform_vector(rng, n, 0, 1);
      const auto p = uniform_vector(rng, 3, -20, 20);
      cplx expected{};
      for (std::size_t i = 0; i < n; ++i) {
        double phase = 0;
        for (int d = 0; d < dims; ++d) phase += p[d] * cs[d][i];
        expected += w[i] * std::polar(1.0, phase);
      }
      for (simd::Isa isa : variants()) {
        const cplx got = simd::kernels(isa).expi_dot_sum(ptr.data(), dims, w.data(), n, p.data());
        INFO(simd::to_string(isa), " dims ", dims);
        CHECK(std::abs(got - expected) < 1e-11);
      }
    }
  }

  TEST_CASE("modulated_sum against a direct sum") {
    std::mt19937_64 rng(73);
    const std::size_t n = 2049;
    const auto t = uniform_vector(rng, n, -500, 500);
    const auto re = uniform_vector(rng, n, -1, 1), im = uniform_vector(rng, n, -1, 1), w = uniform_vector(rng, n, 0, 1);
    for (double omega : {0.0, 0.37, -12.5}) {
      cplx expected{};
      for (std::size_t i = 0; i < n; ++i) expected += w[i] * cplx(re[i], im[i]) * std::polar(1.0, -omega * t[i]);
      for (simd::Isa isa : variants()) {
        const cplx got = simd::kernels(isa).modulated_sum(t.data(), re.data(), im.data(), w.data(), n, omega);
        INFO(simd::to_string(isa), " omega ", omega);
        CHECK(std::abs(got - expected) < 1e-9);
      }
    }
  }

  TEST_CASE("trig_poly_modulus against a direct sum") {
    std::mt19937_64 rng(74);
    for (int dims : {1, 3, 6}) {
      const std::size_t n = 301;
      const int terms = 4;
      std::vector<std::vector<double>> cs;
      std::vector<const double*> ptr;
      for (int d = 0; d < dims; ++d) cs.push_back(uniform_vector(rng, n, -5, 5));
      for (auto& v : cs) ptr.push_back(v.data());
      const auto freq = uniform_vector(rng, static_cast<std::size_t>(terms * dims), -3, 3);
      std::vector<cplx> c(terms);
      for (auto& z : c) z = std::polar(uniform_vector(rng, 1, 0, 1)[0], uniform_vector(rng, 1, -3, 3)[0]);
      std::vector<double> expected(n);
      for (std::size_t s = 0; s < n; ++s) {
        cplx acc{};
        for (int j = 0; j < terms; ++j) {
          double phase = 0;
          for (int d = 0; d < dims; ++d) phase += cs[d][s] * freq[j * dims + d];
          acc += c[j] * std::polar(1.0, phase);
        }
        expected[s] = std::abs(acc);
      }
      for (simd::Isa isa : variants()) {
        std::vector<double> out(n);
        simd::kernels(isa).trig_poly_modulus(ptr.data(), dims, n, freq.data(), c.data(), terms, out.data());
        double worst = 0;
        for (std::size_t s = 0; s < n; ++s) worst = std::max(worst, std::fabs(out[s] - expected[s]));
        INFO(simd::to_string(isa), " dims ", dims);
        CHECK(worst < 1e-12);
      }
    }
  }

  TEST_CASE("variants agree with each other") {
    if (!simd::available(simd::Isa::Avx2)) return;
    std::mt19937_64 rng(75);
    const auto x = uniform_vector(rng, 4096, -1e3, 1e3);
    std::vector<double> s0(x.size()), c0(x.size()), s1(x.size()), c1(x.size());
    simd::kernels(simd::Isa::Scalar).sincos(x.data(), s0.data(), c0.data(), x.size());
    simd::kernels(simd::Isa::Avx2).sincos(x.data(), s1.data(), c1.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(std::fabs(s0[i] - s1[i]) < 1e-12);
      CHECK(std::fabs(c0[i] - c1[i]) < 1e-12);
    }
  }

  TEST_CASE("dispatch selection") {
    const simd::Isa before = simd::active();
    CHECK(simd::available(simd::Isa::Scalar));
    CHECK(simd::select(simd::Isa::Scalar));
    CHECK(simd::active() == simd::Isa::Scalar);
    std::vector<double> x{0.5}, s(1), c(1);
    simd::sincos(x.data(), s.data(), c.data(), 1);
    CHECK(s[0] == doctest::Approx(std::sin(0.5)));
    CHECK(simd::select(simd::Isa::Avx2) == simd::available(simd::Isa::Avx2));
    simd::select(before);
    CHECK(simd::to_string(simd::Isa::Avx2) == "avx2");
    if (!simd::available(simd::Isa::Avx2)) CHECK_THROWS_AS(simd::kernels(simd::Isa::Avx2), std::invalid_argument);
  }
}
