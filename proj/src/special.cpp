#include "qstates/special.hpp"

#include <cmath>
#include <numbers>

namespace qstates {

namespace {

constexpr double kSeriesLimit = 12.0;

double j0_series(double x) {
  const long double q = -static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && std::fabs(term) < 1e-24L) break;
  }
  return static_cast<double>(sum);
}

double j0_asymptotic(double x) {
  // J0(x) ~ sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)),  chi = x - pi/4
  const long double z = 8.0L * x;
  long double term = 1.0L, P = 1.0L, Q = 0.0L, prev = INFINITY;
  for (int k = 1; k < 60; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= -(odd * odd) / (k * z);
    if (std::fabs(term) >= prev) break;  // smallest term reached
    prev = std::fabs(term);
    // term_k carries sign (-1)^k from mu = 0; P/Q alternate on top of it
    if (k % 2 == 0) {
      P += (k / 2 % 2 == 0 ? 1.0L : -1.0L) * term;
    } else {
      Q += ((k - 1) / 2 % 2 == 0 ? 1.0L : -1.0L) * term;
    }
  }
  const double chi = x - std::numbers::pi / 4.0;
  return std::sqrt(2.0 / (std::numbers::pi * x)) *
         static_cast<double>(P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  x = std::fabs(x);
  return x <= kSeriesLimit ? j0_series(x) : j0_asymptotic(x);
}

double sinc(double x) {
  if (std::fabs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace qstates
