#pragma once

namespace qstates {

/// Bessel function of the first kind, order zero.
/// Power series (extended precision) for |x| <= 12, Hankel asymptotic beyond.
double bessel_j0(double x);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

}  // namespace qstates
