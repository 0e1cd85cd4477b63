#pragma once

// Spectral test of the prequantization representation for the hamiltonian
// sin p: the spectral measure along its flow is the image of |phi^(p,k)|^2
// dp dk under (p, k) -> sin p + (k - p) cos p, and a quantum representation
// would keep it inside [-1, 1], the range of sin p.

#include <cstddef>

#include <Eigen/Dense>

#include "qstates/config.hpp"

namespace qstates {

/// sin p + (k - p) cos p.
double prequant_image(double p, double k);

struct PrequantScenario {
  enum class Kind { Gaussian, Dirac, Grid } kind = Kind::Gaussian;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();        // (p, k)
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity(); // of |phi^|^2
  double extent = 8.0;            // box half-width in standard deviations
  std::size_t resolution = 2048;  // points per axis; also run at twice this
  // Grid kind: |phi^|^2 on the midpoint grid of [p_lo, p_hi] x [k_lo, k_hi],
  // rows indexed by p. The comparison run uses 2x2 block means.
  double p_lo = 0, p_hi = 0, k_lo = 0, k_hi = 0;
  Eigen::MatrixXd density;
};

struct PrequantResult {
  double mass_outside = 0;  // from the finer grid
  double coarse = 0;        // from the coarser grid
  double normalization = 0; // integral of |phi^|^2 on the finer grid
  std::size_t resolution = 0;
};

/// Throws Error{Unnormalized} if the density does not integrate to 1 within
/// 1e-6 and Error{GridTooCoarse} if the two resolutions differ by more than
/// tol.prequant_convergence.
PrequantResult prequant_mass_outside(const PrequantScenario& scenario, const Tolerances& tol = kDefaultTolerances);

}  // namespace qstates
