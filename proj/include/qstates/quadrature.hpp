#pragma once

#include <complex>
#include <vector>

#include "qstates/lie.hpp"

namespace qstates {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes, weights;
};
GaussLegendre gauss_legendre(int order);

/// Product rule on the unit sphere in structure-of-arrays layout:
/// Gauss-Legendre in cos(theta) times the uniform rule in phi.
/// Weights sum to 4 pi.
struct SphereGrid {
  std::vector<double> x, y, z, w;
  std::size_t size() const noexcept { return w.size(); }
};
SphereGrid sphere_grid(int legendre_order = 64, int azimuth_points = 128);

/// Equispaced (trapezoid) rule on the unit circle in the (x, y) plane.
/// Weights sum to 2 pi.
struct CircleGrid {
  std::vector<double> x, y, w;
  std::size_t size() const noexcept { return w.size(); }
};
CircleGrid circle_grid(int points = 512);

/// (1/4pi) sum_i w_i exp(i <p, u_i>).
cplx sphere_average_expi(const SphereGrid& grid, const Vec3& p);
/// (1/2pi) sum_i w_i exp(i <p, u_i>) with u_i in the plane z = 0.
cplx circle_average_expi(const CircleGrid& grid, double px, double py);

}  // namespace qstates
