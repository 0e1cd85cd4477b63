#include "qstates/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qstates/error.hpp"
#include "qstates/simd.hpp"

namespace qstates {

GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorCode::InvalidParameter, "gauss_legendre: order must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      // Three-term recurrence for P_order(x) and its derivative.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Final derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (order == 1) p0 = 1.0;
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

SphereGrid sphere_grid(int legendre_order, int azimuth_points) {
  if (azimuth_points < 1) throw Error(ErrorCode::InvalidParameter, "sphere_grid: azimuth_points must be >= 1");
  const GaussLegendre gl = gauss_legendre(legendre_order);
  SphereGrid g;
  const std::size_t n = static_cast<std::size_t>(legendre_order) * static_cast<std::size_t>(azimuth_points);
  g.x.reserve(n);
  g.y.reserve(n);
  g.z.reserve(n);
  g.w.reserve(n);
  const double dphi = 2.0 * std::numbers::pi / azimuth_points;
  for (int i = 0; i < legendre_order; ++i) {
    const double ct = gl.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < azimuth_points; ++j) {
      const double phi = (j + 0.5) * dphi;
      g.x.push_back(st * std::cos(phi));
      g.y.push_back(st * std::sin(phi));
      g.z.push_back(ct);
      g.w.push_back(gl.weights[i] * dphi);
    }
  }
  return g;
}

CircleGrid circle_grid(int points) {
  if (points < 1) throw Error(ErrorCode::InvalidParameter, "circle_grid: points must be >= 1");
  CircleGrid g;
  const double dphi = 2.0 * std::numbers::pi / points;
  for (int j = 0; j < points; ++j) {
    g.x.push_back(std::cos(j * dphi));
    g.y.push_back(std::sin(j * dphi));
    g.w.push_back(dphi);
  }
  return g;
}

cplx sphere_average_expi(const SphereGrid& grid, const Vec3& p) {
  const double* coords[3] = {grid.x.data(), grid.y.data(), grid.z.data()};
  const double q[3] = {p.x(), p.y(), p.z()};
  return simd::expi_dot_sum(coords, 3, grid.w.data(), grid.size(), q) / (4.0 * std::numbers::pi);
}

cplx circle_average_expi(const CircleGrid& grid, double px, double py) {
  const double* coords[2] = {grid.x.data(), grid.y.data()};
  const double q[2] = {px, py};
  return simd::expi_dot_sum(coords, 2, grid.w.data(), grid.size(), q) / (2.0 * std::numbers::pi);
}

}  // namespace qstates
