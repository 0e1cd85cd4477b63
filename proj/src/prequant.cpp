#include "qstates/prequant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "qstates/error.hpp"
#include "qstates/simd.hpp"

namespace qstates {

double prequant_image(double p, double k) { return std::sin(p) + (k - p) * std::cos(p); }

namespace {

struct Sums {
  double total = 0, outside = 0;
};

// Fraction of the k cell [lo, lo + width] where |sin p + (k - p) cos p| <= 1.
// For fixed p that set is an interval in k (or everything / nothing).
struct InsideInterval {
  double a, b;
  InsideInterval(double p, double sn, double cs) {
    if (std::fabs(cs) < 1e-300) {
      a = std::fabs(sn) <= 1.0 ? -INFINITY : 0.0;
      b = std::fabs(sn) <= 1.0 ? INFINITY : 0.0;
      return;
    }
    a = p + (-1.0 - sn) / cs;
    b = p + (1.0 - sn) / cs;
    if (a > b) std::swap(a, b);
  }
  double fraction(double lo, double width) const {
    const double overlap = std::min(b, lo + width) - std::max(a, lo);
    return overlap > 0 ? overlap / width : 0.0;
  }
};

// Zero of cos inside (lo, lo + width), if any. The inside interval jumps
// from (-inf, p] to [p, inf) there, so such rows are split in two.
std::optional<double> cos_zero_in(double lo, double width) {
  const double z = std::ceil((lo - 0.5 * std::numbers::pi) / std::numbers::pi) * std::numbers::pi + 0.5 * std::numbers::pi;
  if (z > lo && z < lo + width) return z;
  return std::nullopt;
}

// Calls row(p, sin p, cos p, share) once per piece of the p cell.
template <typename Row>
void for_row_pieces(double mid, double width, double sn, double cs, Row&& row) {
  const double lo = mid - 0.5 * width;
  if (const auto z = cos_zero_in(lo, width)) {
    for (const auto& [a, b] : {std::pair{lo, *z}, std::pair{*z, lo + width}}) {
      const double m = 0.5 * (a + b);
      row(m, std::sin(m), std::cos(m), (b - a) / width);
    }
    return;
  }
  row(mid, sn, cs, 1.0);
}

// Midpoint rule for a Gaussian |phi^|^2 on an n x n grid; each cell counts
// with the fraction of its k extent that maps outside [-1, 1].
Sums gaussian_sums(const PrequantScenario& s, std::size_t n) {
  const Eigen::Matrix2d inv = s.covariance.inverse();
  const double norm = 1.0 / (2 * std::numbers::pi * std::sqrt(s.covariance.determinant()));
  const double hp_half = s.extent * std::sqrt(s.covariance(0, 0));
  const double hk_half = s.extent * std::sqrt(s.covariance(1, 1));
  const double dp = 2 * hp_half / static_cast<double>(n), dk = 2 * hk_half / static_cast<double>(n);
  std::vector<double> p(n), k(n), sn(n), cs(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = s.center[0] - hp_half + (static_cast<double>(i) + 0.5) * dp;
    k[i] = s.center[1] - hk_half + (static_cast<double>(i) + 0.5) * dk;
  }
  simd::sincos(p.data(), sn.data(), cs.data(), n);
  Sums out;
  for (std::size_t i = 0; i < n; ++i) {
    for_row_pieces(p[i], dp, sn[i], cs[i], [&](double pp, double spp, double cpp, double share) {
      const double x = pp - s.center[0];
      const InsideInterval inside(pp, spp, cpp);
      double row_total = 0, row_out = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const double y = k[j] - s.center[1];
        const double q = inv(0, 0) * x * x + 2 * inv(0, 1) * x * y + inv(1, 1) * y * y;
        const double w = std::exp(-0.5 * q);
        row_total += w;
        row_out += w * (1.0 - inside.fraction(k[j] - 0.5 * dk, dk));
      }
      out.total += share * row_total;
      out.outside += share * row_out;
    });
  }
  const double cell = norm * dp * dk;
  out.total *= cell;
  out.outside *= cell;
  return out;
}

Sums grid_sums(const PrequantScenario& s, const Eigen::MatrixXd& d) {
  const auto np = static_cast<std::size_t>(d.rows()), nk = static_cast<std::size_t>(d.cols());
  const double dp = (s.p_hi - s.p_lo) / static_cast<double>(np), dk = (s.k_hi - s.k_lo) / static_cast<double>(nk);
  Sums out;
  for (std::size_t i = 0; i < np; ++i) {
    const double p = s.p_lo + (static_cast<double>(i) + 0.5) * dp;
    for (std::size_t j = 0; j < nk; ++j) out.total += d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    for_row_pieces(p, dp, std::sin(p), std::cos(p), [&](double pp, double spp, double cpp, double share) {
      const InsideInterval inside(pp, spp, cpp);
      for (std::size_t j = 0; j < nk; ++j) {
        const double w = d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        out.outside += share * w * (1.0 - inside.fraction(s.k_lo + static_cast<double>(j) * dk, dk));
      }
    });
  }
  out.total *= dp * dk;
  out.outside *= dp * dk;
  return out;
}

}  // namespace

PrequantResult prequant_mass_outside(const PrequantScenario& s, const Tolerances& tol) {
  PrequantResult r;
  switch (s.kind) {
    case PrequantScenario::Kind::Dirac:
      r.mass_outside = r.coarse = std::fabs(prequant_image(s.center[0], s.center[1])) > 1.0 ? 1.0 : 0.0;
      r.normalization = 1.0;
      return r;
    case PrequantScenario::Kind::Gaussian: {
      if (s.resolution < 16) throw Error(ErrorCode::InvalidParameter, "prequant: resolution below 16");
      if (!(s.covariance.determinant() > 0) || std::fabs(s.covariance(0, 1) - s.covariance(1, 0)) > 1e-15) {
        throw Error(ErrorCode::InvalidParameter, "prequant: covariance must be symmetric positive definite");
      }
      const Sums coarse = gaussian_sums(s, s.resolution);
      const Sums fine = gaussian_sums(s, 2 * s.resolution);
      r.coarse = coarse.outside;
      r.mass_outside = fine.outside;
      r.normalization = fine.total;
      r.resolution = 2 * s.resolution;
      break;
    }
    case PrequantScenario::Kind::Grid: {
      const auto np = s.density.rows(), nk = s.density.cols();
      if (np < 4 || nk < 4 || np % 2 || nk % 2 || !(s.p_hi > s.p_lo) || !(s.k_hi > s.k_lo)) {
        throw Error(ErrorCode::InvalidParameter, "prequant: grid needs even dimensions >= 4 and a nonempty box");
      }
      Eigen::MatrixXd half(np / 2, nk / 2);
      for (Eigen::Index i = 0; i < np / 2; ++i) {
        for (Eigen::Index j = 0; j < nk / 2; ++j) half(i, j) = s.density.block(2 * i, 2 * j, 2, 2).mean();
      }
      const Sums fine = grid_sums(s, s.density);
      const Sums coarse = grid_sums(s, half);
      r.coarse = coarse.outside;
      r.mass_outside = fine.outside;
      r.normalization = fine.total;
      r.resolution = static_cast<std::size_t>(np);
      break;
    }
  }
  if (std::fabs(r.normalization - 1.0) > 1e-6) {
    throw Error(ErrorCode::Unnormalized, "prequant: |phi^|^2 integrates to " + std::to_string(r.normalization));
  }
  if (std::fabs(r.mass_outside - r.coarse) > tol.prequant_convergence) {
    throw Error(ErrorCode::GridTooCoarse, "prequant: resolutions disagree by " + std::to_string(std::fabs(r.mass_outside - r.coarse)));
  }
  return r;
}

}  // namespace qstates
