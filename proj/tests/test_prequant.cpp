#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qstates/error.hpp"
#include "qstates/prequant.hpp"

using namespace qstates;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Schema;
}

PrequantScenario gaussian(double cp, double ck, double spp, double spk, double skk) {
  PrequantScenario s;
  s.center = {cp, ck};
  s.covariance << spp, spk, spk, skk;
  return s;
}

// Gaussian density sampled on a midpoint grid and renormalized to sum 1.
PrequantScenario gaussian_grid(std::size_t n, double half) {
  PrequantScenario s;
  s.kind = PrequantScenario::Kind::Grid;
  s.p_lo = s.k_lo = -half;
  s.p_hi = s.k_hi = half;
  s.density.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double h = 2 * half / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = -half + (i + 0.5) * h, k = -half + (j + 0.5) * h;
      s.density(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::exp(-0.5 * (p * p + k * k));
    }
  }
  s.density /= s.density.sum() * h * h;
  return s;
}

}  // namespace

TEST_SUITE("prequant") {
  TEST_CASE("image map") {
    CHECK(prequant_image(0, 0) == 0.0);
    CHECK(prequant_image(0, 10) == doctest::Approx(10));
    const double p = std::numbers::pi / 2;
    CHECK(prequant_image(p, 123.0) == doctest::Approx(1.0));
    CHECK(prequant_image(1.0, 1.0) == doctest::Approx(std::sin(1.0)));
  }

  TEST_CASE("standard gaussian leaks mass outside the range") {
    const double expected = oracle::prequant_mass_outside(0, 0, 1, 0, 1);
    CHECK(expected == doctest::Approx(0.29669801614158064).epsilon(1e-9));
    const PrequantResult r = prequant_mass_outside(gaussian(0, 0, 1, 0, 1));
    CHECK(std::fabs(r.mass_outside - expected) <= 1e-3);
    CHECK(r.mass_outside > 0.05);
    CHECK(std::fabs(r.mass_outside - r.coarse) <= 1e-3);
    CHECK(r.normalization == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.resolution == 4096);
  }

  TEST_CASE("correlated and shifted gaussians against the oracle") {
    struct Case {
      double cp, ck, spp, spk, skk;
    };
    for (const Case& c : {Case{0, 10, 1, 0, 1}, Case{0.5, -0.3, 0.6, 0.2, 1.5}, Case{1.2, 0.4, 0.3, -0.1, 0.4}}) {
      const double expected = oracle::prequant_mass_outside(c.cp, c.ck, c.spp, c.spk, c.skk);
      const PrequantResult r = prequant_mass_outside(gaussian(c.cp, c.ck, c.spp, c.spk, c.skk));
      INFO("center ", c.cp, ", ", c.ck);
      CHECK(std::fabs(r.mass_outside - expected) <= 1e-3);
    }
  }

  TEST_CASE("dirac scenarios") {
    PrequantScenario s;
    s.kind = PrequantScenario::Kind::Dirac;
    CHECK(prequant_mass_outside(s).mass_outside == 0.0);
    s.center = {0, 10};
    CHECK(prequant_mass_outside(s).mass_outside == 1.0);
  }

  TEST_CASE("gridded density") {
    const PrequantResult r = prequant_mass_outside(gaussian_grid(1024, 8));
    CHECK(std::fabs(r.mass_outside - oracle::prequant_mass_outside(0, 0, 1, 0, 1)) <= 1e-3);
  }

  TEST_CASE("errors") {
    PrequantScenario coarse = gaussian(0.3, 0.2, 1, 0, 1);
    coarse.resolution = 8;
    CHECK(code_of([&] { (void)prequant_mass_outside(coarse); }) == ErrorCode::InvalidParameter);
    // A 4x4 density block mean cannot resolve the boundary.
    PrequantScenario blocky = gaussian_grid(4, 3);
    CHECK(code_of([&] { (void)prequant_mass_outside(blocky); }) == ErrorCode::GridTooCoarse);
    PrequantScenario heavy = gaussian_grid(256, 8);
    heavy.density *= 1.1;
    CHECK(code_of([&] { (void)prequant_mass_outside(heavy); }) == ErrorCode::Unnormalized);
    PrequantScenario singular = gaussian(0, 0, 1, 1, 1);
    CHECK(code_of([&] { (void)prequant_mass_outside(singular); }) == ErrorCode::InvalidParameter);
  }
}
