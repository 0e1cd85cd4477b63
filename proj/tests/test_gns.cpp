#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qstates/error.hpp"
#include "qstates/gns.hpp"

using namespace qstates;

namespace {

constexpr double kPi = std::numbers::pi;

// The 24 rotations of the cube, by closure of two quarter turns.
std::vector<Mat3> octahedral_group() {
  const Mat3 gens[2] = {rotation_about(Vec3::UnitX(), kPi / 2), rotation_about(Vec3::UnitZ(), kPi / 2)};
  std::vector<Mat3> group{Mat3::Identity()};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const Mat3& g : gens) {
      const Mat3 next = (g * group[i]).array().round().matrix();
      const bool seen = std::any_of(group.begin(), group.end(), [&](const Mat3& h) { return (h - next).norm() < 1e-9; });
      if (!seen) group.push_back(next);
    }
  }
  return group;
}

double homomorphism_defect(const GnsSpace& space, const GroupElement& g, const GroupElement& h) {
  const RepMatrix pg = rep_matrix(space, g), ph = rep_matrix(space, h), pgh = rep_matrix(space, compose(g, h));
  return (pgh.matrix - pg.matrix * ph.matrix).norm();
}

double unitarity_defect(const RepMatrix& pi) {
  const auto r = pi.matrix.rows();
  return (pi.matrix.adjoint() * pi.matrix - Eigen::MatrixXcd::Identity(r, r)).norm();
}

}  // namespace

TEST_SUITE("gns") {
  TEST_CASE("su2 highest weight: the finite space is the whole irreducible module") {
    Rng rng(31);
    for (double j : {0.5, 1.0, 2.5, 4.0}) {
      const State m = su2_highest_weight(j);
      std::vector<GroupElement> samples{GroupElement::identity(Family::SU2)};
      for (int i = 0; i < 24; ++i) samples.push_back(random_group_element(Family::SU2, rng));
      const GnsSpace space = build_gns(m, samples);
      CHECK(space.rank == static_cast<std::size_t>(2 * j + 1));
      CHECK(space.cyclic.norm() == doctest::Approx(1.0).epsilon(1e-12));
      std::vector<GroupElement> probes;
      for (int i = 0; i < 20; ++i) {
        const GroupElement g = random_group_element(Family::SU2, rng);
        probes.push_back(g);
        const RepMatrix pi = rep_matrix(space, g);
        CHECK(pi.residual < 1e-9);
        CHECK(std::abs(recovered_coefficient(space, pi) - m(g)) < 1e-9);
        CHECK(unitarity_defect(pi) < 1e-9);
      }
      CHECK(homomorphism_defect(space, probes[0], probes[1]) < 1e-9);
      const CommutantReport c = commutant_dim(space, probes);
      CHECK(c.dimension == 1);  // irreducible
      CHECK(c.policy == CommutantPolicy::Strict);
    }
  }

  TEST_CASE("plane wave on the cube group is closed") {
    StateParams p;
    p.k = 1.2;
    const State m = make_state(StateKind::EuclidPlane, p);
    Rng rng(32);
    std::vector<GroupElement> samples;
    for (const Mat3& A : octahedral_group()) {
      const Vec3 c = samples.empty() ? Vec3::Zero() : Vec3(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2));
      samples.push_back(make_euclid(A, c));
    }
    REQUIRE(samples.size() == 24);
    const GnsSpace space = build_gns(m, samples);
    CHECK(space.rank == 6);  // the points +-e1, +-e2, +-e3

    const auto group = octahedral_group();
    std::vector<GroupElement> probes;
    for (int i = 0; i < 40; ++i) {
      const Mat3& A = group[static_cast<std::size_t>(i) % group.size()];
      probes.push_back(make_euclid(A, Vec3(uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3))));
    }
    for (const auto& g : probes) {
      const RepMatrix pi = rep_matrix(space, g);
      CHECK(pi.residual < 1e-9);
      CHECK(std::abs(recovered_coefficient(space, pi) - m(g)) < 1e-9);
      CHECK(unitarity_defect(pi) < 1e-9);
    }
    CHECK(homomorphism_defect(space, probes[3], probes[17]) < 1e-9);
    CHECK(commutant_dim(space, probes).dimension == 1);

    // The cyclic vector is an eigenvector of the translations in H.
    std::vector<GroupElement> h;
    std::vector<cplx> chi;
    for (int i = 0; i < 10; ++i) {
      const Vec3 c(uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3));
      h.push_back(make_euclid(Mat3::Identity(), c));
      chi.push_back(std::polar(1.0, p.k * c[2]));
    }
    CHECK(eigenvector_check(space, h, chi) < 1e-9);
  }

  TEST_CASE("heisenberg states with probes in the polarizing subgroup") {
    StateParams p;
    p.k = 1.3, p.ell = -0.4;
    Rng rng(33);
    for (StateKind kind : {StateKind::HeisenbergLocP, StateKind::HeisenbergLocQ}) {
      const State m = make_state(kind, p);
      const bool loc_p = kind == StateKind::HeisenbergLocP;
      std::vector<GroupElement> samples{GroupElement::identity(Family::Heisenberg)};
      for (int i = 1; i < 32; ++i) {
        // Cosets indexed by a few shifts; the other coordinates are free.
        const double shift = static_cast<double>(i % 5);
        samples.push_back(loc_p ? GroupElement(HeisenbergElement{uniform(rng, -2, 2), shift, uniform(rng, -2, 2)})
                                : GroupElement(HeisenbergElement{uniform(rng, -2, 2), uniform(rng, -2, 2), shift}));
      }
      const GnsSpace space = build_gns(m, samples);
      CHECK(space.rank == 5);
      for (int i = 0; i < 30; ++i) {
        const GroupElement g = loc_p ? GroupElement(HeisenbergElement{uniform(rng, -3, 3), 0, uniform(rng, -3, 3)})
                                     : GroupElement(HeisenbergElement{uniform(rng, -3, 3), uniform(rng, -3, 3), 0});
        const RepMatrix pi = rep_matrix(space, g);
        CHECK(pi.residual < 1e-9);
        CHECK(std::abs(recovered_coefficient(space, pi) - m(g)) < 1e-9);
        CHECK(unitarity_defect(pi) < 1e-9);
      }
      // A shift that leaves the support is not closed, and is reported as such.
      const GroupElement out = loc_p ? GroupElement(HeisenbergElement{0, 0.5, 0}) : GroupElement(HeisenbergElement{0, 0, 0.5});
      CHECK(rep_matrix(space, out).residual > 1e-3);
      CHECK_THROWS_AS((void)commutant_dim(space, std::vector{out}), Error);
      CHECK(commutant_dim(space, std::vector{out}, CommutantPolicy::Compressed).policy == CommutantPolicy::Compressed);
    }
  }

  TEST_CASE("basis is orthonormal under the gram form and reconstructs it") {
    Rng rng(34);
    StateParams p;
    p.k = 0.9;
    const State m = make_state(StateKind::EuclidSpherical, p);
    std::vector<GroupElement> samples{GroupElement::identity(Family::Euclid)};
    for (int i = 0; i < 20; ++i) samples.push_back(random_group_element(Family::Euclid, rng, 2.0));
    const GnsSpace space = build_gns(m, samples);
    const Eigen::MatrixXcd& K = space.gram.entries;
    const auto r = static_cast<Eigen::Index>(space.rank);
    CHECK((space.basis.adjoint() * K * space.basis - Eigen::MatrixXcd::Identity(r, r)).norm() < 1e-10);
    CHECK((space.coordinates.adjoint() * space.coordinates - K).norm() < 1e-9);
    CHECK(space.cyclic.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("reproducing property") {
    Rng rng(35);
    const State m = su2_highest_weight(1.5);
    std::vector<GroupElement> samples{GroupElement::identity(Family::SU2)};
    for (int i = 0; i < 12; ++i) samples.push_back(random_group_element(Family::SU2, rng));
    const GnsSpace space = build_gns(m, samples);
    std::vector<Eigen::VectorXcd> fs, cs;
    for (int i = 0; i < 4; ++i) {
      fs.push_back(Eigen::VectorXcd::Random(13));
      cs.push_back(Eigen::VectorXcd::Random(13));
    }
    CHECK(reproducing_check(space, fs, cs) < 1e-10);
  }

  TEST_CASE("preconditions") {
    const State m = su2_highest_weight(1.0);
    Rng rng(36);
    const std::vector<GroupElement> no_identity{random_group_element(Family::SU2, rng)};
    CHECK_THROWS_AS((void)build_gns(m, no_identity), Error);
    const State bad = custom_state(Family::SU2, [](const GroupElement& g) { return cplx{g.su2().w > 0.99 ? 1.0 : -0.9}; },
                                   "not positive");
    std::vector<GroupElement> samples{GroupElement::identity(Family::SU2)};
    for (int i = 0; i < 6; ++i) samples.push_back(random_group_element(Family::SU2, rng));
    try {
      (void)build_gns(bad, samples);
      FAIL("expected NotAState");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotAState);
    }
  }
}
