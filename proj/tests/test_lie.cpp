#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qstates/error.hpp"
#include "qstates/json_io.hpp"
#include "qstates/lie.hpp"
#include "qstates/sampling.hpp"

using namespace qstates;

namespace {

constexpr Family kMatrixFamilies[] = {Family::Heisenberg, Family::Bargmann, Family::Euclid, Family::SU2};

double matrix_gap(const oracle::Mat& a, const oracle::Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Schema;
}

}  // namespace

TEST_SUITE("lie") {
  TEST_CASE("composition matches matrix multiplication") {
    Rng rng(1);
    for (Family f : kMatrixFamilies) {
      for (int i = 0; i < 200; ++i) {
        const GroupElement g = random_group_element(f, rng), h = random_group_element(f, rng);
        CHECK(matrix_gap(oracle::group_matrix(compose(g, h)), oracle::group_matrix(g) * oracle::group_matrix(h)) <
              1e-12);
        CHECK(matrix_gap(oracle::group_matrix(inverse(g)), oracle::group_matrix(g).inverse()) < 1e-11);
        CHECK(is_identity(compose(g, inverse(g)), 1e-12));
      }
    }
  }

  TEST_CASE("heisenberg and euclid worked examples") {
    const GroupElement g = HeisenbergElement{1, 2, 3}, h = HeisenbergElement{4, 5, 6};
    const GroupElement prod = compose(g, h);
    const auto& gh = prod.heisenberg();
    CHECK(gh.a == doctest::Approx(1 + 4 + 2 * 6));
    CHECK(gh.b == doctest::Approx(7));
    CHECK(gh.c == doctest::Approx(9));

    const Mat3 A = rotation_about(Vec3::UnitZ(), 0.7);
    const GroupElement e = make_euclid(A, Vec3(1, 2, 3));
    const GroupElement t = make_euclid(Mat3::Identity(), Vec3(0, 0, 1));
    const GroupElement prod2 = compose(e, t);
    const auto& et = prod2.euclid();
    CHECK((et.c - (A * Vec3(0, 0, 1) + Vec3(1, 2, 3))).norm() < 1e-15);
  }

  TEST_CASE("euclid drift guard keeps rotations orthogonal") {
    Rng rng(2);
    GroupElement g = GroupElement::identity(Family::Euclid);
    const GroupElement step = random_group_element(Family::Euclid, rng);
    for (int i = 0; i < 1000; ++i) g = compose(g, step);
    const Mat3& A = g.euclid().A;
    CHECK((A.transpose() * A - Mat3::Identity()).norm() < 1e-12);
    CHECK(A.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("exp agrees with the matrix series") {
    Rng rng(3);
    for (Family f : kMatrixFamilies) {
      for (int i = 0; i < 200; ++i) {
        const AlgebraElement Z = random_algebra_element(f, rng, 1.5);
        CHECK(matrix_gap(oracle::group_matrix(exp(Z)), oracle::expm(oracle::algebra_matrix(Z))) < 1e-10);
      }
    }
  }

  TEST_CASE("heisenberg exp closed form") {
    const GroupElement x = exp(heisenberg_algebra(0.3, 2.0, -1.5));
    const auto& g = x.heisenberg();
    CHECK(g.a == doctest::Approx(0.3 + 2.0 * -1.5 / 2));
    CHECK(g.b == doctest::Approx(2.0));
    CHECK(g.c == doctest::Approx(-1.5));
  }

  TEST_CASE("euclid exp of a vertical rotation is the Rodrigues rotation") {
    const GroupElement x = exp(euclid_algebra(Vec3(0, 0, 0.9), Vec3::Zero()));
    const auto& g = x.euclid();
    const double c = std::cos(0.9), s = std::sin(0.9);
    Mat3 R;
    R << c, -s, 0, s, c, 0, 0, 0, 1;
    CHECK((g.A - R).norm() < 1e-14);
  }

  TEST_CASE("log inverts exp on the principal branch") {
    Rng rng(4);
    for (Family f : kMatrixFamilies) {
      for (int i = 0; i < 200; ++i) {
        const AlgebraElement Z = random_algebra_element(f, rng, 0.9);
        CHECK((log(exp(Z)).coords - Z.coords).norm() < 1e-10);
        const GroupElement g = exp(Z);
        CHECK(distance(exp(log(g)), g) < 1e-10);
      }
    }
  }

  TEST_CASE("log refuses the branch cut") {
    const GroupElement flip = make_euclid(rotation_about(Vec3::UnitX(), std::numbers::pi), Vec3::Zero());
    CHECK(code_of([&] { (void)log(flip); }) == ErrorCode::BranchCut);
    const GroupElement minus_one = su2_axis_angle(Vec3::UnitY(), 2 * std::numbers::pi - 1e-12);
    CHECK(code_of([&] { (void)log(minus_one); }) == ErrorCode::BranchCut);
    const GroupElement fine = make_euclid(rotation_about(Vec3::UnitX(), std::numbers::pi - 1e-6), Vec3::Zero());
    CHECK_NOTHROW((void)log(fine));
  }

  TEST_CASE("bracket matches the matrix commutator") {
    Rng rng(5);
    for (Family f : kMatrixFamilies) {
      for (int i = 0; i < 100; ++i) {
        const AlgebraElement Z = random_algebra_element(f, rng), W = random_algebra_element(f, rng);
        const oracle::Mat z = oracle::algebra_matrix(Z), w = oracle::algebra_matrix(W);
        CHECK((bracket(Z, W).coords - oracle::algebra_coords(f, z * w - w * z)).norm() < 1e-12);
      }
    }
    // Rotation rate alpha and translation gamma bracket to the translation alpha x gamma.
    const Vec3 a(0.2, -1, 0.5), g(1, 2, 3);
    const AlgebraElement b = bracket(euclid_algebra(a, Vec3::Zero()), euclid_algebra(Vec3::Zero(), g));
    CHECK(euclid_rotation_part(b).norm() < 1e-15);
    CHECK((euclid_translation_part(b) - a.cross(g)).norm() < 1e-14);
  }

  TEST_CASE("adjoint is conjugation") {
    Rng rng(6);
    for (Family f : kMatrixFamilies) {
      for (int i = 0; i < 100; ++i) {
        const GroupElement g = random_group_element(f, rng);
        const AlgebraElement Z = random_algebra_element(f, rng);
        const oracle::Mat G = oracle::group_matrix(g);
        const oracle::Mat conj = G * oracle::algebra_matrix(Z) * G.inverse();
        CHECK((adjoint(g, Z).coords - oracle::algebra_coords(f, conj)).norm() < 1e-10);
      }
    }
  }

  TEST_CASE("coadjoint action is dual to the adjoint action") {
    Rng rng(7);
    for (Family f : kMatrixFamilies) {
      for (int i = 0; i < 100; ++i) {
        const GroupElement g = random_group_element(f, rng);
        const CoadjointVector w = random_coadjoint(f, rng);
        const AlgebraElement Z = random_algebra_element(f, rng);
        const oracle::Mat G = oracle::group_matrix(g);
        const Eigen::VectorXd back = oracle::algebra_coords(f, G.inverse() * oracle::algebra_matrix(Z) * G);
        const AlgebraElement Zb{f, back};
        CHECK(oracle::pairing(coadjoint(g, w), Z) == doctest::Approx(oracle::pairing(w, Zb)).epsilon(1e-10));
        CHECK(pair(w, Z) == doctest::Approx(oracle::pairing(w, Z)).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("euclid coadjoint closed form") {
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
      const Mat3 A = random_rotation(rng);
      const Vec3 c(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2));
      const Vec3 L(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
      const Vec3 P(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
      const CoadjointVector w = coadjoint(GroupElement(make_euclid(A, c)), euclid_dual(L, P));
      Eigen::VectorXd expected(6);
      expected << A * L + c.cross(A * P), A * P;
      CHECK((w.coords - expected).norm() < 1e-12);
    }
  }

  TEST_CASE("heisenberg coadjoint closed form") {
    const CoadjointVector w = coadjoint(HeisenbergElement{0.4, 2, -3}, heisenberg_dual(1.5, 0.2, 0.7));
    CHECK(w.coords[0] == doctest::Approx(1.5));
    CHECK(w.coords[1] == doctest::Approx(0.2 + 2 * 1.5));
    CHECK(w.coords[2] == doctest::Approx(0.7 - 3 * 1.5));
  }

  TEST_CASE("commuting predicate") {
    const AlgebraElement t1 = euclid_algebra(Vec3::Zero(), Vec3(1, 0, 0));
    const AlgebraElement t2 = euclid_algebra(Vec3::Zero(), Vec3(0, 2, 1));
    const AlgebraElement r = euclid_algebra(Vec3(0, 0, 1), Vec3::Zero());
    CHECK(commuting(std::vector{t1, t2}));
    CHECK_FALSE(commuting(std::vector{t1, r}));
    CHECK(commuting(std::vector{r, euclid_algebra(Vec3(0, 0, 2), Vec3(0, 0, 5))}));
    CHECK_FALSE(commuting(std::vector{heisenberg_algebra(0, 1, 0), heisenberg_algebra(0, 0, 1)}));
    CHECK(commuting(std::vector{heisenberg_algebra(3, 0, 0), heisenberg_algebra(0, 1, 2)}));
  }

  TEST_CASE("torus is abelian with angles mod 2 pi") {
    const GroupElement g = TorusElement{{1.0, 6.0}}, h = TorusElement{{6.0, 1.0}};
    const GroupElement prod = compose(g, h);
    const auto& gh = prod.torus();
    CHECK(gh.angles[0] == doctest::Approx(7.0 - 2 * std::numbers::pi));
    CHECK(distance(compose(g, h), compose(h, g)) < 1e-15);
  }

  TEST_CASE("invalid elements are rejected") {
    Mat3 bad = Mat3::Identity();
    bad(0, 1) = 1e-6;
    CHECK(code_of([&] { (void)make_euclid(bad, Vec3::Zero()); }) == ErrorCode::InvalidElement);
    CHECK(code_of([&] { (void)make_su2(1, 1e-5, 0, 0); }) == ErrorCode::InvalidElement);
    CHECK(code_of([&] { (void)make_euclid(-Mat3::Identity(), Vec3::Zero()); }) == ErrorCode::InvalidElement);
    CHECK(code_of([&] { (void)compose(HeisenbergElement{}, BargmannElement{}); }) == ErrorCode::FamilyMismatch);
  }

  TEST_CASE("json round trip and schema pointers") {
    Rng rng(9);
    for (Family f : kMatrixFamilies) {
      const GroupElement g = random_group_element(f, rng);
      CHECK(distance(group_element_from_json(to_json(g)), g) < 1e-15);
      const AlgebraElement Z = random_algebra_element(f, rng);
      CHECK((algebra_element_from_json(to_json(Z)).coords - Z.coords).norm() == 0.0);
      const CoadjointVector w = random_coadjoint(f, rng);
      CHECK((coadjoint_from_json(to_json(w)).coords - w.coords).norm() == 0.0);
    }
    const json euclid = json::parse(R"({"family":"euclid","A":[[1,0,0],[0,1,0],[0,0,1]],"c":[0,"x",0]})");
    try {
      (void)group_element_from_json(euclid, "/elements/3");
      FAIL("expected a schema error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Schema);
      CHECK(std::string(e.what()).rfind("/elements/3/c/1", 0) == 0);
    }
    CHECK(to_json(GroupElement(HeisenbergElement{1, 2, 3})) ==
          json::parse(R"({"family":"heisenberg","a":1.0,"b":2.0,"c":3.0})"));
  }
}
