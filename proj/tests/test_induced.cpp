#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>
#include <numbers>

#include "qstates/error.hpp"
#include "qstates/induced.hpp"

using namespace qstates;

namespace {

constexpr double kPi = std::numbers::pi;

cplx expi(double x) { return std::polar(1.0, x); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Schema;
}

GroupElement draw(const State& m, Rng& rng, int i) {
  return i % 2 ? random_group_element(m.family(), rng) : m.sample_character_subgroup(rng);
}

}  // namespace

TEST_SUITE("induced") {
  TEST_CASE("heisenberg table rows reproduce the four states") {
    StateParams p;
    p.k = 1.3, p.ell = -0.7, p.t = 0.6;
    const std::array<std::pair<HeisenbergRow, StateKind>, 4> rows{{{HeisenbergRow::A, StateKind::HeisenbergLocP},
                                                                    {HeisenbergRow::B, StateKind::HeisenbergLocQ},
                                                                    {HeisenbergRow::C, StateKind::HeisenbergLocT},
                                                                    {HeisenbergRow::D, StateKind::HeisenbergCenter}}};
    Rng rng(41);
    for (const auto& [row, kind] : rows) {
      const State m = make_state(kind, p);
      CAPTURE(m.name());
      const Action act = heisenberg_row_action(row, p.t);
      const SectionVector f = heisenberg_cyclic_vector(row, p.k, p.ell, p.t);
      for (int i = 0; i < 400; ++i) {
        const GroupElement g = draw(m, rng, i);
        CHECK(std::abs(matrix_coefficient(act, f, g) - m(g)) < 1e-12);
      }
    }
  }

  TEST_CASE("row a written out") {
    // (g phi)(p) = e^{-ia} e^{ipc} phi(p - b) on a two-point section.
    const SectionVector f = SectionVector::counting(1, {Vec3(0.5, 0, 0), Vec3(2.0, 0, 0)}, {cplx{0.6}, cplx{0, 0.8}});
    const GroupElement g = HeisenbergElement{0.3, 1.0, -2.0};
    const SectionVector gf = heisenberg_action(HeisenbergRow::A, g, f);
    CHECK(std::abs(gf.value_at(Vec3(1.5, 0, 0)) - expi(-0.3 + 1.5 * -2.0) * 0.6) < 1e-15);
    CHECK(std::abs(gf.value_at(Vec3(3.0, 0, 0)) - expi(-0.3 + 3.0 * -2.0) * cplx{0, 0.8}) < 1e-15);
    CHECK(gf.value_at(Vec3(0.5, 0, 0)) == cplx{});
    CHECK(norm(gf) == doctest::Approx(1.0));
  }

  TEST_CASE("actions are representations") {
    Rng rng(42);
    const SectionVector f = SectionVector::counting(1, {Vec3(0.2, 0, 0), Vec3(-1.1, 0, 0)}, {cplx{0.6}, cplx{0.8}});
    for (HeisenbergRow row : {HeisenbergRow::A, HeisenbergRow::B, HeisenbergRow::C}) {
      const Action act = heisenberg_row_action(row, 0.6);
      for (int i = 0; i < 50; ++i) {
        const GroupElement g = random_group_element(Family::Heisenberg, rng), h = random_group_element(Family::Heisenberg, rng);
        const SectionVector lhs = act(compose(g, h), f), rhs = act(g, act(h, f));
        CHECK(std::abs(inner_product(lhs, rhs) - 1.0) < 1e-12);
      }
    }
    const Action bar = bargmann_p_action();
    for (int i = 0; i < 50; ++i) {
      const GroupElement g = random_group_element(Family::Bargmann, rng), h = random_group_element(Family::Bargmann, rng);
      CHECK(std::abs(inner_product(bar(compose(g, h), f), bar(g, bar(h, f))) - 1.0) < 1e-12);
    }
  }

  TEST_CASE("bargmann module gives the p-localized state") {
    StateParams p;
    p.k = 1.1;
    const State m = make_state(StateKind::BargmannLocPE, p);
    const Action act = bargmann_p_action();
    const SectionVector f = SectionVector::delta(std::array{p.k});
    Rng rng(43);
    for (int i = 0; i < 400; ++i) {
      const GroupElement g = draw(m, rng, i);
      CHECK(std::abs(matrix_coefficient(act, f, g) - m(g)) < 1e-12);
    }
  }

  TEST_CASE("euclid discrete module gives the helicity zero plane wave") {
    StateParams p;
    p.k = 1.4;
    const State m = make_state(StateKind::EuclidPlane, p);
    const Action act = euclid_sphere_action(p.k);
    const SectionVector f = SectionVector::delta(std::array{0.0, 0.0, 1.0});
    Rng rng(44);
    for (int i = 0; i < 400; ++i) {
      const GroupElement g = draw(m, rng, i);
      CHECK(std::abs(matrix_coefficient(act, f, g) - m(g)) < 1e-12);
    }
    CHECK(code_of([&] { (void)euclid_action(1.0, GroupElement::identity(Family::Euclid),
                                             SectionVector::delta(std::array{0.0, 0.0, 2.0})); }) ==
          ErrorCode::NonUnitSupport);
  }

  TEST_CASE("sphere average of a plane wave is sin x / x") {
    const auto grid = std::make_shared<const SphereGrid>(sphere_grid(64, 128));
    const SectionVector one = SectionVector::on_sphere(grid, [](const Vec3&) { return cplx{1.0}; });
    CHECK(norm(one) == doctest::Approx(1.0).epsilon(1e-14));
    Rng rng(45);
    const double k = 2.0;
    for (int i = 0; i < 50; ++i) {
      const Vec3 c = random_unit_vector(rng) * uniform(rng, 0.0, 10.0 / k);
      const cplx v = matrix_coefficient(euclid_sphere_action(k), one, make_euclid(random_rotation(rng), c));
      const double x = k * c.norm();
      CHECK(std::abs(v - (x == 0 ? 1.0 : std::sin(x) / x)) < 1e-10);
    }
  }

  TEST_CASE("circle average of a plane wave is J0") {
    const CircleGrid grid = circle_grid(512);
    Rng rng(46);
    for (int eps : {0, 1}) {
      for (int i = 0; i < 50; ++i) {
        const bool flip = i % 2;
        Mat3 A = rotation_about(Vec3::UnitZ(), uniform(rng, -kPi, kPi));
        if (flip) A = A * rotation_about(Vec3::UnitX(), kPi);
        const Vec3 c(uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5));
        const double k = 1.3;
        const cplx v = cylindrical_coefficient(k, eps, make_euclid(A, c), grid);
        const double j0 = std::cyl_bessel_j(0.0, k * std::hypot(c[0], c[1]));
        CHECK(std::abs(v - ((flip && eps) ? -j0 : j0)) < 1e-10);
      }
    }
    // Off H+- the coefficient vanishes and the action refuses the element.
    const GroupElement tilted = make_euclid(rotation_about(Vec3::UnitX(), 0.4), Vec3::Zero());
    CHECK(cylindrical_coefficient(1.0, 0, tilted, grid) == cplx{});
    const auto shared = std::make_shared<const CircleGrid>(grid);
    const SectionVector one = SectionVector::on_circle(shared, [](const Vec3&) { return cplx{1.0}; });
    CHECK(code_of([&] { (void)cylindrical_action(1.0, 0, tilted, one); }) == ErrorCode::InvalidParameter);
  }

  TEST_CASE("inner products refuse mixed sections") {
    const auto grid = std::make_shared<const SphereGrid>(sphere_grid(8, 16));
    const auto other = std::make_shared<const SphereGrid>(sphere_grid(8, 16));
    const SectionVector a = SectionVector::on_sphere(grid, [](const Vec3&) { return cplx{1.0}; });
    const SectionVector b = SectionVector::on_sphere(other, [](const Vec3&) { return cplx{1.0}; });
    CHECK(code_of([&] { (void)inner_product(a, b); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { (void)inner_product(a, SectionVector::delta(std::array{1.0})); }) == ErrorCode::InvalidParameter);
    const SectionVector half = SectionVector::delta(std::array{1.0}, 0.5);
    CHECK(code_of([&] { (void)matrix_coefficient(heisenberg_row_action(HeisenbergRow::A), half, HeisenbergElement{}); }) ==
          ErrorCode::Unnormalized);
  }

  TEST_CASE("counting sections merge nearby support points") {
    const SectionVector f = SectionVector::counting(1, {Vec3(1.0, 0, 0), Vec3(1.0 + 1e-12, 0, 0)}, {cplx{1.0}, cplx{2.0}});
    CHECK(f.points().size() == 1);
    CHECK(f.values()[0] == cplx{3.0});
  }

  TEST_CASE("mackey shoda condition a") {
    const double k = 1.2;
    const SubgroupCharacter T = euclid_flip_translation_character(k, 1);
    Rng rng(47);
    std::vector<GroupElement> probes;
    for (int i = 0; i < 10; ++i) {
      probes.push_back(make_euclid(Mat3::Identity(), Vec3(uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3))));
    }
    // g in the normalizer direction: identity holds trivially.
    CHECK(mackey_shoda_a(T, T, GroupElement::identity(Family::Euclid), probes).holds);
    // A generic rotation about e3 moves the translation character.
    const GroupElement g = make_euclid(rotation_about(Vec3::UnitZ(), 0.9), Vec3::Zero());
    const MackeyShodaReport r = mackey_shoda_a(T, T, g, probes);
    CHECK_FALSE(r.holds);
    CHECK(r.max_defect > 1e-3);
    // Probes outside H are rejected.
    const std::vector<GroupElement> bad{make_euclid(rotation_about(Vec3::UnitZ(), 0.3), Vec3::Zero())};
    CHECK(code_of([&] { (void)mackey_shoda_a(T, T, g, bad); }) == ErrorCode::ProbeNotInIntersection);
  }

  TEST_CASE("character of a localized state") {
    StateParams p;
    p.k = 0.7;
    const State m = make_state(StateKind::HeisenbergLocP, p);
    const SubgroupCharacter chi = character_of(m);
    CHECK(chi.contains(HeisenbergElement{1, 0, 2}));
    CHECK_FALSE(chi.contains(HeisenbergElement{1, 0.1, 2}));
    CHECK(std::abs(chi.value(HeisenbergElement{1, 0, 2}) - expi(-1 + 1.4)) < 1e-15);
  }
}
