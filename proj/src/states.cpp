#include "qstates/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qstates/error.hpp"
#include "qstates/special.hpp"

namespace qstates {

namespace {

constexpr std::pair<StateKind, std::string_view> kKindNames[] = {
    {StateKind::HeisenbergLocP, "heisenberg_loc_p"},
    {StateKind::HeisenbergLocQ, "heisenberg_loc_q"},
    {StateKind::HeisenbergLocT, "heisenberg_loc_t"},
    {StateKind::HeisenbergCenter, "heisenberg_center"},
    {StateKind::BargmannLocPE, "bargmann_loc_pe"},
    {StateKind::BargmannLocQ, "bargmann_loc_q"},
    {StateKind::EuclidPlane, "euclid_plane"},
    {StateKind::EuclidSpherical, "euclid_spherical"},
    {StateKind::EuclidCylindrical, "euclid_cylindrical"},
    {StateKind::SU2HighestWeight, "su2_highest_weight"},
    {StateKind::ConstantOne, "constant_one"},
    {StateKind::Custom, "custom"},
};

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

bool is_integer(double x) { return std::isfinite(x) && x == std::round(x); }

// A e3 == sign * e3 within tol.
bool fixes_axis(const Mat3& A, double sign, double tol) {
  return std::fabs(A(0, 2)) < tol && std::fabs(A(1, 2)) < tol && std::fabs(A(2, 2) - sign) < tol;
}

// Rotation about e3, possibly composed with the flip rot(pi e1).
Mat3 axis_rotation(double angle, bool flip) {
  Mat3 A = rotation_about(Vec3::UnitZ(), angle);
  if (flip) A = A * Vec3(1, -1, -1).asDiagonal();
  return A;
}

}  // namespace

std::string_view to_string(StateKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StateKind state_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown state kind '" + std::string(name) + "'");
}

std::optional<Family> family_of(StateKind kind) noexcept {
  switch (kind) {
    case StateKind::HeisenbergLocP:
    case StateKind::HeisenbergLocQ:
    case StateKind::HeisenbergLocT:
    case StateKind::HeisenbergCenter: return Family::Heisenberg;
    case StateKind::BargmannLocPE:
    case StateKind::BargmannLocQ: return Family::Bargmann;
    case StateKind::EuclidPlane:
    case StateKind::EuclidSpherical:
    case StateKind::EuclidCylindrical: return Family::Euclid;
    case StateKind::SU2HighestWeight: return Family::SU2;
    case StateKind::ConstantOne:
    case StateKind::Custom: return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- construction

State make_state(StateKind kind, const StateParams& p, Family family, const Tolerances& tol) {
  State m;
  m.kind_ = kind;
  m.params_ = p;
  m.tol_ = tol;
  m.family_ = family_of(kind).value_or(family);
  m.name_ = std::string(to_string(kind));

  auto need_positive_k = [&] {
    if (!(p.k > 0)) throw Error(ErrorCode::InvalidParameter, m.name_ + ": wavenumber k must be > 0");
  };
  auto need_finite = [&](double x, const char* what) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParameter, m.name_ + ": non-finite " + what);
  };
  need_finite(p.k, "k");
  need_finite(p.ell, "ell");
  need_finite(p.t, "t");

  switch (kind) {
    case StateKind::HeisenbergLocP:
      m.localization_ = Localization{"H_inf = {b = 0}", "p = k"};
      break;
    case StateKind::HeisenbergLocQ:
      m.localization_ = Localization{"H_0 = {c = 0}", "q = ell"};
      break;
    case StateKind::HeisenbergLocT:
      m.localization_ = Localization{"H_t = {c = -b t}", "q + p t = ell + k t"};
      break;
    case StateKind::HeisenbergCenter:
      m.localization_ = Localization{"center {b = c = 0}", "M = 1"};
      break;
    case StateKind::BargmannLocPE:
      m.localization_ = Localization{"H_inf = {b = 0}", "(p, E) = (k, k^2/2)"};
      break;
    case StateKind::BargmannLocQ:
      m.localization_ = Localization{"H_0 = {c = e = 0}", "q = ell"};
      break;
    case StateKind::EuclidPlane:
      need_positive_k();
      if (!is_integer(p.s)) {
        throw Error(ErrorCode::NonIntegralParameter,
                    "euclid_plane: helicity s must be an integer for the character of H to exist");
      }
      m.localization_ = Localization{"H = {A = rot(alpha e3)}", "(s e3, k e3)"};
      break;
    case StateKind::EuclidSpherical:
      need_positive_k();
      m.localization_ = Localization{"K = SO(3)", "0"};
      break;
    case StateKind::EuclidCylindrical:
      need_positive_k();
      if (p.epsilon != 0 && p.epsilon != 1) {
        throw Error(ErrorCode::NonIntegralParameter, "euclid_cylindrical: parity epsilon must be 0 or 1");
      }
      m.localization_ = Localization{"G_a = stabilizer of the e3 axis", "0"};
      break;
    case StateKind::SU2HighestWeight: {
      if (!is_integer(2 * p.j)) {
        throw Error(ErrorCode::NonIntegralParameter, "su2_highest_weight: 2j must be an integer (integral weight)");
      }
      if (p.j < 0 || 2 * p.j > 8) {
        throw Error(ErrorCode::InvalidParameter, "su2_highest_weight: 2j must lie in {0,...,8}");
      }
      m.localization_ = Localization{"maximal torus", "weight j"};
      break;
    }
    case StateKind::ConstantOne:
      m.name_ = "constant_one/" + std::string(to_string(m.family_));
      break;
    case StateKind::Custom:
      throw Error(ErrorCode::InvalidParameter, "custom states are built with custom_state()");
  }
  return m;
}

State su2_highest_weight(double j) {
  StateParams p;
  p.j = j;
  return make_state(StateKind::SU2HighestWeight, p);
}

State constant_one(Family family) { return make_state(StateKind::ConstantOne, {}, family); }

State custom_state(Family family, State::Evaluator evaluator, std::string name, std::size_t torus_dim) {
  State m;
  m.kind_ = StateKind::Custom;
  m.family_ = family;
  m.custom_ = std::move(evaluator);
  m.name_ = std::move(name);
  m.torus_dim_ = torus_dim;
  return m;
}

// ---------------------------------------------------------------- evaluation

cplx State::operator()(const GroupElement& g) const {
  if (g.family() != family_) {
    throw Error(ErrorCode::FamilyMismatch, "state " + name_ + " evaluated on a " + std::string(to_string(g.family())) +
                                               " element");
  }
  const double d = tol_.delta;
  const auto& p = params_;
  switch (kind_) {
    case StateKind::HeisenbergLocP: {
      const auto& x = g.heisenberg();
      return std::fabs(x.b) < d ? expi(-x.a + p.k * x.c) : cplx{};
    }
    case StateKind::HeisenbergLocQ: {
      const auto& x = g.heisenberg();
      return std::fabs(x.c) < d ? expi(-x.a - p.ell * x.b) : cplx{};
    }
    case StateKind::HeisenbergLocT: {
      const auto& x = g.heisenberg();
      if (std::fabs(x.c + x.b * p.t) >= d) return {};
      // <(1,k,ell), log g> = k c - ell b - (a - bc/2)
      return expi(p.k * x.c - p.ell * x.b - x.a + 0.5 * x.b * x.c);
    }
    case StateKind::HeisenbergCenter: {
      const auto& x = g.heisenberg();
      return std::fabs(x.b) < d && std::fabs(x.c) < d ? expi(-x.a) : cplx{};
    }
    case StateKind::BargmannLocPE: {
      const auto& x = g.bargmann();
      return std::fabs(x.b) < d ? expi(-x.a + p.k * x.c - 0.5 * p.k * p.k * x.e) : cplx{};
    }
    case StateKind::BargmannLocQ: {
      const auto& x = g.bargmann();
      return std::fabs(x.c) < d && std::fabs(x.e) < d ? expi(-x.a - p.ell * x.b) : cplx{};
    }
    case StateKind::EuclidPlane: {
      const auto& x = g.euclid();
      if (!fixes_axis(x.A, 1.0, d) || std::fabs(x.A(2, 0)) >= d || std::fabs(x.A(2, 1)) >= d) return {};
      const double alpha = std::atan2(x.A(1, 0), x.A(0, 0));
      return expi(p.s * alpha + p.k * x.c.z());
    }
    case StateKind::EuclidSpherical: return sinc(p.k * g.euclid().c.norm());
    case StateKind::EuclidCylindrical: {
      const auto& x = g.euclid();
      const double r = p.k * std::hypot(x.c.x(), x.c.y());
      if (fixes_axis(x.A, 1.0, d)) return bessel_j0(r);
      if (fixes_axis(x.A, -1.0, d)) return (p.epsilon ? -1.0 : 1.0) * bessel_j0(r);
      return {};
    }
    case StateKind::SU2HighestWeight: {
      const int n = static_cast<int>(std::lround(2 * p.j));
      cplx v{1.0, 0.0};
      const cplx a = g.su2().alpha();
      for (int i = 0; i < n; ++i) v *= a;
      return v;
    }
    case StateKind::ConstantOne: return {1.0, 0.0};
    case StateKind::Custom: return custom_(g);
  }
  return {};
}

bool State::in_character_subgroup(const GroupElement& g) const {
  const double d = tol_.delta;
  switch (kind_) {
    case StateKind::HeisenbergLocP: return std::fabs(g.heisenberg().b) < d;
    case StateKind::HeisenbergLocQ: return std::fabs(g.heisenberg().c) < d;
    case StateKind::HeisenbergLocT: return std::fabs(g.heisenberg().c + g.heisenberg().b * params_.t) < d;
    case StateKind::HeisenbergCenter: return std::fabs(g.heisenberg().b) < d && std::fabs(g.heisenberg().c) < d;
    case StateKind::BargmannLocPE: return std::fabs(g.bargmann().b) < d;
    case StateKind::BargmannLocQ: return std::fabs(g.bargmann().c) < d && std::fabs(g.bargmann().e) < d;
    case StateKind::EuclidPlane: return fixes_axis(g.euclid().A, 1.0, d);
    case StateKind::EuclidSpherical: return g.euclid().c.norm() < d;
    case StateKind::EuclidCylindrical: {
      const auto& x = g.euclid();
      return (fixes_axis(x.A, 1.0, d) || fixes_axis(x.A, -1.0, d)) && std::hypot(x.c.x(), x.c.y()) < d;
    }
    case StateKind::SU2HighestWeight: {
      if (params_.j == 0) return true;
      return std::abs(g.su2().beta()) < d;
    }
    case StateKind::ConstantOne: return true;
    case StateKind::Custom: return std::fabs(std::abs((*this)(g)) - 1.0) < tol_.modulus_one;
  }
  return false;
}

GroupElement State::sample_character_subgroup(Rng& rng, double scale) const {
  auto u = [&] { return uniform(rng, -scale, scale); };
  const double t = params_.t;
  switch (kind_) {
    case StateKind::HeisenbergLocP: {
      const double a = u(), c = u();
      return HeisenbergElement{a, 0.0, c};
    }
    case StateKind::HeisenbergLocQ: {
      const double a = u(), b = u();
      return HeisenbergElement{a, b, 0.0};
    }
    case StateKind::HeisenbergLocT: {
      const double a = u(), b = u();
      return HeisenbergElement{a, b, -b * t};
    }
    case StateKind::HeisenbergCenter: return HeisenbergElement{u(), 0.0, 0.0};
    case StateKind::BargmannLocPE: {
      const double a = u(), c = u(), e = u();
      return BargmannElement{a, 0.0, c, e};
    }
    case StateKind::BargmannLocQ: {
      const double a = u(), b = u();
      return BargmannElement{a, b, 0.0, 0.0};
    }
    case StateKind::EuclidPlane: {
      const double angle = uniform(rng, -std::numbers::pi, std::numbers::pi);
      const double x = u(), y = u(), z = u();
      return EuclidElement{axis_rotation(angle, false), Vec3(x, y, z), 0};
    }
    case StateKind::EuclidSpherical: return EuclidElement{random_rotation(rng), Vec3::Zero(), 0};
    case StateKind::EuclidCylindrical: {
      const double angle = uniform(rng, -std::numbers::pi, std::numbers::pi);
      const bool flip = uniform(rng, 0.0, 1.0) < 0.5;
      return EuclidElement{axis_rotation(angle, flip), Vec3(0, 0, u()), 0};
    }
    case StateKind::SU2HighestWeight:
      if (params_.j == 0) return random_group_element(Family::SU2, rng, scale);
      return su2_torus(uniform(rng, -2 * std::numbers::pi, 2 * std::numbers::pi));
    case StateKind::ConstantOne:
    case StateKind::Custom: return random_group_element(family_, rng, scale, torus_dim_);
  }
  return GroupElement::identity(family_, torus_dim_);
}

// ---------------------------------------------------------------- Gram form

std::size_t GramMatrix::rank(double tol) const {
  const double cut = tol * static_cast<double>(size());
  return static_cast<std::size_t>((eigenvalues.array() > cut).count());
}

double GramMatrix::hermitian_defect() const {
  if (entries.size() == 0) return 0.0;
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

GramMatrix gram(const State& m, std::span<const GroupElement> samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidParameter, "gram: empty sample list");
  GramMatrix gm;
  gm.samples.assign(samples.begin(), samples.end());
  const auto n = static_cast<Eigen::Index>(samples.size());
  std::vector<GroupElement> inverses;
  inverses.reserve(samples.size());
  for (const auto& s : samples) inverses.push_back(inverse(s));
  gm.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) gm.entries(i, j) = m(compose(inverses[i], samples[j]));
  }
  // Eigen-decompose the hermitian part; the raw entries are kept so the
  // hermitian defect stays observable.
  const Eigen::MatrixXcd herm = 0.5 * (gm.entries + gm.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  gm.eigenvalues = es.eigenvalues().reverse();
  gm.eigenvectors = es.eigenvectors().rowwise().reverse();
  return gm;
}

PsdReport check_psd(const GramMatrix& gm, double tol) {
  PsdReport r;
  r.min_eigenvalue = gm.min_eigenvalue();
  r.threshold = -tol * static_cast<double>(gm.size());
  r.pass = r.min_eigenvalue >= r.threshold;
  return r;
}

InequalityReport check_inequalities(const State& m, std::span<const std::pair<GroupElement, GroupElement>> pairs,
                                    double slack) {
  InequalityReport r;
  r.herglotz_margin = r.krein_margin = r.weil_margin = INFINITY;
  auto note = [&](double& margin, double lhs, double rhs, const char* which, const GroupElement& g,
                  const GroupElement& h) {
    margin = std::min(margin, rhs - lhs);
    if (lhs > rhs + slack) {
      r.pass = false;
      if (!r.witness) r.witness = InequalityWitness{g, h, which, lhs, rhs};
    }
  };
  for (const auto& [g, h] : pairs) {
    const cplx mg = m(g), mh = m(h);
    const cplx mgh = m(compose(g, h));
    const cplx mgih = m(compose(inverse(g), h));
    const double ag = std::abs(mg), ah = std::abs(mh);
    note(r.herglotz_margin, ag, 1.0, "herglotz", g, h);
    note(r.herglotz_margin, ah, 1.0, "herglotz", h, g);
    note(r.krein_margin, std::abs(mg - mh), std::sqrt(std::max(0.0, 2.0 * (1.0 - mgih.real()))), "krein", g, h);
    const double weil_rhs = std::sqrt(std::max(0.0, 1.0 - ag * ag)) * std::sqrt(std::max(0.0, 1.0 - ah * ah));
    note(r.weil_margin, std::abs(mgh - mg * mh), weil_rhs, "weil", g, h);
    ++r.pairs;
  }
  if (pairs.empty()) r.herglotz_margin = r.krein_margin = r.weil_margin = 0.0;
  return r;
}

ModulusPartition modulus_one_subgroup_probe(const State& m, std::span<const GroupElement> samples, double tol) {
  ModulusPartition out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (std::fabs(std::abs(m(samples[i])) - 1.0) < tol ? out.inside : out.outside).push_back(i);
  }
  for (std::size_t a = 0; a < out.inside.size(); ++a) {
    for (std::size_t b = 0; b < out.inside.size(); ++b) {
      const auto i = out.inside[a], j = out.inside[b];
      const GroupElement prod = compose(samples[i], inverse(samples[j]));
      ++out.products_checked;
      if (std::fabs(std::abs(m(prod)) - 1.0) >= tol) out.closure_violations.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<GroupElement> structured_samples(const State& m, std::size_t n, Rng& rng, double scale) {
  const Family f = m.family();
  std::vector<GroupElement> pool{GroupElement::identity(f, m.torus_dim())};
  for (int i = 0; i < 3; ++i) pool.push_back(random_group_element(f, rng, scale, m.torus_dim()));
  std::vector<GroupElement> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform(rng, 0.0, 1.0);
    if (u < 0.75) {
      const auto& r = pool[static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(pool.size()))) % pool.size()];
      out.push_back(compose(r, m.sample_character_subgroup(rng, scale)));
    } else {
      out.push_back(random_group_element(f, rng, scale, m.torus_dim()));
    }
  }
  return out;
}

}  // namespace qstates
