#include "qstates/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qstates/error.hpp"
#include "qstates/simd.hpp"

namespace qstates {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMinBudget = 1000;
constexpr std::size_t kTopPerPrefix = 8;
constexpr int kAscentSteps = 50;

Vec3 vec3(std::span<const double> v, std::size_t off) { return Vec3(v[off], v[off + 1], v[off + 2]); }

// Dual coordinates of the chart point; no unit checks.
Eigen::VectorXd chart_moment(const OrbitSpec& spec, std::span<const double> x) {
  switch (spec.family) {
    case Family::Heisenberg: return Eigen::Vector3d(1.0, x[0], x[1]);
    case Family::Bargmann: return Eigen::Vector4d(1.0, x[0], x[1], 0.5 * x[0] * x[0]);
    case Family::Euclid: {
      const Vec3 r = vec3(x, 0), u = vec3(x, 3);
      Eigen::VectorXd out(6);
      out.head<3>() = spec.k * r.cross(u) + spec.s * u;
      out.tail<3>() = spec.k * u;
      return out;
    }
    case Family::SU2: return spec.lambda * vec3(x, 0);
    case Family::Torus: break;
  }
  throw Error(ErrorCode::InvalidParameter, "no coadjoint orbit chart for this family");
}

// d moment / d chart, dual_dim x chart_dim.
Eigen::MatrixXd chart_jacobian(const OrbitSpec& spec, std::span<const double> x) {
  switch (spec.family) {
    case Family::Heisenberg: {
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 2);
      J(1, 0) = 1;
      J(2, 1) = 1;
      return J;
    }
    case Family::Bargmann: {
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, 2);
      J(1, 0) = 1;
      J(3, 0) = x[0];
      J(2, 1) = 1;
      return J;
    }
    case Family::Euclid: {
      const Vec3 r = vec3(x, 0), u = vec3(x, 3);
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, 6);
      for (int i = 0; i < 3; ++i) {
        const Vec3 e = Vec3::Unit(i);
        J.block<3, 1>(0, i) = spec.k * e.cross(u);
        J.block<3, 1>(0, 3 + i) = spec.k * r.cross(e) + spec.s * e;
        J(3 + i, 3 + i) = spec.k;
      }
      return J;
    }
    case Family::SU2: return spec.lambda * Eigen::MatrixXd::Identity(3, 3);
    case Family::Torus: break;
  }
  throw Error(ErrorCode::InvalidParameter, "no coadjoint orbit chart for this family");
}

// Offset of the unit-vector block in the chart, or -1.
int sphere_offset(Family f) {
  if (f == Family::Euclid) return 3;
  if (f == Family::SU2) return 0;
  return -1;
}

void normalize_sphere(const OrbitSpec& spec, std::vector<double>& x) {
  const int off = sphere_offset(spec.family);
  if (off < 0) return;
  const double n = std::sqrt(x[off] * x[off] + x[off + 1] * x[off + 1] + x[off + 2] * x[off + 2]);
  for (int i = 0; i < 3; ++i) x[off + i] /= n;
}

// <x, Z> = <x, w(Z)> with the plain dot product on dual coordinates.
Eigen::VectorXd pairing_vector(const AlgebraElement& Z) {
  const auto& z = Z.coords;
  switch (Z.family) {
    case Family::Heisenberg: return Eigen::Vector3d(-z[0], z[2], -z[1]);
    case Family::Bargmann: return Eigen::Vector4d(-z[0], z[2], -z[1], -z[3]);
    default: return z;
  }
}

struct Polynomial {
  Eigen::MatrixXd W;  // dual_dim x n, columns are pairing vectors
  std::vector<cplx> c;
};

double modulus_at(const OrbitSpec& spec, const Polynomial& P, std::span<const double> x) {
  const Eigen::VectorXd phase = P.W.transpose() * chart_moment(spec, x);
  cplx F{};
  for (std::size_t j = 0; j < P.c.size(); ++j) F += P.c[j] * std::polar(1.0, phase[static_cast<Eigen::Index>(j)]);
  return std::abs(F);
}

struct AscentResult {
  double value;
  std::vector<double> x;
  std::size_t iterations;
};

// Projected-gradient ascent on |F|^2 with an adaptive step along the
// normalized gradient; unit-vector blocks are kept on the sphere.
AscentResult ascend(const OrbitSpec& spec, const Polynomial& P, std::vector<double> x) {
  normalize_sphere(spec, x);
  double f = modulus_at(spec, P, x);
  const Eigen::MatrixXd J0 = chart_jacobian(spec, x);
  double wmax = 0;
  for (Eigen::Index j = 0; j < P.W.cols(); ++j) wmax = std::max(wmax, (J0.transpose() * P.W.col(j)).norm());
  double step = wmax > 0 ? 0.5 / wmax : 0.0;
  std::size_t it = 0;
  const int off = sphere_offset(spec.family);
  for (; it < static_cast<std::size_t>(kAscentSteps) && step > 1e-15; ++it) {
    const Eigen::VectorXd phase = P.W.transpose() * chart_moment(spec, x);
    const Eigen::MatrixXd dphase = P.W.transpose() * chart_jacobian(spec, x);  // n x chart_dim
    cplx F{};
    std::vector<cplx> terms(P.c.size());
    for (std::size_t j = 0; j < P.c.size(); ++j) {
      terms[j] = P.c[j] * std::polar(1.0, phase[static_cast<Eigen::Index>(j)]);
      F += terms[j];
    }
    // grad |F|^2 = -2 sum_j Im(conj(F) c_j e^{i phi_j}) grad phi_j
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dphase.cols());
    for (std::size_t j = 0; j < terms.size(); ++j) {
      g -= 2.0 * std::imag(std::conj(F) * terms[j]) * dphase.row(static_cast<Eigen::Index>(j)).transpose();
    }
    if (off >= 0) {
      const Vec3 u(x[off], x[off + 1], x[off + 2]);
      const Vec3 gu = g.segment<3>(off);
      g.segment<3>(off) = gu - gu.dot(u) * u;
    }
    const double gn = g.norm();
    if (!(gn > 1e-300)) break;
    std::vector<double> trial(x);
    for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += step * g[static_cast<Eigen::Index>(i)] / gn;
    normalize_sphere(spec, trial);
    const double ft = modulus_at(spec, P, trial);
    if (ft > f) {
      f = ft;
      x = std::move(trial);
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  return {f, std::move(x), it};
}

void require_orbit_family(Family f) {
  if (f == Family::Torus) throw Error(ErrorCode::InvalidParameter, "no coadjoint orbit chart for the torus");
}

}  // namespace

// ---------------------------------------------------------------- OrbitSpec

std::size_t OrbitSpec::chart_dim() const {
  switch (family) {
    case Family::Heisenberg:
    case Family::Bargmann: return 2;
    case Family::Euclid: return 6;
    case Family::SU2: return 3;
    case Family::Torus: break;
  }
  require_orbit_family(family);
  return 0;
}

std::size_t OrbitSpec::dual_dim() const { return algebra_dimension(family); }

std::vector<std::vector<double>> OrbitSpec::anchors() const {
  switch (family) {
    case Family::Heisenberg:
    case Family::Bargmann: return {{k, ell}};
    case Family::Euclid: {
      std::vector<std::vector<double>> out{{0, 0, 0, 0, 0, 1}};
      for (int i = 0; i < 3; ++i) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> x{0, 0, 0, 0, 0, 0};
          x[3 + i] = sgn;
          if (!(i == 2 && sgn > 0)) out.push_back(x);
        }
      }
      return out;
    }
    case Family::SU2: {
      std::vector<std::vector<double>> out;
      for (int i = 2; i >= 0; --i) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> x{0, 0, 0};
          x[i] = sgn;
          out.push_back(x);
        }
      }
      return out;
    }
    case Family::Torus: break;
  }
  require_orbit_family(family);
  return {};
}

double OrbitSpec::relation_defect(const CoadjointVector& x) const {
  if (x.family != family || static_cast<std::size_t>(x.coords.size()) != dual_dim()) {
    throw Error(ErrorCode::FamilyMismatch, "orbit relation: dual vector of another family");
  }
  const auto& v = x.coords;
  switch (family) {
    case Family::Heisenberg: return std::fabs(v[0] - 1.0);
    case Family::Bargmann: return std::max(std::fabs(v[0] - 1.0), std::fabs(v[3] - 0.5 * v[1] * v[1]));
    case Family::Euclid: {
      const Vec3 L = v.head<3>(), P = v.tail<3>();
      return std::max(std::fabs(P.norm() - k), std::fabs(L.dot(P) - k * s));
    }
    case Family::SU2: return std::fabs(v.norm() - lambda);
    case Family::Torus: break;
  }
  require_orbit_family(family);
  return 0;
}

bool OrbitSpec::satisfies_relations(const CoadjointVector& x, double tol) const { return relation_defect(x) <= tol; }

OrbitSpec heisenberg_orbit(double k, double ell) {
  OrbitSpec s;
  s.family = Family::Heisenberg;
  s.k = k;
  s.ell = ell;
  return s;
}

OrbitSpec bargmann_orbit(double k, double ell) {
  OrbitSpec s;
  s.family = Family::Bargmann;
  s.k = k;
  s.ell = ell;
  return s;
}

OrbitSpec euclid_orbit(double k, double helicity) {
  if (!(k > 0)) throw Error(ErrorCode::InvalidParameter, "euclid orbit: k must be positive");
  OrbitSpec s;
  s.family = Family::Euclid;
  s.k = k;
  s.s = helicity;
  return s;
}

OrbitSpec su2_orbit(double lambda) {
  if (!(lambda >= 0)) throw Error(ErrorCode::InvalidParameter, "su2 orbit: radius must be nonnegative");
  OrbitSpec s;
  s.family = Family::SU2;
  s.lambda = lambda;
  return s;
}

OrbitSpec orbit_for(const State& m) {
  const auto& p = m.params();
  switch (m.kind()) {
    case StateKind::HeisenbergLocP:
    case StateKind::HeisenbergLocQ:
    case StateKind::HeisenbergLocT:
    case StateKind::HeisenbergCenter: return heisenberg_orbit(p.k, p.ell);
    case StateKind::BargmannLocPE:
    case StateKind::BargmannLocQ: return bargmann_orbit(p.k, p.ell);
    case StateKind::EuclidPlane: return euclid_orbit(p.k, p.s);
    case StateKind::EuclidSpherical:
    case StateKind::EuclidCylindrical: return euclid_orbit(p.k, 0.0);
    case StateKind::SU2HighestWeight: return su2_orbit(p.j);
    case StateKind::ConstantOne:
    case StateKind::Custom: break;
  }
  switch (m.family()) {
    case Family::Heisenberg: return heisenberg_orbit(1.0, 0.0);
    case Family::Bargmann: return bargmann_orbit();
    case Family::Euclid: return euclid_orbit(1.0, 0.0);
    case Family::SU2: return su2_orbit(1.0);
    case Family::Torus: break;
  }
  throw Error(ErrorCode::InvalidParameter, "no coadjoint orbit for state " + m.name());
}

// ---------------------------------------------------------------- moment map

CoadjointVector moment(const OrbitSpec& spec, std::span<const double> point) {
  if (point.size() != spec.chart_dim()) throw Error(ErrorCode::InvalidParameter, "moment: wrong chart dimension");
  const int off = sphere_offset(spec.family);
  if (off >= 0 && std::fabs(vec3(point, static_cast<std::size_t>(off)).norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::NonUnitSupport, "moment: direction is not a unit vector");
  }
  return {spec.family, chart_moment(spec, point)};
}

std::vector<double> transport(const OrbitSpec& spec, const GroupElement& g, std::span<const double> point) {
  if (g.family() != spec.family) throw Error(ErrorCode::FamilyMismatch, "transport: element of another family");
  if (point.size() != spec.chart_dim()) throw Error(ErrorCode::InvalidParameter, "transport: wrong chart dimension");
  switch (spec.family) {
    case Family::Heisenberg: {
      const auto& x = g.heisenberg();
      return {point[0] + x.b, point[1] + x.c};
    }
    case Family::Bargmann: {
      const auto& x = g.bargmann();
      const double p = point[0];
      return {p + x.b, point[1] - p * x.e + x.c - x.b * x.e};
    }
    case Family::Euclid: {
      const auto& x = g.euclid();
      const Vec3 r = x.A * vec3(point, 0) + x.c, u = x.A * vec3(point, 3);
      return {r[0], r[1], r[2], u[0], u[1], u[2]};
    }
    case Family::SU2: {
      const Vec3 u = su2_rotation(g.su2()) * vec3(point, 0);
      return {u[0], u[1], u[2]};
    }
    case Family::Torus: break;
  }
  require_orbit_family(spec.family);
  return {};
}

std::vector<double> sample_chart(const OrbitSpec& spec, Rng& rng) {
  const double R = spec.box_radius;
  switch (spec.family) {
    case Family::Heisenberg:
    case Family::Bargmann: {
      const double p = uniform(rng, -R, R);
      const double q = uniform(rng, -R, R);
      return {p, q};
    }
    case Family::Euclid: {
      const double r0 = uniform(rng, -R, R), r1 = uniform(rng, -R, R), r2 = uniform(rng, -R, R);
      const Vec3 u = random_unit_vector(rng);
      return {r0, r1, r2, u[0], u[1], u[2]};
    }
    case Family::SU2: {
      const Vec3 u = random_unit_vector(rng);
      return {u[0], u[1], u[2]};
    }
    case Family::Torus: break;
  }
  require_orbit_family(spec.family);
  return {};
}

std::vector<double> project(const CoadjointVector& w, std::span<const AlgebraElement> Zs) {
  if (!commuting(Zs)) throw Error(ErrorCode::NonCommuting, "project: the tuple does not commute");
  std::vector<double> out;
  out.reserve(Zs.size());
  for (const auto& Z : Zs) out.push_back(pair(w, Z));
  return out;
}

// ---------------------------------------------------------------- sup

OrbitSamples sample_orbit(const OrbitSpec& spec, std::size_t budget, std::uint64_t seed) {
  if (budget < kMinBudget) throw Error(ErrorCode::InvalidParameter, "orbit sampling: budget must be at least 1000");
  OrbitSamples S;
  S.spec = spec;
  S.seed = seed;
  S.count = budget;
  const std::size_t C = spec.chart_dim(), D = spec.dual_dim();
  S.chart.assign(C, std::vector<double>(budget));
  S.dual.assign(D, std::vector<double>(budget));
  Rng rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    const std::vector<double> x = sample_chart(spec, rng);
    const Eigen::VectorXd y = chart_moment(spec, x);
    for (std::size_t d = 0; d < C; ++d) S.chart[d][i] = x[d];
    for (std::size_t d = 0; d < D; ++d) S.dual[d][i] = y[static_cast<Eigen::Index>(d)];
  }
  return S;
}

OrbitSup orbit_sup(const OrbitSamples& samples, std::span<const AlgebraElement> Zs, std::span<const cplx> cs) {
  const OrbitSpec& spec = samples.spec;
  if (Zs.size() != cs.size()) throw Error(ErrorCode::InvalidParameter, "orbit_sup: Zs and cs differ in length");
  for (const auto& Z : Zs) {
    if (Z.family != spec.family) throw Error(ErrorCode::FamilyMismatch, "orbit_sup: algebra element of another family");
  }
  if (!commuting(Zs)) throw Error(ErrorCode::NonCommuting, "orbit_sup: the tuple does not commute");

  OrbitSup res;
  res.argmax = spec.anchors().front();
  if (Zs.empty()) {
    res.analytic = true;
    return res;
  }
  if (Zs.size() == 1) {
    res.value = std::abs(cs[0]);
    res.analytic = true;
    return res;
  }

  const std::size_t D = spec.dual_dim();
  const int n = static_cast<int>(Zs.size());
  Polynomial P;
  P.W.resize(static_cast<Eigen::Index>(D), n);
  for (int j = 0; j < n; ++j) P.W.col(j) = pairing_vector(Zs[static_cast<std::size_t>(j)]);
  P.c.assign(cs.begin(), cs.end());

  // Sampled moduli through the dispatched kernel.
  std::vector<double> freq(D * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (std::size_t d = 0; d < D; ++d) freq[static_cast<std::size_t>(j) * D + d] = P.W(static_cast<Eigen::Index>(d), j);
  }
  std::vector<const double*> coords(D);
  for (std::size_t d = 0; d < D; ++d) coords[d] = samples.dual[d].data();
  std::vector<double> mod(samples.count);
  simd::trig_poly_modulus(coords.data(), static_cast<int>(D), samples.count, freq.data(), P.c.data(), n, mod.data());

  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.count; ++i) {
    if (mod[i] > mod[best]) best = i;
  }
  res.samples = samples.count;
  res.value = mod[best];
  auto chart_point = [&](std::size_t i) {
    std::vector<double> x(spec.chart_dim());
    for (std::size_t d = 0; d < x.size(); ++d) x[d] = samples.chart[d][i];
    return x;
  };
  res.argmax = chart_point(best);

  // Ascent starts: the best few of every halving prefix, then the anchors.
  std::vector<std::size_t> starts;
  for (std::size_t prefix = samples.count; prefix >= kMinBudget; prefix /= 2) {
    std::vector<std::size_t> idx(prefix);
    for (std::size_t i = 0; i < prefix; ++i) idx[i] = i;
    const std::size_t top = std::min(kTopPerPrefix, prefix);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(top), idx.end(),
                      [&](std::size_t a, std::size_t b) { return mod[a] > mod[b] || (mod[a] == mod[b] && a < b); });
    starts.insert(starts.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(top));
    if (prefix / 2 < kMinBudget) break;
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  std::vector<std::vector<double>> seeds = spec.anchors();
  for (std::size_t i : starts) seeds.push_back(chart_point(i));
  for (auto& x0 : seeds) {
    AscentResult a = ascend(spec, P, std::move(x0));
    res.ascent_iterations += a.iterations;
    if (a.value > res.value) {
      res.value = a.value;
      res.argmax = std::move(a.x);
    }
  }
  return res;
}

OrbitSup orbit_sup(const OrbitSpec& spec, std::span<const AlgebraElement> Zs, std::span<const cplx> cs,
                   std::size_t budget, std::uint64_t seed) {
  if (budget < kMinBudget) throw Error(ErrorCode::InvalidParameter, "orbit_sup: budget must be at least 1000");
  if (!commuting(Zs)) throw Error(ErrorCode::NonCommuting, "orbit_sup: the tuple does not commute");
  if (Zs.size() <= 1) {
    OrbitSamples empty;
    empty.spec = spec;
    return orbit_sup(empty, Zs, cs);
  }
  return orbit_sup(sample_orbit(spec, budget, seed), Zs, cs);
}

// ---------------------------------------------------------------- quantum check

std::string_view to_string(CommutingFamily f) noexcept {
  switch (f) {
    case CommutingFamily::CenterLine: return "center_line";
    case CommutingFamily::CenterPlane: return "center_plane";
    case CommutingFamily::Translations: return "translations";
    case CommutingFamily::AxisPair: return "axis_pair";
    case CommutingFamily::TorusLine: return "torus_line";
  }
  return "unknown";
}

QuantumTrial draw_commuting_tuple(const State& m, std::size_t n_max, Rng& rng) {
  if (n_max == 0) throw Error(ErrorCode::InvalidParameter, "quantum check: n_max must be positive");
  QuantumTrial trial;
  const auto n = static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(1, n_max)(rng));
  auto coin = [&](double p) { return uniform(rng, 0.0, 1.0) < p; };
  auto pick = [&](int options) { return std::uniform_int_distribution<int>(0, options - 1)(rng); };
  auto scalar = [&] { return uniform(rng, -3.0, 3.0); };

  switch (m.family()) {
    case Family::Heisenberg: {
      trial.tuple_family = CommutingFamily::CenterLine;
      double beta = 0, gamma = 0;
      switch (pick(4)) {
        case 0: beta = 1; break;
        case 1: gamma = 1; break;
        case 2: beta = 1, gamma = -m.params().t; break;
        default: {
          const double phi = uniform(rng, -kPi, kPi);
          beta = std::cos(phi), gamma = std::sin(phi);
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (coin(0.2)) {
          trial.Zs.push_back(zero_algebra(Family::Heisenberg));
          continue;
        }
        const double a = coin(0.2) ? 0.0 : scalar();
        const double t = coin(0.2) ? 0.0 : scalar();  // t = 0: pure center
        trial.Zs.push_back(heisenberg_algebra(a, t * beta, t * gamma));
      }
      break;
    }
    case Family::Bargmann: {
      if (coin(0.5)) {
        trial.tuple_family = CommutingFamily::CenterPlane;
        for (std::size_t j = 0; j < n; ++j) {
          if (coin(0.2)) {
            trial.Zs.push_back(zero_algebra(Family::Bargmann));
            continue;
          }
          const double a = coin(0.2) ? 0.0 : scalar();
          const bool central = coin(0.2);
          const double g = central ? 0.0 : scalar(), e = central ? 0.0 : scalar();
          trial.Zs.push_back(bargmann_algebra(a, 0.0, g, e));
        }
        break;
      }
      trial.tuple_family = CommutingFamily::CenterLine;
      Eigen::Vector3d dir = Eigen::Vector3d::Zero();  // (beta, gamma, epsilon)
      switch (pick(5)) {
        case 0: dir = {1, 0, 0}; break;
        case 1: dir = {1, -uniform(rng, -2.0, 2.0), 0}; break;
        case 2: dir = {0, 1, 0}; break;
        case 3: dir = {0, 0, 1}; break;
        default: dir = random_unit_vector(rng);
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (coin(0.2)) {
          trial.Zs.push_back(zero_algebra(Family::Bargmann));
          continue;
        }
        const double a = coin(0.2) ? 0.0 : scalar();
        const double t = coin(0.2) ? 0.0 : scalar();  // t = 0: pure center
        trial.Zs.push_back(bargmann_algebra(a, t * dir[0], t * dir[1], t * dir[2]));
      }
      break;
    }
    case Family::Euclid: {
      if (coin(0.5)) {
        trial.tuple_family = CommutingFamily::Translations;
        const bool vertical = coin(0.3);
        for (std::size_t j = 0; j < n; ++j) {
          if (coin(0.2)) {
            trial.Zs.push_back(zero_algebra(Family::Euclid));
            continue;
          }
          const Vec3 d = vertical ? Vec3::UnitZ() : random_unit_vector(rng);
          trial.Zs.push_back(euclid_algebra(Vec3::Zero(), uniform(rng, 0.0, 3.0) * d));
        }
        break;
      }
      trial.tuple_family = CommutingFamily::AxisPair;
      Vec3 axis;
      switch (pick(3)) {
        case 0: axis = Vec3::UnitZ(); break;
        case 1: {
          const double phi = uniform(rng, -kPi, kPi);
          axis = Vec3(std::cos(phi), std::sin(phi), 0.0);
          break;
        }
        default: axis = random_unit_vector(rng);
      }
      for (std::size_t j = 0; j < n; ++j) {
        double theta;
        switch (pick(3)) {
          case 0: theta = 0.0; break;
          case 1: theta = kPi; break;
          default: theta = uniform(rng, -kPi, kPi);
        }
        const double tau = coin(0.2) ? 0.0 : scalar();
        trial.Zs.push_back(euclid_algebra(theta * axis, tau * axis));
      }
      break;
    }
    case Family::SU2: {
      trial.tuple_family = CommutingFamily::TorusLine;
      const Vec3 axis = random_unit_vector(rng);
      for (std::size_t j = 0; j < n; ++j) {
        const double theta = coin(0.2) ? 0.0 : uniform(rng, -2 * kPi, 2 * kPi);
        trial.Zs.push_back(su2_algebra(theta * axis));
      }
      break;
    }
    case Family::Torus: throw Error(ErrorCode::InvalidParameter, "quantum check: no orbit chart for the torus");
  }
  for (std::size_t j = 0; j < n; ++j) trial.cs.push_back(std::polar(uniform(rng, 0.0, 1.0), uniform(rng, -kPi, kPi)));
  return trial;
}

QuantumReport quantum_check(const State& m, const OrbitSpec& spec, const QuantumCheckOptions& options) {
  if (m.family() != spec.family) throw Error(ErrorCode::FamilyMismatch, "quantum check: state and orbit differ in family");
  const OrbitSamples samples = sample_orbit(spec, options.budget, options.seed);
  QuantumReport rep;
  rep.trials = options.trials;
  rep.slack = options.slack;
  rep.per_trial.resize(options.trials);

  auto run = [&](std::size_t i) {
    Rng rng = trial_rng(options.seed, i);
    QuantumTrial t = draw_commuting_tuple(m, options.n_max, rng);
    t.index = i;
    cplx lhs{};
    for (std::size_t j = 0; j < t.Zs.size(); ++j) lhs += t.cs[j] * m(exp(t.Zs[j]));
    t.lhs = std::abs(lhs);
    t.rhs = orbit_sup(samples, t.Zs, t.cs).value;
    t.margin = t.rhs - t.lhs;
    rep.per_trial[i] = std::move(t);
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(options.trials)));
  if (threads == 1) {
    for (std::size_t i = 0; i < options.trials; ++i) run(i);
  } else {
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < options.trials; i += threads) run(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  rep.worst_margin = rep.per_trial.empty() ? 0.0 : rep.per_trial.front().margin;
  for (const auto& t : rep.per_trial) {
    rep.worst_margin = std::min(rep.worst_margin, t.margin);
    if (t.margin < -options.slack) rep.failures.push_back(t);
  }
  rep.pass = rep.failures.empty();
  return rep;
}

// ---------------------------------------------------------------- Kostant

KostantReport kostant_projection_check(double lambda, std::size_t samples, std::uint64_t seed) {
  if (!(lambda > 0)) throw Error(ErrorCode::InvalidParameter, "kostant check: lambda must be positive");
  if (samples == 0) throw Error(ErrorCode::InvalidParameter, "kostant check: no samples");
  KostantReport rep;
  Rng rng(seed);
  rep.projections.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) rep.projections.push_back(lambda * random_unit_vector(rng).z());
  std::vector<double> sorted = rep.projections;
  std::sort(sorted.begin(), sorted.end());
  double d = std::max(sorted.front() + lambda, lambda - sorted.back());
  for (std::size_t i = 1; i < sorted.size(); ++i) d = std::max(d, 0.5 * (sorted[i] - sorted[i - 1]));
  // Samples are on the orbit, so they never lie outside the interval.
  d = std::max({d, -lambda - sorted.front(), sorted.back() - lambda});
  rep.distance = d;
  return rep;
}

}  // namespace qstates
