#include "qstates/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qstates/error.hpp"

namespace qstates {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Distance on the circle, in [0, pi].
double angle_gap(double s, double t) {
  double d = std::fabs(wrap_angle(s - t));
  return std::min(d, kTwoPi - d);
}

[[noreturn]] void mismatch(const char* what) {
  throw Error(ErrorCode::FamilyMismatch, std::string("family mismatch in ") + what);
}

void require_same(Family f, Family g, const char* what) {
  if (f != g) mismatch(what);
}

void require_dim(const AlgebraElement& Z, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(Z.coords.size()) != dim) {
    throw Error(ErrorCode::InvalidElement, std::string("wrong algebra dimension in ") + what);
  }
}

// Coefficients of I + f1 j + f2 j^2 (Rodrigues) and of the translation
// integral V = I + f2 j + f3 j^2, all as functions of theta = |axis|.
struct RodriguesCoeffs {
  double f1, f2, f3;
};

RodriguesCoeffs rodrigues(double theta) {
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    return {1.0 - t2 / 6.0 + t2 * t2 / 120.0, 0.5 - t2 / 24.0 + t2 * t2 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0};
  }
  const double s = std::sin(theta), c = std::cos(theta);
  return {s / theta, (1.0 - c) / (theta * theta), (theta - s) / (theta * theta * theta)};
}

Mat3 orthonormalize(const Mat3& A) {
  Eigen::JacobiSVD<Mat3> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0) {
    Mat3 U = svd.matrixU();
    U.col(2) *= -1.0;
    R = U * svd.matrixV().transpose();
  }
  return R;
}

SU2Element normalized(SU2Element q) {
  const double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

}  // namespace

// ---------------------------------------------------------------- names

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Heisenberg: return "heisenberg";
    case Family::Bargmann: return "bargmann";
    case Family::Euclid: return "euclid";
    case Family::SU2: return "su2";
    case Family::Torus: return "torus";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::Heisenberg, Family::Bargmann, Family::Euclid, Family::SU2, Family::Torus}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- GroupElement

GroupElement::GroupElement(EuclidElement g) : value_(std::move(g)) {}
GroupElement::GroupElement(SU2Element g) : value_(g) {}
GroupElement::GroupElement(TorusElement g) {
  for (double& t : g.angles) t = wrap_angle(t);
  value_ = std::move(g);
}

GroupElement GroupElement::identity(Family f, std::size_t torus_dim) {
  switch (f) {
    case Family::Heisenberg: return HeisenbergElement{};
    case Family::Bargmann: return BargmannElement{};
    case Family::Euclid: return EuclidElement{};
    case Family::SU2: return SU2Element{};
    case Family::Torus: return TorusElement{std::vector<double>(torus_dim, 0.0)};
  }
  return {};
}

#define QSTATES_ACCESSOR(Name, Type)                        \
  const Type& GroupElement::Name() const {                  \
    if (const auto* p = std::get_if<Type>(&value_)) return *p; \
    mismatch(#Name);                                        \
  }
QSTATES_ACCESSOR(heisenberg, HeisenbergElement)
QSTATES_ACCESSOR(bargmann, BargmannElement)
QSTATES_ACCESSOR(euclid, EuclidElement)
QSTATES_ACCESSOR(su2, SU2Element)
QSTATES_ACCESSOR(torus, TorusElement)
#undef QSTATES_ACCESSOR

// ---------------------------------------------------------------- algebra/dual vectors

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same(family, o.family, "algebra +");
  return {family, coords + o.coords};
}
AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same(family, o.family, "algebra -");
  return {family, coords - o.coords};
}
AlgebraElement AlgebraElement::operator*(double s) const { return {family, coords * s}; }

AlgebraElement heisenberg_algebra(double alpha, double beta, double gamma) {
  return {Family::Heisenberg, Eigen::Vector3d(alpha, beta, gamma)};
}
AlgebraElement bargmann_algebra(double alpha, double beta, double gamma, double epsilon) {
  return {Family::Bargmann, Eigen::Vector4d(alpha, beta, gamma, epsilon)};
}
AlgebraElement euclid_algebra(const Vec3& rotation, const Vec3& translation) {
  Eigen::VectorXd v(6);
  v << rotation, translation;
  return {Family::Euclid, v};
}
AlgebraElement su2_algebra(const Vec3& x) { return {Family::SU2, x}; }
AlgebraElement torus_algebra(std::vector<double> t) {
  return {Family::Torus, Eigen::Map<Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()))};
}
AlgebraElement zero_algebra(Family f, std::size_t torus_dim) {
  return {f, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(algebra_dimension(f, torus_dim)))};
}

CoadjointVector heisenberg_dual(double M, double p, double q) {
  return {Family::Heisenberg, Eigen::Vector3d(M, p, q)};
}
CoadjointVector bargmann_dual(double M, double p, double q, double E) {
  return {Family::Bargmann, Eigen::Vector4d(M, p, q, E)};
}
CoadjointVector euclid_dual(const Vec3& L, const Vec3& P) {
  Eigen::VectorXd v(6);
  v << L, P;
  return {Family::Euclid, v};
}
CoadjointVector su2_dual(const Vec3& x) { return {Family::SU2, x}; }
CoadjointVector torus_dual(std::vector<double> y) {
  return {Family::Torus, Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()))};
}

std::size_t algebra_dimension(Family f, std::size_t torus_dim) noexcept {
  switch (f) {
    case Family::Heisenberg: return 3;
    case Family::Bargmann: return 4;
    case Family::Euclid: return 6;
    case Family::SU2: return 3;
    case Family::Torus: return torus_dim;
  }
  return 0;
}

Vec3 euclid_rotation_part(const AlgebraElement& Z) {
  require_same(Z.family, Family::Euclid, "euclid_rotation_part");
  return Z.coords.head<3>();
}
Vec3 euclid_translation_part(const AlgebraElement& Z) {
  require_same(Z.family, Family::Euclid, "euclid_translation_part");
  return Z.coords.tail<3>();
}

// ---------------------------------------------------------------- rotations

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Vec3 vee(const Mat3& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

Mat3 rotation_about(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return Mat3::Identity();
  const Mat3 j = hat(axis / n);
  return Mat3::Identity() + std::sin(angle) * j + (1.0 - std::cos(angle)) * j * j;
}

EuclidElement make_euclid(const Mat3& A, const Vec3& c, const Tolerances& tol) {
  EuclidElement g{A, c, 0};
  validate(GroupElement(g), tol);
  return g;
}

SU2Element make_su2(double w, double x, double y, double z, const Tolerances& tol) {
  SU2Element g{w, x, y, z};
  validate(GroupElement(g), tol);
  return g;
}

SU2Element su2_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return {};
  const Vec3 u = axis / n;
  const double s = std::sin(angle / 2);
  return {std::cos(angle / 2), s * u.x(), s * u.y(), s * u.z()};
}

Mat3 su2_rotation(const SU2Element& g) {
  // R p = p - 2w (v x p) + 2 v x (v x p)
  const Vec3 v(g.x, g.y, g.z);
  const Mat3 j = hat(v);
  return Mat3::Identity() - 2.0 * g.w * j + 2.0 * j * j;
}

SU2Element su2_torus(double theta) { return su2_axis_angle(Vec3::UnitZ(), theta); }

// ---------------------------------------------------------------- validation

void validate(const GroupElement& g, const Tolerances& tol) {
  auto finite = [](std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };
  switch (g.family()) {
    case Family::Heisenberg: {
      const auto& h = g.heisenberg();
      if (!finite({h.a, h.b, h.c})) throw Error(ErrorCode::InvalidElement, "heisenberg: non-finite coordinate");
      break;
    }
    case Family::Bargmann: {
      const auto& h = g.bargmann();
      if (!finite({h.a, h.b, h.c, h.e})) throw Error(ErrorCode::InvalidElement, "bargmann: non-finite coordinate");
      break;
    }
    case Family::Euclid: {
      const auto& e = g.euclid();
      if (!e.A.allFinite() || !e.c.allFinite()) throw Error(ErrorCode::InvalidElement, "euclid: non-finite entry");
      const double orth = (e.A.transpose() * e.A - Mat3::Identity()).cwiseAbs().maxCoeff();
      if (orth > tol.orthogonality) throw Error(ErrorCode::InvalidElement, "euclid: A is not orthogonal");
      if (std::fabs(e.A.determinant() - 1.0) > tol.orthogonality) {
        throw Error(ErrorCode::InvalidElement, "euclid: det A != 1");
      }
      break;
    }
    case Family::SU2: {
      const auto& q = g.su2();
      if (!finite({q.w, q.x, q.y, q.z})) throw Error(ErrorCode::InvalidElement, "su2: non-finite entry");
      const double n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
      if (std::fabs(n2 - 1.0) > 2 * tol.orthogonality) throw Error(ErrorCode::InvalidElement, "su2: not unit norm");
      break;
    }
    case Family::Torus: {
      for (double t : g.torus().angles) {
        if (!std::isfinite(t)) throw Error(ErrorCode::InvalidElement, "torus: non-finite angle");
      }
      break;
    }
  }
}

// ---------------------------------------------------------------- group law

GroupElement compose(const GroupElement& g, const GroupElement& h, const Tolerances& tol) {
  require_same(g.family(), h.family(), "compose");
  switch (g.family()) {
    case Family::Heisenberg: {
      const auto& x = g.heisenberg();
      const auto& y = h.heisenberg();
      return HeisenbergElement{x.a + y.a + x.b * y.c, x.b + y.b, x.c + y.c};
    }
    case Family::Bargmann: {
      const auto& x = g.bargmann();
      const auto& y = h.bargmann();
      return BargmannElement{x.a + y.a + x.b * y.c + 0.5 * x.b * x.b * y.e, x.b + y.b, x.c + y.c + x.b * y.e,
                             x.e + y.e};
    }
    case Family::Euclid: {
      const auto& x = g.euclid();
      const auto& y = h.euclid();
      EuclidElement r{x.A * y.A, x.A * y.c + x.c, std::max(x.drift, y.drift) + 1};
      if (r.drift >= tol.reorthonormalize_every) {
        r.A = orthonormalize(r.A);
        r.drift = 0;
      }
      return r;
    }
    case Family::SU2: {
      const auto& p = g.su2();
      const auto& q = h.su2();
      const Vec3 v(p.x, p.y, p.z), u(q.x, q.y, q.z);
      const double w = p.w * q.w - v.dot(u);
      const Vec3 r = p.w * u + q.w * v - v.cross(u);
      SU2Element out{w, r.x(), r.y(), r.z()};
      const double n2 = w * w + r.squaredNorm();
      if (std::fabs(n2 - 1.0) > 1e-14) out = normalized(out);
      return out;
    }
    case Family::Torus: {
      const auto& x = g.torus().angles;
      const auto& y = h.torus().angles;
      if (x.size() != y.size()) mismatch("compose (torus dimension)");
      std::vector<double> r(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
      return TorusElement{std::move(r)};
    }
  }
  return {};
}

GroupElement inverse(const GroupElement& g) {
  switch (g.family()) {
    case Family::Heisenberg: {
      const auto& x = g.heisenberg();
      return HeisenbergElement{-x.a + x.b * x.c, -x.b, -x.c};
    }
    case Family::Bargmann: {
      const auto& x = g.bargmann();
      return BargmannElement{-x.a + x.b * x.c - 0.5 * x.b * x.b * x.e, -x.b, -x.c + x.b * x.e, -x.e};
    }
    case Family::Euclid: {
      const auto& x = g.euclid();
      return EuclidElement{x.A.transpose(), -(x.A.transpose() * x.c), x.drift};
    }
    case Family::SU2: {
      const auto& q = g.su2();
      return SU2Element{q.w, -q.x, -q.y, -q.z};
    }
    case Family::Torus: {
      std::vector<double> r = g.torus().angles;
      for (double& t : r) t = -t;
      return TorusElement{std::move(r)};
    }
  }
  return {};
}

GroupElement exp(const AlgebraElement& Z) {
  const auto& v = Z.coords;
  switch (Z.family) {
    case Family::Heisenberg: {
      require_dim(Z, 3, "exp");
      return HeisenbergElement{v[0] + 0.5 * v[1] * v[2], v[1], v[2]};
    }
    case Family::Bargmann: {
      require_dim(Z, 4, "exp");
      const double al = v[0], be = v[1], ga = v[2], ep = v[3];
      return BargmannElement{al + be * ga / 2 + be * be * ep / 6, be, ga + be * ep / 2, ep};
    }
    case Family::Euclid: {
      require_dim(Z, 6, "exp");
      const Vec3 axis = v.head<3>();
      const Vec3 rate = v.tail<3>();
      const RodriguesCoeffs k = rodrigues(axis.norm());
      const Mat3 j = hat(axis);
      const Mat3 jj = j * j;
      const Mat3 A = Mat3::Identity() + k.f1 * j + k.f2 * jj;
      const Mat3 V = Mat3::Identity() + k.f2 * j + k.f3 * jj;
      return EuclidElement{A, V * rate, 0};
    }
    case Family::SU2: {
      require_dim(Z, 3, "exp");
      const Vec3 x = v.head<3>();
      const double theta = x.norm();
      const double h = theta / 2;
      // sin(theta/2)/theta, with its series near 0
      const double sc = theta < 1e-4 ? 0.5 - theta * theta / 48.0 : std::sin(h) / theta;
      return SU2Element{std::cos(h), sc * x.x(), sc * x.y(), sc * x.z()};
    }
    case Family::Torus: {
      return TorusElement{std::vector<double>(v.data(), v.data() + v.size())};
    }
  }
  return {};
}

AlgebraElement log(const GroupElement& g, const Tolerances& tol) {
  switch (g.family()) {
    case Family::Heisenberg: {
      const auto& x = g.heisenberg();
      return heisenberg_algebra(x.a - 0.5 * x.b * x.c, x.b, x.c);
    }
    case Family::Bargmann: {
      const auto& x = g.bargmann();
      return bargmann_algebra(x.a - x.b * x.c / 2 + x.b * x.b * x.e / 12, x.b, x.c - x.b * x.e / 2, x.e);
    }
    case Family::Euclid: {
      const auto& x = g.euclid();
      const Vec3 s = vee(x.A - x.A.transpose()) / 2;  // sin(theta) n
      const double cth = std::clamp((x.A.trace() - 1.0) / 2.0, -1.0, 1.0);
      const double theta = std::atan2(s.norm(), cth);
      if (theta >= std::numbers::pi - tol.log_branch) {
        throw Error(ErrorCode::BranchCut, "euclid log: rotation angle at or beyond pi");
      }
      const double scale = theta < 1e-4 ? 1.0 + theta * theta / 6.0 : theta / std::sin(theta);
      const Vec3 axis = scale * s;
      const Mat3 j = hat(axis);
      double k2;
      if (theta < 1e-4) {
        k2 = 1.0 / 12.0 + theta * theta / 720.0;
      } else {
        k2 = (1.0 - theta * std::sin(theta) / (2.0 * (1.0 - std::cos(theta)))) / (theta * theta);
      }
      const Mat3 Vinv = Mat3::Identity() - 0.5 * j + k2 * j * j;
      return euclid_algebra(axis, Vinv * x.c);
    }
    case Family::SU2: {
      const auto& q = g.su2();
      const Vec3 v(q.x, q.y, q.z);
      const double sn = v.norm();
      const double theta = 2.0 * std::atan2(sn, q.w);
      if (theta >= std::numbers::pi - tol.log_branch) {
        throw Error(ErrorCode::BranchCut, "su2 log: rotation angle at or beyond pi");
      }
      // theta / sin(theta/2), with its series near 0
      const double scale = sn < 1e-8 ? 2.0 / std::max(q.w, 1e-300) : theta / sn;
      return su2_algebra(scale * v);
    }
    case Family::Torus: {
      std::vector<double> t = g.torus().angles;
      for (double& a : t) {
        a = wrap_angle(a);
        if (a >= std::numbers::pi) a -= kTwoPi;
      }
      return torus_algebra(std::move(t));
    }
  }
  return {};
}

AlgebraElement bracket(const AlgebraElement& Z, const AlgebraElement& W) {
  require_same(Z.family, W.family, "bracket");
  if (Z.coords.size() != W.coords.size()) mismatch("bracket (dimension)");
  const auto& z = Z.coords;
  const auto& w = W.coords;
  switch (Z.family) {
    case Family::Heisenberg: return heisenberg_algebra(z[1] * w[2] - w[1] * z[2], 0, 0);
    case Family::Bargmann:
      return bargmann_algebra(z[1] * w[2] - w[1] * z[2], 0, z[1] * w[3] - w[1] * z[3], 0);
    case Family::Euclid: {
      const Vec3 a = z.head<3>(), g = z.tail<3>(), a2 = w.head<3>(), g2 = w.tail<3>();
      return euclid_algebra(a.cross(a2), a.cross(g2) - a2.cross(g));
    }
    case Family::SU2: {
      const Vec3 a = z.head<3>(), b = w.head<3>();
      return su2_algebra(-a.cross(b));
    }
    case Family::Torus: return zero_algebra(Family::Torus, static_cast<std::size_t>(z.size()));
  }
  return {};
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& Z) {
  require_same(g.family(), Z.family, "adjoint");
  const auto& z = Z.coords;
  switch (g.family()) {
    case Family::Heisenberg: {
      const auto& x = g.heisenberg();
      return heisenberg_algebra(z[0] + x.b * z[2] - x.c * z[1], z[1], z[2]);
    }
    case Family::Bargmann: {
      const auto& x = g.bargmann();
      return bargmann_algebra(z[0] + x.b * z[2] - x.c * z[1] + 0.5 * x.b * x.b * z[3], z[1],
                              z[2] + x.b * z[3] - x.e * z[1], z[3]);
    }
    case Family::Euclid: {
      const auto& x = g.euclid();
      const Vec3 ra = x.A * Vec3(z.head<3>());
      return euclid_algebra(ra, x.A * Vec3(z.tail<3>()) + x.c.cross(ra));
    }
    case Family::SU2: return su2_algebra(su2_rotation(g.su2()) * Vec3(z.head<3>()));
    case Family::Torus: return Z;
  }
  return {};
}

CoadjointVector coadjoint(const GroupElement& g, const CoadjointVector& w) {
  require_same(g.family(), w.family, "coadjoint");
  const auto& v = w.coords;
  switch (g.family()) {
    case Family::Heisenberg: {
      const auto& x = g.heisenberg();
      const double M = v[0];
      return heisenberg_dual(M, v[1] + x.b * M, v[2] + x.c * M);
    }
    case Family::Bargmann: {
      const auto& x = g.bargmann();
      const double M = v[0], p = v[1], q = v[2], E = v[3];
      return bargmann_dual(M, p + M * x.b, q - p * x.e + M * x.c - M * x.b * x.e,
                           E + p * x.b + 0.5 * M * x.b * x.b);
    }
    case Family::Euclid: {
      const auto& x = g.euclid();
      const Vec3 AP = x.A * Vec3(v.tail<3>());
      return euclid_dual(x.A * Vec3(v.head<3>()) + x.c.cross(AP), AP);
    }
    case Family::SU2: return su2_dual(su2_rotation(g.su2()) * Vec3(v.head<3>()));
    case Family::Torus: return w;
  }
  return {};
}

double pair(const CoadjointVector& w, const AlgebraElement& Z) {
  require_same(w.family, Z.family, "pair");
  if (w.coords.size() != Z.coords.size()) mismatch("pair (dimension)");
  const auto& x = w.coords;
  const auto& z = Z.coords;
  switch (w.family) {
    case Family::Heisenberg: return x[1] * z[2] - x[2] * z[1] - x[0] * z[0];
    case Family::Bargmann: return x[1] * z[2] - x[2] * z[1] - x[3] * z[3] - x[0] * z[0];
    case Family::Euclid:
    case Family::SU2:
    case Family::Torus: return x.dot(z);
  }
  return 0.0;
}

bool commuting(std::span<const AlgebraElement> Zs, const Tolerances& tol) {
  for (std::size_t i = 0; i < Zs.size(); ++i) {
    for (std::size_t j = i + 1; j < Zs.size(); ++j) {
      if (bracket(Zs[i], Zs[j]).norm() >= tol.commuting) return false;
    }
  }
  return true;
}

double distance(const GroupElement& g, const GroupElement& h) {
  require_same(g.family(), h.family(), "distance");
  switch (g.family()) {
    case Family::Heisenberg: {
      const auto& x = g.heisenberg();
      const auto& y = h.heisenberg();
      return std::max({std::fabs(x.a - y.a), std::fabs(x.b - y.b), std::fabs(x.c - y.c)});
    }
    case Family::Bargmann: {
      const auto& x = g.bargmann();
      const auto& y = h.bargmann();
      return std::max({std::fabs(x.a - y.a), std::fabs(x.b - y.b), std::fabs(x.c - y.c), std::fabs(x.e - y.e)});
    }
    case Family::Euclid: {
      const auto& x = g.euclid();
      const auto& y = h.euclid();
      return std::max((x.A - y.A).cwiseAbs().maxCoeff(), (x.c - y.c).cwiseAbs().maxCoeff());
    }
    case Family::SU2: {
      const auto& x = g.su2();
      const auto& y = h.su2();
      return std::max({std::fabs(x.w - y.w), std::fabs(x.x - y.x), std::fabs(x.y - y.y), std::fabs(x.z - y.z)});
    }
    case Family::Torus: {
      const auto& x = g.torus().angles;
      const auto& y = h.torus().angles;
      if (x.size() != y.size()) mismatch("distance (torus dimension)");
      double d = 0;
      for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, angle_gap(x[i], y[i]));
      return d;
    }
  }
  return 0.0;
}

bool is_identity(const GroupElement& g, double tol) {
  std::size_t dim = g.family() == Family::Torus ? g.torus().angles.size() : 1;
  return distance(g, GroupElement::identity(g.family(), dim)) <= tol;
}

}  // namespace qstates
