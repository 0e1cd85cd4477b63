#include "qstates/induced.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "qstates/error.hpp"

namespace qstates {

namespace {

constexpr double kMergeGrid = 1e-9;

using Key = std::array<long long, 3>;

Key key_of(const Vec3& p, int dim) {
  Key k{0, 0, 0};
  for (int d = 0; d < dim; ++d) k[d] = std::llround(p[d] / kMergeGrid);
  return k;
}

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

bool near_matrix(const Mat3& A, const Mat3& B, double tol) { return (A - B).cwiseAbs().maxCoeff() < tol; }

// +1 / -1 when A e3 = +-e3, 0 otherwise.
int axis_sign(const Mat3& A, double tol) {
  if (std::fabs(A(0, 2)) >= tol || std::fabs(A(1, 2)) >= tol) return 0;
  if (std::fabs(A(2, 2) - 1.0) < tol) return 1;
  if (std::fabs(A(2, 2) + 1.0) < tol) return -1;
  return 0;
}

}  // namespace

// ---------------------------------------------------------------- SectionVector

SectionVector SectionVector::delta(std::span<const double> point, cplx value) {
  if (point.empty() || point.size() > 3) throw Error(ErrorCode::InvalidParameter, "delta: point dimension must be 1..3");
  Vec3 p = Vec3::Zero();
  for (std::size_t i = 0; i < point.size(); ++i) p[static_cast<Eigen::Index>(i)] = point[i];
  return counting(static_cast<int>(point.size()), {p}, {value});
}

SectionVector SectionVector::counting(int dim, std::vector<Vec3> points, std::vector<cplx> values) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::InvalidParameter, "counting section: dimension must be 1..3");
  if (points.size() != values.size()) throw Error(ErrorCode::InvalidParameter, "counting section: size mismatch");
  SectionVector f;
  f.mode_ = SectionMode::Counting;
  f.dim_ = dim;
  f.points_ = std::move(points);
  f.values_ = std::move(values);
  f.canonicalize();
  return f;
}

SectionVector SectionVector::on_sphere(std::shared_ptr<const SphereGrid> grid, Function fn) {
  SectionVector f;
  f.mode_ = SectionMode::Quadrature;
  f.dim_ = 3;
  f.sphere_ = std::move(grid);
  f.fn_ = std::move(fn);
  return f;
}

SectionVector SectionVector::on_circle(std::shared_ptr<const CircleGrid> grid, Function fn) {
  SectionVector f;
  f.mode_ = SectionMode::Quadrature;
  f.dim_ = 2;
  f.circle_ = std::move(grid);
  f.fn_ = std::move(fn);
  return f;
}

void SectionVector::canonicalize() {
  std::vector<std::size_t> order(points_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<Key> keys(points_.size());
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = key_of(points_[i], dim_);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<Vec3> pts;
  std::vector<cplx> vals;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const std::size_t i = order[idx];
    if (!pts.empty() && key_of(pts.back(), dim_) == keys[i]) {
      vals.back() += values_[i];
    } else {
      pts.push_back(points_[i]);
      vals.push_back(values_[i]);
    }
  }
  // Drop exact zeros so supports stay minimal.
  std::vector<Vec3> p2;
  std::vector<cplx> v2;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (vals[i] != cplx{}) {
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
    }
  }
  points_ = std::move(p2);
  values_ = std::move(v2);
}

std::vector<cplx> SectionVector::sampled() const {
  if (mode_ != SectionMode::Quadrature) throw Error(ErrorCode::InvalidParameter, "sampled: not a quadrature section");
  std::vector<cplx> out;
  if (sphere_) {
    out.reserve(sphere_->size());
    for (std::size_t i = 0; i < sphere_->size(); ++i) out.push_back(fn_(Vec3(sphere_->x[i], sphere_->y[i], sphere_->z[i])));
  } else {
    out.reserve(circle_->size());
    for (std::size_t i = 0; i < circle_->size(); ++i) out.push_back(fn_(Vec3(circle_->x[i], circle_->y[i], 0.0)));
  }
  return out;
}

const std::vector<double>& SectionVector::weights() const {
  if (mode_ != SectionMode::Quadrature) throw Error(ErrorCode::InvalidParameter, "weights: not a quadrature section");
  return sphere_ ? sphere_->w : circle_->w;
}

const void* SectionVector::grid_id() const noexcept {
  if (sphere_) return sphere_.get();
  return circle_.get();
}

SectionVector SectionVector::with_support(std::vector<Vec3> points, std::vector<cplx> values) const {
  return counting(dim_, std::move(points), std::move(values));
}

SectionVector SectionVector::with_function(Function f) const {
  SectionVector out = *this;
  out.fn_ = std::move(f);
  return out;
}

cplx SectionVector::value_at(const Vec3& point) const {
  if (mode_ == SectionMode::Quadrature) return fn_(point);
  const Key k = key_of(point, dim_);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (key_of(points_[i], dim_) == k) return values_[i];
  }
  return {};
}

cplx inner_product(const SectionVector& f, const SectionVector& h) {
  if (f.mode() != h.mode() || f.dim() != h.dim()) {
    throw Error(ErrorCode::InvalidParameter, "inner_product: sections of different kinds");
  }
  if (f.mode() == SectionMode::Counting) {
    cplx acc{};
    std::size_t i = 0, j = 0;
    const auto& pf = f.points();
    const auto& ph = h.points();
    while (i < pf.size() && j < ph.size()) {
      const Key a = key_of(pf[i], f.dim()), b = key_of(ph[j], h.dim());
      if (a < b) {
        ++i;
      } else if (b < a) {
        ++j;
      } else {
        acc += std::conj(f.values()[i]) * h.values()[j];
        ++i;
        ++j;
      }
    }
    return acc;
  }
  if (f.grid_id() != h.grid_id()) throw Error(ErrorCode::InvalidParameter, "inner_product: different quadrature grids");
  const std::vector<cplx> a = f.sampled(), b = h.sampled();
  const std::vector<double>& w = f.weights();
  double total = 0;
  cplx acc{};
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * std::conj(a[i]) * b[i];
    total += w[i];
  }
  return acc / total;
}

double norm(const SectionVector& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

// ---------------------------------------------------------------- actions

HeisenbergRow heisenberg_row_from_string(std::string_view name) {
  if (name == "a") return HeisenbergRow::A;
  if (name == "b") return HeisenbergRow::B;
  if (name == "c") return HeisenbergRow::C;
  if (name == "d") return HeisenbergRow::D;
  throw Error(ErrorCode::InvalidParameter, "unknown table row '" + std::string(name) + "'");
}

SectionVector heisenberg_action(HeisenbergRow row, const GroupElement& g, const SectionVector& f, double t) {
  if (f.mode() != SectionMode::Counting) throw Error(ErrorCode::InvalidParameter, "heisenberg_action: counting mode only");
  const int want = row == HeisenbergRow::D ? 2 : 1;
  if (f.dim() != want) throw Error(ErrorCode::InvalidParameter, "heisenberg_action: wrong support dimension");
  const auto& x = g.heisenberg();
  std::vector<Vec3> pts;
  std::vector<cplx> vals;
  pts.reserve(f.points().size());
  vals.reserve(f.points().size());
  for (std::size_t i = 0; i < f.points().size(); ++i) {
    const Vec3& p = f.points()[i];
    const cplx v = f.values()[i];
    switch (row) {
      case HeisenbergRow::A:  // p -> p + b
        pts.emplace_back(p[0] + x.b, 0, 0);
        vals.push_back(v * expi(-x.a + (p[0] + x.b) * x.c));
        break;
      case HeisenbergRow::B:  // q -> q + c
        pts.emplace_back(p[0] + x.c, 0, 0);
        vals.push_back(v * expi(-x.a - x.b * p[0]));
        break;
      case HeisenbergRow::C:  // r -> r + c + bt
        pts.emplace_back(p[0] + x.c + x.b * t, 0, 0);
        vals.push_back(v * expi(-x.a - x.b * (p[0] + x.b * t) + 0.5 * x.b * x.b * t));
        break;
      case HeisenbergRow::D:  // (p, q) -> (p + b, q + c)
        pts.emplace_back(p[0] + x.b, p[1] + x.c, 0);
        vals.push_back(v * expi(-x.a - x.b * p[1]));
        break;
    }
  }
  return f.with_support(std::move(pts), std::move(vals));
}

SectionVector bargmann_action(const GroupElement& g, const SectionVector& f) {
  if (f.mode() != SectionMode::Counting || f.dim() != 1) {
    throw Error(ErrorCode::InvalidParameter, "bargmann_action: counting sections on the line only");
  }
  const auto& x = g.bargmann();
  std::vector<Vec3> pts;
  std::vector<cplx> vals;
  for (std::size_t i = 0; i < f.points().size(); ++i) {
    const double p = f.points()[i][0] + x.b;
    pts.emplace_back(p, 0, 0);
    vals.push_back(f.values()[i] * expi(-x.a + p * x.c - 0.5 * p * p * x.e));
  }
  return f.with_support(std::move(pts), std::move(vals));
}

SectionVector euclid_action(double k, const GroupElement& g, const SectionVector& f) {
  const auto& x = g.euclid();
  const Vec3 kc = k * x.c;
  if (f.mode() == SectionMode::Counting) {
    if (f.dim() != 3) throw Error(ErrorCode::InvalidParameter, "euclid_action: support must be 3-vectors");
    std::vector<Vec3> pts;
    std::vector<cplx> vals;
    for (std::size_t i = 0; i < f.points().size(); ++i) {
      const Vec3& u = f.points()[i];
      if (std::fabs(u.norm() - 1.0) > 1e-9) throw Error(ErrorCode::NonUnitSupport, "euclid_action: support point off the unit sphere");
      const Vec3 v = x.A * u;
      pts.push_back(v);
      vals.push_back(f.values()[i] * expi(v.dot(kc)));
    }
    return f.with_support(std::move(pts), std::move(vals));
  }
  if (f.dim() != 3) throw Error(ErrorCode::InvalidParameter, "euclid_action: sphere sections only");
  SectionVector::Function inner = f.function();
  return f.with_function([inner, At = Mat3(x.A.transpose()), kc](const Vec3& v) { return expi(v.dot(kc)) * inner(At * v); });
}

SectionVector cylindrical_action(double k, int epsilon, const GroupElement& g, const SectionVector& f) {
  const auto& x = g.euclid();
  const int sign = axis_sign(x.A, 1e-9);
  if (sign == 0) throw Error(ErrorCode::InvalidParameter, "cylindrical_action: element outside H+-");
  if (f.mode() != SectionMode::Quadrature || f.dim() != 2) {
    throw Error(ErrorCode::InvalidParameter, "cylindrical_action: circle sections only");
  }
  const double factor = (sign < 0 && epsilon == 1) ? -1.0 : 1.0;
  SectionVector::Function inner = f.function();
  return f.with_function([inner, At = Mat3(x.A.transpose()), kc = Vec3(k * x.c), factor](const Vec3& u) { return factor * expi(u.dot(kc)) * inner(At * u); });
}

Action heisenberg_row_action(HeisenbergRow row, double t) {
  return [row, t](const GroupElement& g, const SectionVector& f) { return heisenberg_action(row, g, f, t); };
}

Action bargmann_p_action() {
  return [](const GroupElement& g, const SectionVector& f) { return bargmann_action(g, f); };
}

Action euclid_sphere_action(double k) {
  return [k](const GroupElement& g, const SectionVector& f) { return euclid_action(k, g, f); };
}

cplx matrix_coefficient(const Action& action, const SectionVector& f, const GroupElement& g) {
  const double n = norm(f);
  if (std::fabs(n - 1.0) > 1e-9) throw Error(ErrorCode::Unnormalized, "matrix_coefficient: vector is not a unit vector");
  return inner_product(f, action(g, f));
}

SectionVector heisenberg_cyclic_vector(HeisenbergRow row, double k, double ell, double t) {
  switch (row) {
    case HeisenbergRow::A: return SectionVector::delta(std::array{k});
    case HeisenbergRow::B: return SectionVector::delta(std::array{ell});
    case HeisenbergRow::C: return SectionVector::delta(std::array{ell + k * t});
    case HeisenbergRow::D: return SectionVector::delta(std::array{0.0, 0.0});
  }
  return SectionVector::delta(std::array{k});
}

cplx cylindrical_coefficient(double k, int epsilon, const GroupElement& g, const CircleGrid& grid) {
  if (axis_sign(g.euclid().A, 1e-9) == 0) return {};
  auto shared = std::make_shared<const CircleGrid>(grid);
  const SectionVector one = SectionVector::on_circle(shared, [](const Vec3&) { return cplx{1.0, 0.0}; });
  return inner_product(one, cylindrical_action(k, epsilon, g, one));
}

// ---------------------------------------------------------------- Mackey-Shoda

SubgroupCharacter character_of(const State& m) {
  return {m.name(), [m](const GroupElement& g) { return m.in_character_subgroup(g); },
          [m](const GroupElement& g) { return m(g); }};
}

SubgroupCharacter euclid_flip_translation_character(double k, int epsilon) {
  const Mat3 flip = Vec3(1, -1, -1).asDiagonal();
  return {"T+-",
          [flip](const GroupElement& g) {
            const Mat3& A = g.euclid().A;
            return near_matrix(A, Mat3::Identity(), 1e-9) || near_matrix(A, flip, 1e-9);
          },
          [k, epsilon, flip](const GroupElement& g) {
            const auto& x = g.euclid();
            const double sign = (near_matrix(x.A, flip, 1e-9) && epsilon == 1) ? -1.0 : 1.0;
            return sign * expi(k * x.c.x());
          }};
}

MackeyShodaReport mackey_shoda_a(const SubgroupCharacter& H, const SubgroupCharacter& K, const GroupElement& g,
                                 std::span<const GroupElement> probes, double tol) {
  MackeyShodaReport rep;
  const GroupElement gi = inverse(g);
  for (const auto& h : probes) {
    if (!H.contains(h)) throw Error(ErrorCode::ProbeNotInIntersection, "mackey_shoda_a: probe outside " + H.name);
    const GroupElement conj = compose(compose(gi, h), g);
    if (!K.contains(conj)) {
      throw Error(ErrorCode::ProbeNotInIntersection, "mackey_shoda_a: g^-1 h g outside " + K.name);
    }
    const double d = std::abs(H.value(h) - K.value(conj));
    rep.max_defect = std::max(rep.max_defect, d);
    if (d >= tol) rep.holds = false;
    ++rep.probes;
  }
  return rep;
}

}  // namespace qstates
