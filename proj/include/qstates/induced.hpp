#pragma once

// Induced representations realized on sections: counting-measure (l^2)
// sections with finite support for the Heisenberg/Bargmann modules and the
// discrete Euclid module, and quadrature (L^2) sections on the sphere or
// circle for the continuous Euclid modules.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qstates/quadrature.hpp"
#include "qstates/states.hpp"

namespace qstates {

enum class SectionMode { Counting, Quadrature };

/// Counting mode: finitely many support points with values, merged on a
/// 1e-9 grid of rounded coordinates and kept sorted.
/// Quadrature mode: a function on the sphere (or circle) evaluated on a
/// fixed product grid; the inner product uses the normalized measure.
class SectionVector {
 public:
  using Function = std::function<cplx(const Vec3&)>;

  static SectionVector delta(std::span<const double> point, cplx value = 1.0);
  static SectionVector counting(int dim, std::vector<Vec3> points, std::vector<cplx> values);
  static SectionVector on_sphere(std::shared_ptr<const SphereGrid> grid, Function f);
  static SectionVector on_circle(std::shared_ptr<const CircleGrid> grid, Function f);

  SectionMode mode() const noexcept { return mode_; }
  int dim() const noexcept { return dim_; }
  const std::vector<Vec3>& points() const noexcept { return points_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  const Function& function() const noexcept { return fn_; }

  /// Values on the quadrature nodes (quadrature mode only).
  std::vector<cplx> sampled() const;
  /// Quadrature weights in node order (quadrature mode only).
  const std::vector<double>& weights() const;
  /// Identity of the underlying grid; sections on different grids do not pair.
  const void* grid_id() const noexcept;

  /// Rebuilds a counting section, merging points that agree on the 1e-9 grid.
  SectionVector with_support(std::vector<Vec3> points, std::vector<cplx> values) const;
  SectionVector with_function(Function f) const;

  cplx value_at(const Vec3& point) const;

 private:
  SectionMode mode_ = SectionMode::Counting;
  int dim_ = 1;
  std::vector<Vec3> points_;
  std::vector<cplx> values_;
  std::shared_ptr<const SphereGrid> sphere_;
  std::shared_ptr<const CircleGrid> circle_;
  Function fn_;

  void canonicalize();
};

/// Counting: sum conj(f) h over common support. Quadrature: normalized
/// quadrature sum. Throws Error{InvalidParameter} on mode/grid mismatch.
cplx inner_product(const SectionVector& f, const SectionVector& h);
double norm(const SectionVector& f);

/// Rows of the Heisenberg table: polarizations H_inf (a), H_0 (b), H_t (c)
/// and the center (d).
enum class HeisenbergRow { A, B, C, D };
HeisenbergRow heisenberg_row_from_string(std::string_view name);

/// (a)  (g phi)(p)   = e^{-ia} e^{ipc} phi(p - b)
/// (b)  (g psi)(q)   = e^{-ia} e^{-ib(q-c)} psi(q - c)
/// (c)  (g psi)(r)   = e^{-ia} e^{-ib(r-c)} e^{ib^2 t/2} psi(r - c - bt)
/// (d)  (g phi)(p,q) = e^{-ia} e^{-ib(q-c)} phi(p - b, q - c)
/// Counting mode only; support points are translated exactly.
SectionVector heisenberg_action(HeisenbergRow row, const GroupElement& g, const SectionVector& f, double t = 0.0);

/// (g phi)(p) = e^{-ia} e^{i(pc - p^2 e/2)} phi(p - b) on l^2 of the line.
SectionVector bargmann_action(const GroupElement& g, const SectionVector& f);

/// (g f)(v) = e^{i<v, kc>} f(A^{-1} v) on sections over the unit sphere.
/// Throws Error{NonUnitSupport} if a counting support point is off the sphere.
SectionVector euclid_action(double k, const GroupElement& g, const SectionVector& f);

/// Action of H+- = {A e3 = +-e3} on sections over the equator:
/// (g f)(u) = (+-1)^eps e^{i<u, kc>} f(A^{-1} u). Throws Error{InvalidParameter}
/// for g outside H+-.
SectionVector cylindrical_action(double k, int epsilon, const GroupElement& g, const SectionVector& f);

using Action = std::function<SectionVector(const GroupElement&, const SectionVector&)>;

Action heisenberg_row_action(HeisenbergRow row, double t = 0.0);
Action bargmann_p_action();
Action euclid_sphere_action(double k);

/// (f, g.f) for a unit vector f. Throws Error{Unnormalized} if |f| != 1
/// within 1e-9.
cplx matrix_coefficient(const Action& action, const SectionVector& f, const GroupElement& g);

/// Designated cyclic vectors: delta at k (a), ell (b), ell + k t (c), (0,0) (d).
SectionVector heisenberg_cyclic_vector(HeisenbergRow row, double k, double ell, double t);

/// Matrix coefficient of the cylindrical module: 0 off H+-, otherwise
/// (+-1)^eps times the circle average of e^{i<u, kc>}.
cplx cylindrical_coefficient(double k, int epsilon, const GroupElement& g, const CircleGrid& grid);

// ---------------------------------------------------------------- Mackey-Shoda

/// Character of a closed subgroup: membership predicate and values.
struct SubgroupCharacter {
  std::string name;
  std::function<bool(const GroupElement&)> contains;
  std::function<cplx(const GroupElement&)> value;
};

/// The character m restricted to {g : m is unimodular on g}.
SubgroupCharacter character_of(const State& m);
/// T+- = {A in {1, rot(pi e1)}} with chi(A, c) = (+-1)^eps e^{i k c_1}.
SubgroupCharacter euclid_flip_translation_character(double k, int epsilon);

struct MackeyShodaReport {
  bool holds = true;
  double max_defect = 0;  // max |chi(h) - eta(g^{-1} h g)|
  std::size_t probes = 0;
};

/// Condition (a): chi(h) = eta(g^{-1} h g) for the probes h in H n gKg^{-1}.
/// Throws Error{ProbeNotInIntersection} if a probe is outside H or if
/// g^{-1} h g is outside K. The companion finiteness condition on double
/// cosets is analytic and not decided here. For reference:
///   Heisenberg: every H_t contains the center = [G, G], so it is normal
///     and H g K = g H K is a single coset of HK.
///   Euclid H = SO(2) x R^3: H g H / H is the SO(2)-orbit of A e3 on S^2,
///     a point at the poles and a circle otherwise.
MackeyShodaReport mackey_shoda_a(const SubgroupCharacter& H, const SubgroupCharacter& K, const GroupElement& g,
                                 std::span<const GroupElement> probes, double tol = 1e-9);

}  // namespace qstates
