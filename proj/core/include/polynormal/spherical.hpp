#pragma once

#include <array>
#include <optional>
#include <vector>

#include "polynormal/polytope.hpp"
#include "polynormal/tolerance.hpp"

namespace polynormal {

/// Geodesic distance on the unit sphere.
double spherical_distance(const Vec3& x, const Vec3& y);

/// Geodesic triangle on S^2 contained in an open hemisphere.
class SphericalTriangle {
 public:
  /// Normalizes the inputs. Throws DegenerateInput if two vertices coincide
  /// or are antipodal, or if the triangle does not fit in an open hemisphere.
  SphericalTriangle(const Vec3& a, const Vec3& b, const Vec3& c);

  const Vec3& A() const { return v_[0]; }
  const Vec3& B() const { return v_[1]; }
  const Vec3& C() const { return v_[2]; }
  const Vec3& vertex(int i) const { return v_[i]; }

  /// Side opposite vertex i: |BC|, |CA|, |AB| for i = 0, 1, 2.
  double side(int i) const;
  /// Interior angle at vertex i.
  double angle(int i) const;
  double solid_angle() const;

 private:
  std::array<Vec3, 3> v_;
};

/// Unit tangent at y of the great circle from y toward z.
Vec3 tangent_toward(const Vec3& y, const Vec3& z);

struct ArcProjection {
  Vec3 foot = Vec3::Zero();
  double distance = 0.0;
};

/// Orthogonal projection of x onto the arc yz, or nullopt if the foot of
/// the perpendicular falls outside the arc.
std::optional<ArcProjection> spherical_project(const Vec3& x, const Vec3& y, const Vec3& z);

/// Spherical triangle cut out at a simple vertex: its vertices are the unit
/// edge directions, in the order of the vertex's edge list. Throws NotSimple.
SphericalTriangle vertex_figure(const Polytope& P, int vertex);

/// Vertices are the poles of the opposite sides, on the same side as the
/// original vertex. Involutive.
SphericalTriangle polar_dual_triangle(const SphericalTriangle& t);

enum class Verdict { Nice, Skew };

/// Which of the seven skewness conditions hold when the vertices are
/// relabelled (A, B, C) := (v[p0], v[p1], v[p2]).
struct LemmaRow {
  std::array<int, 3> labeling{};
  std::array<bool, 7> holds{};
  bool all() const;
};

struct VertexClassification {
  Verdict verdict = Verdict::Nice;
  /// Interior point projecting to all three sides with all vertex distances
  /// below pi/2 (definition classifier, nice verdicts only).
  std::optional<Vec3> witness;
  /// Definition classifier: best margin found; the verdict is nice iff it is
  /// at least 1e-7. Borderline when |margin| < 1e-6.
  double margin = 0.0;
  bool borderline = false;
  /// Lemma classifier: one row per relabelling.
  std::vector<LemmaRow> conditions;
};

/// Witness margin of x: the minimum over the three sides of the two
/// projection inequalities, and of <x, A>, <x, B>, <x, C>.
double witness_margin(const SphericalTriangle& t, const Vec3& x);

/// Searches interior points on a barycentric grid of resolution `grid_res`
/// (after cheaper coarse passes), then refines twice by a factor of ten
/// around the best cell. If no witness turned up, the smallest witness
/// inequality is maximized exactly by linear programming.
VertexClassification classify_by_definition(const SphericalTriangle& t, int grid_res = 400);

/// Skew iff some relabelling satisfies all seven conditions. Throws
/// Borderline if a tested quantity is within 1e-9 of its threshold.
VertexClassification classify_by_lemma(const SphericalTriangle& t);

struct LocalCriticalReport {
  bool is_max = false;
  std::vector<int> saddle_edges;
  std::vector<int> min_facets;
};

/// Critical points of the squared distance from y = V + t * direction on
/// the faces incident to a simple vertex V, for small t > 0.
LocalCriticalReport local_critical_test(const Polytope& P, int vertex, const Vec3& direction);

/// Throws NotSimple, or NotGeneric if a dihedral or planar angle is within
/// `right_angle_tol` of pi/2.
void require_simple_generic(const Polytope& P, double right_angle_tol = 1e-6);

/// First vertex whose figure is nice; such a vertex guarantees N(P) >= 10.
std::optional<int> ten_normals_certificate(const Polytope& P, double right_angle_tol = 1e-6);

struct AcuteCensusEntry {
  int vertex = 0;
  int acute_dihedral = 0;
  int acute_planar = 0;
  /// True when exactly one planar angle is acute and it sits in the facet
  /// spanned by the two acute-dihedral edges.
  bool planar_between_acute_edges = false;
  /// The pattern every vertex must show if N(P) < 10: two acute dihedral
  /// angles, one acute planar angle, not between them.
  bool compatible_with_low_N() const {
    return acute_dihedral == 2 && acute_planar == 1 && !planar_between_acute_edges;
  }
};

std::vector<AcuteCensusEntry> acute_census(const Polytope& P, double right_angle_tol = 1e-6);

struct NormalFanTiling {
  /// Outer normal cones of the vertices, in vertex order.
  std::vector<SphericalTriangle> tiles;
  std::vector<double> solid_angles;
  double total_solid_angle = 0.0;
  bool all_skew = false;
};

NormalFanTiling normal_fan_tiling(const Polytope& P);

struct ShellRatio {
  double r_in = 0.0;
  double r_out = 0.0;
  double ratio = 0.0;
  /// ratio <= sqrt(2): no acute dihedral angle, hence N(P) >= 10.
  bool certifies = false;
};

ShellRatio shell_ratio_check(const Polytope& P, const Vec3& center);

}  // namespace polynormal
