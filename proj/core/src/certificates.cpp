#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>

#include "polynormal/errors.hpp"
#include "polynormal/spherical.hpp"

namespace polynormal {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Facet of P containing both edges, or -1.
int common_facet(const Polytope& P, int e1, int e2) {
  for (int f : P.faces(1)[e1].facet_ids)
    for (int g : P.faces(1)[e2].facet_ids)
      if (f == g) return f;
  return -1;
}

}  // namespace

LocalCriticalReport local_critical_test(const Polytope& P, int vertex, const Vec3& direction) {
  const SphericalTriangle fig = vertex_figure(P, vertex);
  const auto& edges = P.faces(0)[vertex].edge_ids;
  const Vec3 y = direction.normalized();
  LocalCriticalReport r;
  r.is_max = y.dot(fig.A()) > 0 && y.dot(fig.B()) > 0 && y.dot(fig.C()) > 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = fig.vertex(i);
    const Vec3& b = fig.vertex((i + 1) % 3);
    const Vec3& c = fig.vertex((i + 2) % 3);
    if (y.dot(a) > 0 && y.dot(tangent_toward(a, b)) > 0 && y.dot(tangent_toward(a, c)) > 0)
      r.saddle_edges.push_back(edges[i]);
    if (y.dot(tangent_toward(a, b)) > 0 && y.dot(tangent_toward(b, a)) > 0)
      r.min_facets.push_back(common_facet(P, edges[i], edges[(i + 1) % 3]));
  }
  return r;
}

void require_simple_generic(const Polytope& P, double right_angle_tol) {
  if (P.dim() != 3) throw ValidationError("certificates need a 3-polytope");
  if (!P.is_simple()) throw NotSimple("polytope is not simple");
  for (int e = 0; e < P.num_edges(); ++e)
    if (std::abs(dihedral_angle(P, e) - kHalfPi) <= right_angle_tol)
      throw NotGeneric("edge " + std::to_string(e) + " has a right dihedral angle");
  for (int f = 0; f < P.num_facets(); ++f)
    for (int v : P.faces(2)[f].vertex_ids)
      if (std::abs(planar_angle(P, f, v) - kHalfPi) <= right_angle_tol)
        throw NotGeneric("facet " + std::to_string(f) + " has a right angle at vertex " + std::to_string(v));
}

std::optional<int> ten_normals_certificate(const Polytope& P, double right_angle_tol) {
  require_simple_generic(P, right_angle_tol);
  for (int v = 0; v < P.num_vertices(); ++v)
    if (classify_by_definition(vertex_figure(P, v)).verdict == Verdict::Nice) return v;
  return std::nullopt;
}

std::vector<AcuteCensusEntry> acute_census(const Polytope& P, double right_angle_tol) {
  require_simple_generic(P, right_angle_tol);
  std::vector<AcuteCensusEntry> out;
  for (int v = 0; v < P.num_vertices(); ++v) {
    const auto& edges = P.faces(0)[v].edge_ids;
    AcuteCensusEntry e;
    e.vertex = v;
    std::vector<int> acute_edges;
    for (int id : edges)
      if (dihedral_angle(P, id) < kHalfPi) acute_edges.push_back(id);
    e.acute_dihedral = static_cast<int>(acute_edges.size());
    int acute_facet = -1;
    for (int f : P.faces(0)[v].facet_ids)
      if (planar_angle(P, f, v) < kHalfPi) ++e.acute_planar, acute_facet = f;
    if (e.acute_planar == 1 && acute_edges.size() == 2)
      e.planar_between_acute_edges = common_facet(P, acute_edges[0], acute_edges[1]) == acute_facet;
    out.push_back(e);
  }
  return out;
}

NormalFanTiling normal_fan_tiling(const Polytope& P) {
  if (P.dim() != 3) throw ValidationError("normal fan tiling needs a 3-polytope");
  if (!P.is_simple()) throw NotSimple("polytope is not simple");
  NormalFanTiling t;
  t.all_skew = true;
  for (int v = 0; v < P.num_vertices(); ++v) {
    const SphericalTriangle dual = polar_dual_triangle(vertex_figure(P, v));
    const SphericalTriangle tile(-dual.A(), -dual.B(), -dual.C());
    const double omega = tile.solid_angle();
    t.solid_angles.push_back(omega);
    t.total_solid_angle += omega;
    if (classify_by_definition(tile).verdict == Verdict::Nice) t.all_skew = false;
    t.tiles.push_back(tile);
  }
  return t;
}

ShellRatio shell_ratio_check(const Polytope& P, const Vec3& center) {
  if (!contains_interior(P, center, 0.0)) throw PointNotInterior("shell center must be interior");
  ShellRatio s;
  s.r_in = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : P.facets()) s.r_in = std::min(s.r_in, -h.signed_distance(center));
  for (const Vec3& v : P.vertices()) s.r_out = std::max(s.r_out, (v - center).norm());
  s.ratio = s.r_out / s.r_in;
  s.certifies = s.ratio <= std::numbers::sqrt2;
  return s;
}

}  // namespace polynormal
