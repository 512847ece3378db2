#include "polynormal/normals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polynormal/errors.hpp"

namespace polynormal {
namespace {

// In-plane unit normal of edge (a, b) of facet f, pointing into the facet.
Vec3 inward_edge_normal(const Polytope& P, int f, const Vec3& a, const Vec3& b) {
  const Face& F = P.faces(2)[f];
  Vec3 m = P.facets()[f].normal.cross(b - a).normalized();
  if (m.dot(F.affine_point - a) < 0) m = -m;
  return m;
}

RegionConstraint make(const Vec3& normal, const Vec3& through, SheetColor color, FaceRef owner,
                      FaceRef attached) {
  return {normal, normal.dot(through), color, owner, attached};
}

double margin_of(const Polytope& P, const Tolerance& tol) { return tol.relint * P.diameter(); }

Vec3 base_point(const Polytope& P, FaceRef ref, const Vec3& y) {
  const Face& F = P.face(ref);
  if (ref.dim == 0) return P.vertex(F.vertex_ids[0]);
  if (ref.dim == P.dim() - 1) {
    const Halfspace& h = P.facets()[F.facet_ids[0]];
    return y - h.signed_distance(y) * h.normal;
  }
  const Vec3& a = P.vertex(F.vertex_ids[0]);
  const Vec3& u = F.tangent_basis[0];
  return a + u.dot(y - a) * u;
}

void require_interior(const Polytope& P, const Vec3& y, const Tolerance& tol) {
  if (!contains_interior(P, y, margin_of(P, tol)))
    throw PointNotInterior("query point is not in the interior of the polytope");
}

std::optional<int> try_count(const Polytope& P, const Vec3& y, const Tolerance& tol) {
  if (!contains_interior(P, y, margin_of(P, tol))) return std::nullopt;
  auto normals = try_normals_from_point(P, y, tol);
  if (!normals) return std::nullopt;
  return static_cast<int>(normals->size());
}

}  // namespace

std::vector<RegionConstraint> active_region(const Polytope& P, FaceRef ref) {
  const Face& F = P.face(ref);
  std::vector<RegionConstraint> out;
  if (P.dim() == 2) {
    if (ref.dim == 1) {
      const int a = F.vertex_ids[0], b = F.vertex_ids[1];
      const Vec3 u = (P.vertex(b) - P.vertex(a)).normalized();
      out.push_back(make(u, P.vertex(a), SheetColor::Blue, ref, {0, a}));
      out.push_back(make(-u, P.vertex(b), SheetColor::Blue, ref, {0, b}));
    } else {
      const int v = F.vertex_ids[0];
      for (int e : F.edge_ids) {
        const auto& ids = P.faces(1)[e].vertex_ids;
        const int w = ids[0] == v ? ids[1] : ids[0];
        out.push_back(make((P.vertex(w) - P.vertex(v)).normalized(), P.vertex(v), SheetColor::Blue,
                           {1, e}, ref));
      }
    }
    return out;
  }

  switch (ref.dim) {
    case 2: {
      const auto& cyc = F.vertex_ids;
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        const Vec3& a = P.vertex(cyc[i]);
        const Vec3& b = P.vertex(cyc[(i + 1) % cyc.size()]);
        out.push_back(make(inward_edge_normal(P, ref.id, a, b), a, SheetColor::Blue, ref,
                           {1, F.edge_ids[i]}));
      }
      break;
    }
    case 1: {
      const int ia = F.vertex_ids[0], ib = F.vertex_ids[1];
      const Vec3& a = P.vertex(ia);
      const Vec3& b = P.vertex(ib);
      const Vec3 u = (b - a).normalized();
      out.push_back(make(u, a, SheetColor::Red, ref, {0, ia}));
      out.push_back(make(-u, b, SheetColor::Red, ref, {0, ib}));
      for (int f : F.facet_ids)
        out.push_back(make(inward_edge_normal(P, f, a, b), a, SheetColor::Blue, {2, f}, ref));
      break;
    }
    default: {
      const int v = F.vertex_ids[0];
      for (int e : F.edge_ids) {
        const auto& ids = P.faces(1)[e].vertex_ids;
        const int w = ids[0] == v ? ids[1] : ids[0];
        out.push_back(make((P.vertex(w) - P.vertex(v)).normalized(), P.vertex(v), SheetColor::Red,
                           {1, e}, {0, v}));
      }
    }
  }
  return out;
}

RegionTest test_active_region(const Polytope& P, FaceRef face, const Vec3& y, const Tolerance& tol) {
  double clearance = std::numeric_limits<double>::infinity();
  for (const RegionConstraint& c : active_region(P, face)) clearance = std::min(clearance, c.eval(y));
  const double margin = margin_of(P, tol);
  RegionTest t;
  t.clearance = clearance;
  t.membership = clearance > margin     ? Membership::Inside
                 : clearance < -margin ? Membership::Outside
                                        : Membership::OnBoundary;
  return t;
}

std::optional<NormalRecord> face_normal_from(const Polytope& P, FaceRef face, const Vec3& y,
                                             const Tolerance& tol) {
  const RegionTest t = test_active_region(P, face, y, tol);
  if (t.membership == Membership::OnBoundary)
    throw OnBifurcationSet("point is on the boundary of an active region");
  if (t.membership == Membership::Outside) return std::nullopt;

  NormalRecord r;
  r.face = face;
  r.base_point = base_point(P, face, y);
  r.sq_dist = (y - r.base_point).squaredNorm();
  r.morse_index = (P.dim() - 1) - face.dim;

  const Vec3 dir = y - r.base_point;
  const auto fit = fit_cone(P.face(face).cone_generators, dir);
  if (fit.residual > 1e-7 * dir.norm() + 1e-12 * P.diameter())
    throw InvariantViolation("cone membership test disagrees with the active-region inequalities");
  return r;
}

std::optional<std::vector<NormalRecord>> try_normals_from_point(const Polytope& P, const Vec3& y,
                                                                const Tolerance& tol) {
  std::vector<NormalRecord> out;
  for (int d = 0; d < P.dim(); ++d) {
    for (int i = 0; i < static_cast<int>(P.faces(d).size()); ++i) {
      try {
        if (auto r = face_normal_from(P, {d, i}, y, tol)) out.push_back(*r);
      } catch (const OnBifurcationSet&) {
        return std::nullopt;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const NormalRecord& a, const NormalRecord& b) {
    if (a.sq_dist != b.sq_dist) return a.sq_dist < b.sq_dist;
    return a.face < b.face;
  });
  return out;
}

std::vector<NormalRecord> normals_from_point(const Polytope& P, const Vec3& y, const Tolerance& tol) {
  require_interior(P, y, tol);
  auto out = try_normals_from_point(P, y, tol);
  if (!out) throw OnBifurcationSet("point lies on the bifurcation set; perturb it first");
  return *out;
}

bool is_generic(const Polytope& P, const Vec3& y, const Tolerance& tol) {
  return try_count(P, y, tol).has_value();
}

int stable_lower_bound(const Polytope& P, const Vec3& y, const Tolerance& tol) {
  int n = 0;
  for (int d = 0; d < P.dim(); ++d)
    for (int i = 0; i < static_cast<int>(P.faces(d).size()); ++i)
      if (test_active_region(P, {d, i}, y, tol).membership == Membership::Inside) ++n;
  return n;
}

Vec3 perturb_to_generic(const Polytope& P, const Vec3& y, Rng& rng, const Tolerance& tol) {
  require_interior(P, y, tol);
  if (is_generic(P, y, tol)) return y;
  const int lower = stable_lower_bound(P, y, tol);
  double delta = 50.0 * margin_of(P, tol);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Vec3 d = random_unit_vector(rng, P.dim());
    const Vec3 plus = y + delta * d;
    const Vec3 minus = y - delta * d;
    const auto n_plus = try_count(P, plus, tol);
    const auto n_minus = try_count(P, minus, tol);
    if (n_plus && n_minus) {
      const bool take_plus = *n_plus >= *n_minus;
      if (std::max(*n_plus, *n_minus) < lower)
        throw InvariantViolation("perturbed point lost a stable normal");
      return take_plus ? plus : minus;
    }
    if (attempt % 10 == 9) delta *= 2.0;
  }
  throw FailedPerturbation("no generic point found near the query point after 100 attempts");
}

ActiveRegions::ActiveRegions(const Polytope& P, const Tolerance& tol) : P_(&P), margin_(margin_of(P, tol)) {
  for (int d = 0; d < P.dim(); ++d)
    for (int i = 0; i < static_cast<int>(P.faces(d).size()); ++i)
      regions_.push_back({(P.dim() - 1) - d, active_region(P, {d, i})});
}

std::optional<MorseProfile> ActiveRegions::profile(const Vec3& y) const {
  if (!contains_interior(*P_, y, margin_)) return std::nullopt;
  MorseProfile p;
  for (const Region& r : regions_) {
    double clearance = std::numeric_limits<double>::infinity();
    for (const RegionConstraint& c : r.constraints) clearance = std::min(clearance, c.eval(y));
    if (std::abs(clearance) <= margin_) return std::nullopt;
    if (clearance < 0) continue;
    if (r.morse_index == 0)
      ++p.minima;
    else if (r.morse_index == P_->dim() - 1)
      ++p.maxima;
    else
      ++p.saddles;
  }
  return p;
}

MorseProfile profile_of(const std::vector<NormalRecord>& normals, int dim) {
  MorseProfile p;
  for (const NormalRecord& r : normals) {
    if (r.morse_index == 0)
      ++p.minima;
    else if (r.morse_index == dim - 1)
      ++p.maxima;
    else
      ++p.saddles;
  }
  return p;
}

void check_profile(const MorseProfile& p, int dim) {
  if (dim == 3) {
    if (p.minima - p.saddles + p.maxima != 2)
      throw InvariantViolation("m - s + M = 2 violated: (m, s, M) = (" + std::to_string(p.minima) + ", " +
                               std::to_string(p.saddles) + ", " + std::to_string(p.maxima) + ")");
  } else if (p.saddles != 0 || p.minima != p.maxima) {
    throw InvariantViolation("polygon profile must have as many minima as maxima: (m, M) = (" +
                             std::to_string(p.minima) + ", " + std::to_string(p.maxima) + ")");
  }
  if (p.total() % 2 != 0) throw InvariantViolation("normal count must be even");
}

MorseProfile morse_profile(const Polytope& P, const Vec3& y, const Tolerance& tol) {
  Rng rng(0x6e6f726dULL);
  const Vec3 g = perturb_to_generic(P, y, rng, tol);
  const MorseProfile p = profile_of(normals_from_point(P, g, tol), P.dim());
  check_profile(p, P.dim());
  return p;
}

}  // namespace polynormal
