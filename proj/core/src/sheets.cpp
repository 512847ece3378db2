#include <cmath>

#include "polynormal/bifurcation.hpp"

namespace polynormal {
namespace {

struct RawSheet {
  RegionConstraint constraint;
  Vec3 anchor;  // a point on the plane
};

std::vector<RawSheet> raw_sheets(const Polytope& P) {
  std::vector<RawSheet> out;
  // Each sheet is owned by exactly one face: facets own blue ones, edges own
  // red ones (polygon edges own all of theirs).
  const int owner_dim = P.dim() - 1;
  for (int d : {owner_dim, owner_dim - 1}) {
    if (d < 1) continue;
    for (int i = 0; i < static_cast<int>(P.faces(d).size()); ++i) {
      const FaceRef owner{d, i};
      for (const RegionConstraint& c : active_region(P, owner)) {
        if (c.owner != owner) continue;
        const Face& at = P.face(c.attached);
        out.push_back({c, P.vertex(at.vertex_ids[0])});
      }
    }
  }
  return out;
}

std::vector<SheetPlane> dedup(const std::vector<RawSheet>& raw, const Polytope& P, const Tolerance& tol,
                              bool by_color) {
  const double eps = 10.0 * tol.geometry * P.diameter();
  std::vector<SheetPlane> planes;
  std::vector<Vec3> anchors;
  for (SheetColor color : {SheetColor::Blue, SheetColor::Red}) {
    for (const RawSheet& r : raw) {
      if (by_color && r.constraint.color != color) continue;
      if (!by_color && color == SheetColor::Red) break;
      const SheetSource src{r.constraint.color, r.constraint.owner, r.constraint.attached};
      bool merged = false;
      for (std::size_t k = 0; k < planes.size() && !merged; ++k) {
        if (by_color && planes[k].color != color) continue;
        const Vec3& n = planes[k].normal;
        if (n.cross(r.constraint.normal).norm() > 10.0 * tol.geometry) continue;
        if (std::abs(n.dot(r.anchor) - planes[k].offset) > eps) continue;
        if (std::abs(r.constraint.normal.dot(anchors[k]) - r.constraint.offset) > eps) continue;
        planes[k].sources.push_back(src);
        merged = true;
      }
      if (!merged) {
        planes.push_back({r.constraint.normal, r.constraint.offset, r.constraint.color, {src}});
        anchors.push_back(r.anchor);
      }
    }
  }
  return planes;
}

}  // namespace

std::vector<SheetSource> sheet_sources(const Polytope& P) {
  std::vector<SheetSource> out;
  for (const RawSheet& r : raw_sheets(P))
    out.push_back({r.constraint.color, r.constraint.owner, r.constraint.attached});
  return out;
}

std::vector<SheetPlane> sheet_planes(const Polytope& P, const Tolerance& tol) {
  return dedup(raw_sheets(P), P, tol, true);
}

std::vector<SheetPlane> arrangement_planes(const Polytope& P, const Tolerance& tol) {
  return dedup(raw_sheets(P), P, tol, false);
}

}  // namespace polynormal
