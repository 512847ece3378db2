#include <algorithm>
#include <cmath>
#include <optional>

#include "polynormal/bifurcation.hpp"
#include "polynormal/errors.hpp"

namespace polynormal {
namespace {

struct Hit {
  double t;
  int plane;
};

// Classifies the crossing of `plane` at x. Returns nullopt when some sheet
// boundary passes within the margin of x.
std::optional<std::vector<std::pair<SheetSource, int>>> real_sheets(const Polytope& P, const SheetPlane& plane,
                                                                    const Vec3& x, const Vec3& direction,
                                                                    double margin) {
  std::vector<std::pair<SheetSource, int>> out;
  for (const SheetSource& src : plane.sources) {
    bool real = true;
    int sign = 0;
    for (const RegionConstraint& c : active_region(P, src.owner)) {
      if (c.attached == src.attached && c.owner == src.owner) {
        sign = c.normal.dot(direction) > 0 ? +2 : -2;
        continue;
      }
      const double g = c.eval(x);
      if (std::abs(g) <= margin) return std::nullopt;
      if (g < 0) real = false;
    }
    if (real) out.emplace_back(src, sign);
  }
  return out;
}

std::optional<AuditResult> walk(const Polytope& P, const std::vector<SheetPlane>& planes,
                                const ActiveRegions& regions, const Vec3& a, const Vec3& b, double margin) {
  const Vec3 dir = b - a;
  const double length = dir.norm();
  std::vector<Hit> hits;
  for (int k = 0; k < static_cast<int>(planes.size()); ++k) {
    const double da = planes[k].normal.dot(a) - planes[k].offset;
    const double db = planes[k].normal.dot(b) - planes[k].offset;
    if (std::abs(da) <= margin || std::abs(db) <= margin) return std::nullopt;
    if ((da < 0) != (db < 0)) hits.push_back({da / (da - db), k});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t < y.t; });
  for (std::size_t i = 1; i < hits.size(); ++i)
    if ((hits[i].t - hits[i - 1].t) * length <= 10.0 * margin) return std::nullopt;

  // Profiles on the open intervals between consecutive crossings.
  std::vector<MorseProfile> profiles;
  for (std::size_t i = 0; i <= hits.size(); ++i) {
    const double t0 = i == 0 ? 0.0 : hits[i - 1].t;
    const double t1 = i == hits.size() ? 1.0 : hits[i].t;
    const auto p = regions.profile(a + 0.5 * (t0 + t1) * dir);
    if (!p) return std::nullopt;
    profiles.push_back(*p);
  }

  AuditResult result;
  result.from = a;
  result.to = b;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    Crossing c;
    c.t = hits[i].t;
    c.point = a + c.t * dir;
    const auto sheets = real_sheets(P, planes[hits[i].plane], c.point, dir, margin);
    if (!sheets) return std::nullopt;
    for (const auto& [src, delta] : *sheets) {
      c.sheets.push_back(src);
      c.predicted_delta += delta;
    }
    c.profile_before = profiles[i];
    c.profile_after = profiles[i + 1];
    c.count_before = profiles[i].total();
    c.count_after = profiles[i + 1].total();
    result.crossings.push_back(std::move(c));
  }
  return result;
}

}  // namespace

AuditResult crossing_audit(const Polytope& P, const Vec3& from, const Vec3& to, Rng& rng, const Tolerance& tol) {
  const double margin = tol.relint * P.diameter();
  const auto planes = arrangement_planes(P, tol);
  const ActiveRegions regions(P, tol);
  Vec3 a = from, b = to;
  for (int attempt = 0; attempt < 10; ++attempt) {
    if (attempt > 0) {
      const double jitter = 1e-6 * P.diameter() * attempt;
      a += jitter * random_unit_vector(rng, P.dim());
      b += jitter * random_unit_vector(rng, P.dim());
    }
    if (!contains_interior(P, a, margin) || !contains_interior(P, b, margin))
      throw PointNotInterior("audit segment must lie in the interior of the polytope");
    a = perturb_to_generic(P, a, rng, tol);
    b = perturb_to_generic(P, b, rng, tol);
    if (auto result = walk(P, planes, regions, a, b, margin)) return *result;
  }
  throw NonTransversal("segment stays non-transversal to the bifurcation set after 10 perturbations");
}

bool crossing_obeys_type_rule(const Crossing& c, int dim) {
  const int delta = c.count_after - c.count_before;
  const int dm = c.profile_after.minima - c.profile_before.minima;
  const int ds = c.profile_after.saddles - c.profile_before.saddles;
  const int dM = c.profile_after.maxima - c.profile_before.maxima;
  if (c.sheets.empty()) return dm == 0 && ds == 0 && dM == 0;
  if (delta != c.predicted_delta) return false;
  if (c.sheets.size() > 1) return true;
  if (delta != 2 && delta != -2) return false;
  const int h = delta / 2;
  if (dim == 2) return dm == h && dM == h && ds == 0;
  if (c.sheets.front().color == SheetColor::Blue) return dm == h && ds == h && dM == 0;
  return dM == h && ds == h && dm == 0;
}

}  // namespace polynormal
