#pragma once

#include <optional>
#include <vector>

#include "polynormal/polytope.hpp"
#include "polynormal/random.hpp"
#include "polynormal/tolerance.hpp"

namespace polynormal {

/// A normal from y: the segment from y to its base point z on face F.
struct NormalRecord {
  FaceRef face;
  Vec3 base_point = Vec3::Zero();
  double sq_dist = 0.0;
  /// (dim - 1) - dim F: 0 minimum, 1 saddle (3-D only), dim - 1 maximum.
  int morse_index = 0;
};

struct MorseProfile {
  int minima = 0;
  int saddles = 0;
  int maxima = 0;

  int total() const { return minima + saddles + maxima; }
  friend bool operator==(const MorseProfile&, const MorseProfile&) = default;
};

enum class SheetColor { Blue, Red };

/// One linear inequality g(y) = <normal, y> - offset >= 0 cutting out the
/// active region AR(F) = (Cone(F) + F) ∩ P inside P.
///
/// In 3-D a facet F contributes one blue inequality per boundary edge e
/// (source = (F, e)); an edge e contributes two red inequalities, one per
/// endpoint V (source = (e, V)), and the blue inequalities of its two
/// facets; a vertex contributes one red inequality per incident edge. A
/// 2-D edge contributes the lines through its endpoints, a 2-D vertex one
/// inequality per incident edge; these are all labelled blue.
struct RegionConstraint {
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;
  SheetColor color = SheetColor::Blue;
  /// Face whose own active region the sheet bounds in the raw enumeration
  /// (facet for blue, edge for red) and the sub-face it is attached to.
  FaceRef owner;
  FaceRef attached;

  double eval(const Vec3& y) const { return normal.dot(y) - offset; }
};

std::vector<RegionConstraint> active_region(const Polytope& P, FaceRef face);

enum class Membership { Inside, Outside, OnBoundary };

/// Signed clearance of y from the boundary of AR(F) inside P: the minimum
/// of the region inequalities. Membership compares it with the margin
/// tol.relint * diameter.
struct RegionTest {
  Membership membership = Membership::Outside;
  double clearance = 0.0;
};

RegionTest test_active_region(const Polytope& P, FaceRef face, const Vec3& y, const Tolerance& tol = {});

/// The normal from y with base in relint(F), if any. Throws
/// OnBifurcationSet when y is within the margin of the boundary of AR(F).
std::optional<NormalRecord> face_normal_from(const Polytope& P, FaceRef face, const Vec3& y,
                                             const Tolerance& tol = {});

/// All normals from an interior y, sorted by squared distance. Throws
/// PointNotInterior or OnBifurcationSet.
std::vector<NormalRecord> normals_from_point(const Polytope& P, const Vec3& y, const Tolerance& tol = {});

/// Non-throwing variant: nullopt if y is on the bifurcation set.
std::optional<std::vector<NormalRecord>> try_normals_from_point(const Polytope& P, const Vec3& y,
                                                                const Tolerance& tol = {});

bool is_generic(const Polytope& P, const Vec3& y, const Tolerance& tol = {});

/// Normals that survive every small perturbation of y: faces whose active
/// region contains y with clearance above the margin.
int stable_lower_bound(const Polytope& P, const Vec3& y, const Tolerance& tol = {});

/// Moves y off the bifurcation set. Pairs y ± delta*d with random d are
/// tried with growing delta; of the first pair with both sides generic the
/// side with more normals wins. Returns y unchanged if already generic.
/// Throws FailedPerturbation after 100 attempts.
Vec3 perturb_to_generic(const Polytope& P, const Vec3& y, Rng& rng, const Tolerance& tol = {});

/// Precomputed active-region inequalities of every face, for repeated
/// counting. Skips the cone cross-check done by face_normal_from.
class ActiveRegions {
 public:
  explicit ActiveRegions(const Polytope& P, const Tolerance& tol = {});

  /// Profile at y; nullopt if y is not interior or is on the bifurcation set.
  std::optional<MorseProfile> profile(const Vec3& y) const;

  const Polytope& polytope() const { return *P_; }

 private:
  struct Region {
    int morse_index = 0;
    std::vector<RegionConstraint> constraints;
  };
  const Polytope* P_;
  double margin_;
  std::vector<Region> regions_;
};

MorseProfile profile_of(const std::vector<NormalRecord>& normals, int dim);

/// Profile at y (perturbed to a generic point first if needed). Throws
/// InvariantViolation if m - s + M differs from the Euler characteristic.
MorseProfile morse_profile(const Polytope& P, const Vec3& y, const Tolerance& tol = {});

/// Checks m - s + M = 2 (3-D) or m = M (2-D) and throws InvariantViolation
/// otherwise.
void check_profile(const MorseProfile& profile, int dim);

}  // namespace polynormal
