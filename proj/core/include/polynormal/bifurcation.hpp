#pragma once

#include <cstdint>
#include <vector>

#include "polynormal/normals.hpp"
#include "polynormal/polytope.hpp"
#include "polynormal/tolerance.hpp"

namespace polynormal {

/// Raw sheet incidence: blue (facet, boundary edge) or red (edge, endpoint).
/// For polygons: (edge, endpoint), labelled blue.
struct SheetSource {
  SheetColor color = SheetColor::Blue;
  FaceRef owner;
  FaceRef attached;

  friend auto operator<=>(const SheetSource&, const SheetSource&) = default;
};

/// A plane carrying at least one sheet of the bifurcation set. The plane is
/// <normal, x> = offset; `sources` lists every incidence that produced it.
struct SheetPlane {
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;
  SheetColor color = SheetColor::Blue;
  std::vector<SheetSource> sources;
};

/// Raw incidences: 2E blue and 2E red in 3-D, 2E in 2-D.
std::vector<SheetSource> sheet_sources(const Polytope& P);

/// Sheet planes deduplicated within each color (planes equal within
/// tol.geometry * diameter). Blue planes come first.
std::vector<SheetPlane> sheet_planes(const Polytope& P, const Tolerance& tol = {});

/// Distinct planes of the arrangement regardless of color.
std::vector<SheetPlane> arrangement_planes(const Polytope& P, const Tolerance& tol = {});

struct Chamber {
  /// Cut planes bounding the cell, oriented so the cell satisfies <n, x> <= b;
  /// the facet inequalities of P are implied.
  std::vector<Halfspace> halfspaces;
  /// Cell vertices.
  std::vector<Vec3> vertices;
  Vec3 rep_point = Vec3::Zero();
  double volume = 0.0;
  int count = 0;
  MorseProfile profile;
  /// Extra random interior samples whose count matched `count`, and those
  /// that did not.
  int spot_checks_passed = 0;
  int spot_checks_failed = 0;
};

struct ChamberOptions {
  std::size_t cap = 1'000'000;
  int spot_checks = 5;
  std::uint64_t seed = 0x636861ULL;
  Tolerance tol;
};

struct ChamberDecomposition {
  std::vector<Chamber> chambers;
  double polytope_volume = 0.0;
  /// Volume of cells dropped because no generic interior point was found.
  double discarded_volume = 0.0;
  int planes = 0;

  double covered_volume() const;
};

/// Splits P by every arrangement plane. Cells carry their volume and the
/// constant normal count. Throws TooManyChambers above options.cap.
ChamberDecomposition chamber_decomposition(const Polytope& P, const ChamberOptions& options = {});

struct MaxNormals {
  int N = 0;
  /// Index into decomposition.chambers.
  int witness = -1;
  ChamberDecomposition decomposition;
};

MaxNormals max_normals(const Polytope& P, const ChamberOptions& options = {});

/// Volume-weighted mean of chamber counts.
double exact_average(const ChamberDecomposition& decomposition);
double exact_average(const Polytope& P, const ChamberOptions& options = {});

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

/// Rejection sampling from the bounding box. Samples come in blocks with
/// their own generator substream, so the result depends only on the seed.
MonteCarloEstimate monte_carlo_average(const Polytope& P, std::size_t n_samples, std::uint64_t seed,
                                       const Tolerance& tol = {});

struct Crossing {
  double t = 0.0;
  Vec3 point = Vec3::Zero();
  /// Real sheets crossed here (the plane can carry non-sheet parts).
  std::vector<SheetSource> sheets;
  int count_before = 0;
  int count_after = 0;
  MorseProfile profile_before;
  MorseProfile profile_after;
  /// Count change predicted from the sheets crossed: each contributes +2
  /// when entering its active regions and -2 when leaving.
  int predicted_delta = 0;
};

struct AuditResult {
  Vec3 from = Vec3::Zero();
  Vec3 to = Vec3::Zero();
  std::vector<Crossing> crossings;
};

/// Walks the segment, recording every arrangement-plane crossing with the
/// counts on both sides. Endpoints are perturbed to generic points; the
/// segment is perturbed again if two crossings are closer than the
/// tolerance or a crossing hits a sheet boundary. Throws NonTransversal if
/// that keeps happening.
AuditResult crossing_audit(const Polytope& P, const Vec3& from, const Vec3& to, Rng& rng,
                           const Tolerance& tol = {});

/// Checks one crossing: single-sheet crossings must change the count by
/// exactly ±2 with blue sheets moving (minima, saddles) and red sheets
/// (maxima, saddles) in 3-D, and (minima, maxima) in 2-D; crossings of
/// non-sheet plane parts must leave the profile unchanged.
bool crossing_obeys_type_rule(const Crossing& c, int dim);

}  // namespace polynormal
