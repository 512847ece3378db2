#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "polynormal/bifurcation.hpp"
#include "polynormal/errors.hpp"

using namespace polynormal;
using testing_support::interior_point;
using testing_support::load;

namespace {

std::pair<int, int> distinct_by_color(const std::vector<SheetPlane>& planes) {
  int blue = 0, red = 0;
  for (const SheetPlane& s : planes) (s.color == SheetColor::Blue ? blue : red) += 1;
  return {blue, red};
}

}  // namespace

TEST(Sheets, RawIncidenceCounts) {
  for (const char* name : {"cube.off", "prism.off", "regular_tetra.off", "fig4_tetra.json"}) {
    const auto P = load(name);
    const auto sources = sheet_sources(P);
    const auto blue = std::count_if(sources.begin(), sources.end(),
                                    [](const SheetSource& s) { return s.color == SheetColor::Blue; });
    EXPECT_EQ(blue, 2 * P.num_edges()) << name;
    EXPECT_EQ(static_cast<long>(sources.size()) - blue, 2 * P.num_edges()) << name;
    const oracle::PlaneCounts bf = oracle::brute_force_sheets(P);
    EXPECT_EQ(bf.raw_blue, blue) << name;
  }
  const auto tri = load("obtuse_triangle.json");
  EXPECT_EQ(sheet_sources(tri).size(), 6u);
}

TEST(Sheets, DistinctPlanesMatchBruteForce) {
  std::vector<Polytope> polytopes{load("cube.off"), load("prism.off"), load("regular_tetra.off"),
                                  load("fig4_tetra.json"), load("tetra12.json")};
  for (std::uint64_t s = 0; s < 5; ++s) polytopes.push_back(testing_support::tangent_polytope(6 + 2 * s, s));
  for (const Polytope& P : polytopes) {
    const oracle::PlaneCounts bf = oracle::brute_force_sheets(P);
    const auto [blue, red] = distinct_by_color(sheet_planes(P));
    EXPECT_EQ(blue, bf.distinct_blue);
    EXPECT_EQ(red, bf.distinct_red);
    EXPECT_LE(arrangement_planes(P).size(), static_cast<std::size_t>(blue + red));
  }
}

TEST(Sheets, CubeSheetsLieOnFacetPlanes) {
  const auto cube = load("cube.off");
  const auto [blue, red] = distinct_by_color(sheet_planes(cube));
  EXPECT_EQ(blue, 6);
  EXPECT_EQ(red, 6);
  EXPECT_EQ(arrangement_planes(cube).size(), 6u);
}

TEST(Sheets, SourcesAreIncidences) {
  const auto P = load("prism.off");
  for (const SheetPlane& s : sheet_planes(P)) {
    ASSERT_FALSE(s.sources.empty());
    for (const SheetSource& src : s.sources) {
      EXPECT_EQ(src.owner.dim, src.color == SheetColor::Blue ? 2 : 1);
      EXPECT_EQ(src.attached.dim, src.owner.dim - 1);
      // The attached face lies in the plane.
      for (int v : P.face(src.attached).vertex_ids)
        EXPECT_NEAR(s.normal.dot(P.vertex(v)) - s.offset, 0.0, 1e-9);
    }
  }
}

TEST(Chambers, SingleChamberPolytopes) {
  const auto cube = chamber_decomposition(load("cube.off"));
  ASSERT_EQ(cube.chambers.size(), 1u);
  EXPECT_EQ(cube.chambers[0].count, 26);
  const auto tet = chamber_decomposition(load("regular_tetra.off"));
  ASSERT_EQ(tet.chambers.size(), 1u);
  EXPECT_EQ(tet.chambers[0].count, 14);
  EXPECT_NEAR(exact_average(tet), 14.0, 1e-12);
}

TEST(Chambers, VolumeConservationAndSpotChecks) {
  for (const char* name : {"four_normal_tetra.json", "fig4_tetra.json", "prism.off", "obtuse_triangle.json"}) {
    const auto P = load(name);
    const auto d = chamber_decomposition(P);
    EXPECT_NEAR(d.covered_volume() + d.discarded_volume, P.volume(), 1e-9 * P.volume()) << name;
    EXPECT_LT(d.discarded_volume, 1e-9 * P.volume()) << name;
    for (const Chamber& c : d.chambers) {
      EXPECT_EQ(c.spot_checks_failed, 0) << name;
      EXPECT_EQ(c.profile.total(), c.count);
      EXPECT_GT(c.volume, 0.0);
    }
  }
}

TEST(Chambers, CountsMatchRingOracle) {
  const auto P = load("four_normal_tetra.json");
  const auto d = chamber_decomposition(P);
  int checked = 0;
  for (const Chamber& c : d.chambers) {
    if (c.volume < 1e-6 * P.volume()) continue;
    EXPECT_EQ(oracle::ring_sampling_3d(P, c.rep_point).total(), c.count);
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Chambers, CapIsEnforced) {
  ChamberOptions o;
  o.cap = 3;
  EXPECT_THROW(chamber_decomposition(load("four_normal_tetra.json"), o), TooManyChambers);
}

TEST(Chambers, Deterministic) {
  const auto P = load("fig4_tetra.json");
  const auto a = chamber_decomposition(P);
  const auto b = chamber_decomposition(P);
  ASSERT_EQ(a.chambers.size(), b.chambers.size());
  for (std::size_t i = 0; i < a.chambers.size(); ++i) {
    EXPECT_EQ(a.chambers[i].count, b.chambers[i].count);
    EXPECT_EQ(a.chambers[i].rep_point, b.chambers[i].rep_point);
  }
}

TEST(MaxNormals, Tetrahedra) {
  EXPECT_EQ(max_normals(load("regular_tetra.off")).N, 14);
  EXPECT_EQ(max_normals(load("fig4_tetra.json")).N, 10);
  EXPECT_EQ(max_normals(load("tetra12.json")).N, 12);
  const auto m = max_normals(load("four_normal_tetra.json"));
  EXPECT_EQ(m.N, 14);
  EXPECT_EQ(m.decomposition.chambers[m.witness].count, 14);
}

TEST(MaxNormals, CubeAndPrism) {
  EXPECT_EQ(max_normals(load("cube.off")).N, 26);
  EXPECT_EQ(max_normals(load("prism.off")).N, 20);
}

TEST(Averages, Triangles) {
  EXPECT_NEAR(exact_average(load("equilateral_triangle.json")), 6.0, 1e-9);
  const double obtuse = exact_average(load("obtuse_triangle.json"));
  EXPECT_GT(obtuse, 4.0);
  EXPECT_LT(obtuse, 6.0);
}

TEST(Averages, MonteCarloAgreesWithExact) {
  const auto P = load("four_normal_tetra.json");
  const double exact = exact_average(P);
  const auto mc = monte_carlo_average(P, 20000, 99);
  EXPECT_EQ(mc.samples, 20000u);
  EXPECT_GT(mc.stderr_, 0.0);
  EXPECT_LT(std::abs(mc.mean - exact), 4 * mc.stderr_);
  const auto again = monte_carlo_average(P, 20000, 99);
  EXPECT_EQ(mc.mean, again.mean);
}

TEST(Audit, CrossingsObeyTypeRule) {
  const auto P = load("four_normal_tetra.json");
  Rng rng(41);
  int crossings = 0;
  for (int i = 0; i < 20; ++i) {
    const Vec3 a = interior_point(P, rng), b = interior_point(P, rng);
    const AuditResult r = crossing_audit(P, a, b, rng);
    for (const Crossing& c : r.crossings) {
      ++crossings;
      EXPECT_TRUE(crossing_obeys_type_rule(c, 3));
      EXPECT_EQ(c.count_after - c.count_before, c.predicted_delta);
      EXPECT_GT(c.t, 0.0);
      EXPECT_LT(c.t, 1.0);
    }
    for (std::size_t k = 1; k < r.crossings.size(); ++k) {
      EXPECT_LT(r.crossings[k - 1].t, r.crossings[k].t);
      EXPECT_EQ(r.crossings[k - 1].count_after, r.crossings[k].count_before);
    }
  }
  EXPECT_GT(crossings, 20);
}

TEST(Audit, PolygonCrossings) {
  const auto tri = load("obtuse_triangle.json");
  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const AuditResult r = crossing_audit(tri, interior_point(tri, rng), interior_point(tri, rng), rng);
    for (const Crossing& c : r.crossings) EXPECT_TRUE(crossing_obeys_type_rule(c, 2));
  }
}

TEST(Audit, TypeRuleOnSyntheticCrossings) {
  Crossing c;
  c.sheets = {{SheetColor::Blue, {2, 0}, {1, 0}}};
  c.profile_before = {4, 6, 4};
  c.count_before = 14;
  c.profile_after = {3, 5, 4};
  c.count_after = 12;
  c.predicted_delta = -2;
  EXPECT_TRUE(crossing_obeys_type_rule(c, 3));
  c.profile_after = {4, 5, 3};
  EXPECT_FALSE(crossing_obeys_type_rule(c, 3));
  c.sheets[0].color = SheetColor::Red;
  c.sheets[0].owner = {1, 0};
  c.sheets[0].attached = {0, 0};
  EXPECT_TRUE(crossing_obeys_type_rule(c, 3));
  c.profile_after = {4, 6, 4};
  c.count_after = 14;
  EXPECT_FALSE(crossing_obeys_type_rule(c, 3));
}

TEST(Averages, CubeIsConstant) {
  const auto mc = monte_carlo_average(load("cube.off"), 20000, 3);
  EXPECT_EQ(mc.mean, 26.0);
  EXPECT_EQ(mc.stderr_, 0.0);
}

TEST(Audit, CubeSegmentHasNoCrossings) {
  Rng rng(43);
  const auto r = crossing_audit(load("cube.off"), Vec3::Zero(), Vec3(0.9, 0, 0), rng);
  EXPECT_TRUE(r.crossings.empty());
}
