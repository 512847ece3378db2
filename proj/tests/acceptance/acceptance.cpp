// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "polynormal/bifurcation.hpp"
#include "polynormal/errors.hpp"
#include "polynormal/explorer.hpp"
#include "polynormal/normals.hpp"
#include "polynormal/spherical.hpp"

using namespace polynormal;
using testing_support::load;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (ok) detail << "first failure: " << why << "; ";
    ok = false;
  }
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<void(Outcome&)> body;
};

Vec3 uniform_interior(const Polytope& P, Rng& rng) {
  Vec3 lo = P.vertex(0), hi = P.vertex(0);
  for (const Vec3& v : P.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    Vec3 y(lo.x() + u(rng) * (hi.x() - lo.x()), lo.y() + u(rng) * (hi.y() - lo.y()),
           P.dim() == 3 ? lo.z() + u(rng) * (hi.z() - lo.z()) : 0.0);
    if (contains_interior(P, y, 1e-9 * P.diameter())) return y;
  }
}

// Uniform generic interior point with its normals.
std::pair<Vec3, std::vector<NormalRecord>> generic_sample(const Polytope& P, Rng& rng) {
  for (;;) {
    const Vec3 y = uniform_interior(P, rng);
    if (auto n = try_normals_from_point(P, y)) return {y, std::move(*n)};
  }
}

bool even_and_bounded(int n, const Polytope& P) { return n % 2 == 0 && n >= 8 && n <= P.num_faces(); }

Polytope random_triangle(Rng& rng, bool obtuse) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const std::vector<Vec2> pts{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    const double cross = (pts[1] - pts[0]).x() * (pts[2] - pts[0]).y() - (pts[1] - pts[0]).y() * (pts[2] - pts[0]).x();
    if (std::abs(cross) < 2e-3) continue;
    Polytope T = polygon_from_points(pts);
    double largest = 0.0, gap = kPi;
    for (int v = 0; v < 3; ++v) {
      largest = std::max(largest, polygon_angle(T, v));
      gap = std::min(gap, std::abs(polygon_angle(T, v) - kPi / 2));
    }
    if (gap < 1e-4 || (largest > kPi / 2) != obtuse) continue;
    return T;
  }
}

Polytope isosceles(double apex) {
  const std::vector<Vec2> pts{{0, 0}, {std::cos(apex / 2), std::sin(apex / 2)}, {std::cos(apex / 2), -std::sin(apex / 2)}};
  return polygon_from_points(pts);
}

// |MC - exact| <= 3 stderr, with a floor for estimates of exactly constant counts.
bool mc_agrees(const Polytope& P, double exact, std::uint64_t seed, Outcome& o, const std::string& what) {
  const auto mc = monte_carlo_average(P, 20000, seed);
  const bool ok = std::abs(mc.mean - exact) <= 3 * mc.stderr_ + 1e-12;
  if (!ok) {
    std::ostringstream s;
    s << what << ": MC " << mc.mean << " +- " << mc.stderr_ << " vs exact " << exact;
    o.fail(s.str());
  }
  return ok;
}

// 1. Regular tetrahedron center.
void regular_tetra_center(Outcome& o) {
  const auto P = load("regular_tetra.off");
  const auto normals = normals_from_point(P, Vec3::Zero());
  const MorseProfile p = profile_of(normals, 3);
  o.detail << "n=" << normals.size() << " profile=(" << p.minima << "," << p.saddles << "," << p.maxima << ")";
  if (normals.size() != 14 || !(p == MorseProfile{4, 6, 4})) o.fail("count");
}

// 2. Cube center.
void cube_center(Outcome& o) {
  const auto P = load("cube.off");
  Rng rng(2);
  const Vec3 y = perturb_to_generic(P, Vec3::Zero(), rng);
  const MorseProfile p = profile_of(normals_from_point(P, y), 3);
  const MorseProfile ref = oracle::ring_sampling_3d(P, y);
  o.detail << "n=" << p.total() << " profile=(" << p.minima << "," << p.saddles << "," << p.maxima << ")"
           << " oracle n=" << ref.total();
  if (p.total() != 26 || !(p == MorseProfile{6, 12, 8}) || !(p == ref)) o.fail("count");
}

// 3. Four-normal tetrahedron.
void four_normal_tetra(Outcome& o) {
  const auto P = load("four_normal_tetra.json");
  const ActiveRegions regions(P);
  const Vec3 C(-1.54, -2.02, 0.0);
  Rng rng(3);
  int best = 1 << 20;
  Vec3 best_y = Vec3::Zero();
  for (double radius : {1.0, 0.5, 0.2, 0.1, 0.05}) {
    for (int i = 0; i < 5000; ++i) {
      const Vec3 y = C + radius * std::cbrt(std::uniform_real_distribution<double>(0, 1)(rng)) * random_unit_vector(rng);
      if (!contains_interior(P, y, 1e-9 * P.diameter())) continue;
      const auto p = regions.profile(y);
      if (p && p->total() < best) best = p->total(), best_y = y;
    }
  }
  const auto confirmed = try_normals_from_point(P, best_y);
  o.detail << "local minimum " << best << " at (" << best_y.transpose() << ")";
  if (best != 4 || !confirmed || confirmed->size() != 4) o.fail("local search did not reach 4");

  int lowest = 1 << 20;
  for (int i = 0; i < 10000; ++i) lowest = std::min(lowest, static_cast<int>(generic_sample(P, rng).second.size()));
  o.detail << "; min over 10^4 random points " << lowest;
  if (lowest < 4) o.fail("random point with fewer than 4 normals");
}

// 4. Tetrahedra with N = 10, 12, 14.
void tetra_max(Outcome& o) {
  const std::pair<const char*, int> cases[] = {{"fig4_tetra.json", 10}, {"tetra12.json", 12}, {"regular_tetra.off", 14}};
  for (const auto& [name, expected] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const int N = max_normals(load(name)).N;
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.detail << name << " N=" << N << " (" << s << " s) ";
    if (N != expected) o.fail(std::string(name) + " N=" + std::to_string(N));
    if (s > 60.0) o.fail(std::string(name) + " exceeded 60 s");
  }
}

// 5. Floor of eight normals on random tangent-plane polytopes.
void eight_normal_floor(Outcome& o) {
  int min_n = 1 << 20, min_N = 1 << 20;
  for (int i = 0; i < 100; ++i) {
    Rng rng = substream(5, i);
    const int k = std::uniform_int_distribution<int>(4, 12)(rng);
    const Polytope P = random_polytope(ShapeFamily::TangentPlanes, {k, 0.1}, rng);
    const Vec3 y = perturb_to_generic(P, chebyshev_center(P).center, rng);
    const int n = static_cast<int>(normals_from_point(P, y).size());
    const int N = max_normals(P).N;
    min_n = std::min(min_n, n);
    min_N = std::min(min_N, N);
    if (!even_and_bounded(n, P) || !even_and_bounded(N, P) || n > N)
      o.fail("polytope " + std::to_string(i) + ": n=" + std::to_string(n) + " N=" + std::to_string(N));
  }
  o.detail << "min n at center " << min_n << ", min N " << min_N;
}

// 6. Euler characteristic and parity.
void euler_parity(Outcome& o) {
  const ShapeFamily families[] = {ShapeFamily::TangentPlanes, ShapeFamily::VertexCloud, ShapeFamily::PerturbedTetra,
                                  ShapeFamily::PerturbedPrism};
  int violations = 0, pairs = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng = substream(6, i);
    const int k = std::uniform_int_distribution<int>(4, 12)(rng);
    const Polytope P = random_polytope(families[i % 4], {k, 0.2}, rng);
    for (int j = 0; j < 100; ++j, ++pairs) {
      const MorseProfile p = profile_of(generic_sample(P, rng).second, 3);
      if (p.minima - p.saddles + p.maxima != 2 || p.total() != 2 + 2 * p.saddles) ++violations;
    }
  }
  o.detail << pairs << " pairs, " << violations << " violations";
  if (violations > 0) o.fail("invariant violated");
}

// 7. Crossing audit.
void crossing_audit_rule(Outcome& o) {
  const char* names[] = {"four_normal_tetra.json", "fig4_tetra.json", "tetra12.json", "prism.off",
                         "tetra_halfspaces.json",  "obtuse_triangle.json"};
  std::vector<Polytope> fixtures;
  for (const char* n : names) fixtures.push_back(load(n));
  Rng rng(7);
  int segments = 0, crossings = 0, single = 0, violations = 0, retried = 0;
  while (segments < 1000) {
    const Polytope& P = fixtures[segments % fixtures.size()];
    const Vec3 a = uniform_interior(P, rng), b = uniform_interior(P, rng);
    AuditResult r;
    try {
      r = crossing_audit(P, a, b, rng);
    } catch (const NonTransversal&) {
      ++retried;
      continue;
    }
    ++segments;
    for (const Crossing& c : r.crossings) {
      ++crossings;
      if (c.sheets.size() == 1) ++single;
      const bool delta_ok = c.sheets.size() != 1 || std::abs(c.count_after - c.count_before) == 2;
      if (!crossing_obeys_type_rule(c, P.dim()) || !delta_ok) ++violations;
    }
  }
  o.detail << segments << " segments, " << crossings << " crossings (" << single << " single-sheet), " << violations
           << " violations, " << retried << " non-transversal redraws";
  if (violations > 0) o.fail("type rule violated");
  if (retried > 10) o.fail("too many non-transversal segments");
}

// 8. Lemma vs definition, and invariance under duality.
void spherical_cross_oracle(Outcome& o) {
  Rng rng(8);
  int compared = 0, borderline = 0, disagreements = 0, dual_mismatch = 0, skew = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto t = testing_support::random_hemispheric_triangle(rng);
    const auto dual = polar_dual_triangle(t);
    const auto def = classify_by_definition(t);
    const auto def_dual = classify_by_definition(dual);
    try {
      const auto lem = classify_by_lemma(t);
      const auto lem_dual = classify_by_lemma(dual);
      if (def.borderline || def_dual.borderline) {
        ++borderline;
        continue;
      }
      ++compared;
      skew += def.verdict == Verdict::Skew;
      if (lem.verdict != def.verdict || lem_dual.verdict != def_dual.verdict) ++disagreements;
      if (def.verdict != def_dual.verdict || lem.verdict != lem_dual.verdict) ++dual_mismatch;
    } catch (const Borderline&) {
      ++borderline;
    }
  }
  o.detail << compared << " compared (" << skew << " skew), " << borderline << " borderline excluded, "
           << disagreements << " disagreements, " << dual_mismatch << " dual mismatches";
  if (disagreements > 0) o.fail("lemma and definition disagree");
  if (dual_mismatch > 0) o.fail("skewness not preserved by duality");
}

// 9. Ten-normal certificates.
void certificates(Outcome& o) {
  int failures = 0, tetra = 0, prisms = 0, min_N = 1 << 20;
  for (int i = 0; i < 2000; ++i) {
    Rng rng = substream(9, i);
    Polytope P = [&] {
      if (i >= 1000) return random_polytope(ShapeFamily::PerturbedPrism, {6, 0.15}, rng);
      if (i % 2 == 0) return random_polytope(ShapeFamily::VertexCloud, {4, 0.0}, rng);
      return random_polytope(ShapeFamily::PerturbedTetra, {4, 0.3}, rng);
    }();
    (P.num_vertices() == 4 ? tetra : prisms) += 1;
    const auto cert = ten_normals_certificate(P);
    const int N = max_normals(P).N;
    min_N = std::min(min_N, N);
    if (!cert || N < 10) {
      ++failures;
      o.fail("polytope " + std::to_string(i) + (cert ? "" : " has no nice vertex") + " N=" + std::to_string(N));
    }
  }
  o.detail << tetra << " tetrahedra, " << prisms << " prisms, " << failures << " failures, min N " << min_N;
  if (tetra != 1000 || prisms != 1000) o.fail("wrong family sizes");
}

// 10. Averages.
void averages(Outcome& o) {
  Rng rng(10);
  double worst_nonobtuse = 0.0, worst_oracle = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Polytope T = random_triangle(rng, false);
    const double en = exact_average(T);
    worst_nonobtuse = std::max(worst_nonobtuse, std::abs(en - 6.0));
    mc_agrees(T, en, 100 + i, o, "non-obtuse triangle " + std::to_string(i));
  }
  if (worst_nonobtuse > 1e-9) o.fail("non-obtuse triangle average differs from 6");
  for (int i = 0; i < 20; ++i) {
    const Polytope T = random_triangle(rng, true);
    const double en = exact_average(T);
    worst_oracle = std::max(worst_oracle, std::abs(en - oracle::triangle_average(T)));
    if (!(en > 4.0 && en < 6.0)) o.fail("obtuse triangle average " + std::to_string(en));
    mc_agrees(T, en, 200 + i, o, "obtuse triangle " + std::to_string(i));
  }
  if (worst_oracle > 1e-9) o.fail("obtuse triangle average differs from the clipping oracle");
  double prev = 6.0;
  o.detail << "apex sweep:";
  for (double apex : {2.0, 2.6, 3.0}) {
    const Polytope T = isosceles(apex);
    const double en = exact_average(T);
    o.detail << " " << en;
    if (!(en < prev) || std::abs(en - oracle::triangle_average(T)) > 1e-9) o.fail("apex sweep at " + std::to_string(apex));
    mc_agrees(T, en, 300 + static_cast<int>(apex * 10), o, "isosceles apex " + std::to_string(apex));
    prev = en;
  }
  const Polytope reg = load("regular_tetra.off");
  const double reg_en = exact_average(reg);
  if (std::abs(reg_en - 14.0) > 1e-9) o.fail("regular tetrahedron average " + std::to_string(reg_en));
  mc_agrees(reg, reg_en, 400, o, "regular tetrahedron");
  double lo = 14.0, hi = 4.0;
  for (int i = 0; i < 50; ++i) {
    Rng r = substream(10, i);
    const Polytope P = random_polytope(i % 2 ? ShapeFamily::PerturbedTetra : ShapeFamily::VertexCloud, {4, 0.3}, r);
    const double en = exact_average(P);
    lo = std::min(lo, en);
    hi = std::max(hi, en);
    if (!(en > 4.0 && en <= 14.0 + 1e-9)) o.fail("tetrahedron average " + std::to_string(en));
    mc_agrees(P, en, 500 + i, o, "tetrahedron " + std::to_string(i));
  }
  o.detail << "; non-obtuse max |EN-6| " << worst_nonobtuse << ", obtuse max |EN-oracle| " << worst_oracle
           << ", tetrahedra EN in [" << lo << ", " << hi << "]";
}

// 11. Volume conservation and spot checks.
void conservation(Outcome& o) {
  const char* names[] = {"regular_tetra.off", "cube.off",       "prism.off",          "fig4_tetra.json",
                         "tetra12.json",      "four_normal_tetra.json", "tetra_halfspaces.json",
                         "equilateral_triangle.json", "obtuse_triangle.json"};
  double worst = 0.0;
  int chambers = 0, failed = 0;
  for (const char* name : names) {
    const Polytope P = load(name);
    const auto d = chamber_decomposition(P);
    const double rel = std::abs(d.covered_volume() - P.volume()) / P.volume();
    worst = std::max(worst, rel);
    if (rel > 1e-6) o.fail(std::string(name) + " volume mismatch");
    for (const Chamber& c : d.chambers) {
      ++chambers;
      if (c.spot_checks_failed != 0 || c.spot_checks_passed != 5) {
        ++failed;
        o.fail(std::string(name) + " chamber spot check");
      }
    }
  }
  o.detail << chambers << " chambers over " << std::size(names) << " fixtures, worst relative volume error " << worst
           << ", " << failed << " spot-check failures";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "regular tetrahedron center has 14 normals (4, 6, 4)", 1.0, regular_tetra_center},
      {2, "cube center has 26 normals (6, 12, 8)", 1.0, cube_center},
      {3, "four-normal tetrahedron: minimum 4 found, never below 4", 30.0, four_normal_tetra},
      {4, "tetrahedra with N = 10, 12, 14", 180.0, tetra_max},
      {5, "tangent-plane polytopes: n and N even, >= 8, <= #faces", 300.0, eight_normal_floor},
      {6, "m - s + M = 2 and n = 2 + 2s on 10^4 pairs", 120.0, euler_parity},
      {7, "crossing audit obeys the count and type rule", 120.0, crossing_audit_rule},
      {8, "lemma and definition classifiers agree; duality preserves skewness", 120.0, spherical_cross_oracle},
      {9, "ten-normal certificates on tetrahedra and prisms", 600.0, certificates},
      {10, "average number of normals", 300.0, averages},
      {11, "chamber volumes sum to Vol(P); spot checks pass", 600.0, conservation},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > c.time_limit_s) o.fail("time limit " + std::to_string(c.time_limit_s) + " s exceeded");
    if (!o.ok) ++failed;
    std::printf("%s criterion %d: %s [%.2f s / %.0f s] %s\n", o.ok ? "PASS" : "FAIL", c.id, c.title, s,
                c.time_limit_s, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
