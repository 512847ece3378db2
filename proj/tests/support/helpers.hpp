#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "oracles.hpp"
#include "polynormal/explorer.hpp"
#include "polynormal/io.hpp"
#include "polynormal/errors.hpp"
#include "polynormal/random.hpp"
#include "polynormal/spherical.hpp"

namespace testing_support {

inline polynormal::Polytope load(const std::string& name) { return polynormal::read_polytope(oracle::fixture(name)); }

inline polynormal::Vec3 interior_point(const polynormal::Polytope& P, polynormal::Rng& rng) {
  return polynormal::random_convex_combination(P.vertices(), rng);
}

inline polynormal::Polytope tangent_polytope(int k, std::uint64_t seed) {
  polynormal::Rng rng = polynormal::substream(seed, 0);
  return polynormal::random_polytope(polynormal::ShapeFamily::TangentPlanes, {k, 0.1}, rng);
}

/// Three unit vectors inside a random open half-space; triangles with a side
/// or angle within 1e-4 of pi/2 are redrawn.
inline polynormal::SphericalTriangle random_hemispheric_triangle(polynormal::Rng& rng) {
  using polynormal::Vec3;
  for (;;) {
    const Vec3 u = polynormal::random_unit_vector(rng);
    Vec3 v[3];
    for (Vec3& x : v) {
      x = polynormal::random_unit_vector(rng);
      if (x.dot(u) < 0) x = -x;
    }
    try {
      const polynormal::SphericalTriangle t(v[0], v[1], v[2]);
      bool generic = true;
      for (int i = 0; i < 3; ++i)
        if (std::abs(t.side(i) - std::numbers::pi / 2) < 1e-4 || std::abs(t.angle(i) - std::numbers::pi / 2) < 1e-4)
          generic = false;
      if (generic) return t;
    } catch (const polynormal::DegenerateInput&) {
    }
  }
}

}  // namespace testing_support
