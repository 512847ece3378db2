#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "polynormal/polytope.hpp"

namespace polynormal {

using Rng = std::mt19937_64;

/// Independent generator for item `index` of a run seeded with `seed`, so
/// results do not depend on processing order.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline Vec3 random_unit_vector(Rng& rng, int dim = 3) {
  std::normal_distribution<double> g;
  for (;;) {
    Vec3 v(g(rng), g(rng), dim == 3 ? g(rng) : 0.0);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

/// Uniformly random convex combination (flat Dirichlet weights).
inline Vec3 random_convex_combination(std::span<const Vec3> points, Rng& rng) {
  std::exponential_distribution<double> e;
  Vec3 sum = Vec3::Zero();
  double total = 0.0;
  for (const Vec3& p : points) {
    const double w = e(rng);
    sum += w * p;
    total += w;
  }
  return sum / total;
}

}  // namespace polynormal
