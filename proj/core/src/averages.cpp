#include <cmath>

#include "polynormal/bifurcation.hpp"
#include "polynormal/errors.hpp"

namespace polynormal {

MonteCarloEstimate monte_carlo_average(const Polytope& P, std::size_t n_samples, std::uint64_t seed,
                                       const Tolerance& tol) {
  constexpr std::size_t kBlock = 1024;
  const ActiveRegions regions(P, tol);
  Vec3 lo = P.vertex(0), hi = P.vertex(0);
  for (const Vec3& v : P.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }

  double sum = 0.0, sum_sq = 0.0;
  std::size_t drawn = 0;
  for (std::uint64_t block = 0; drawn < n_samples; ++block) {
    Rng rng = substream(seed, block);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t in_block = std::min(kBlock, n_samples - drawn);
    for (std::size_t k = 0; k < in_block; ++k) {
      std::optional<MorseProfile> profile;
      for (int rejects = 0; !profile; ++rejects) {
        if (rejects > 1'000'000) throw InvariantViolation("rejection sampler cannot hit the polytope");
        Vec3 y(lo.x() + unit(rng) * (hi.x() - lo.x()), lo.y() + unit(rng) * (hi.y() - lo.y()),
               P.dim() == 3 ? lo.z() + unit(rng) * (hi.z() - lo.z()) : 0.0);
        if (!contains_interior(P, y, tol.relint * P.diameter())) continue;
        profile = regions.profile(y);
        if (!profile) profile = regions.profile(perturb_to_generic(P, y, rng, tol));
      }
      const double n = profile->total();
      sum += n;
      sum_sq += n * n;
    }
    drawn += in_block;
  }
  MonteCarloEstimate est;
  est.samples = drawn;
  est.mean = sum / static_cast<double>(drawn);
  const double var = std::max(0.0, sum_sq / static_cast<double>(drawn) - est.mean * est.mean);
  est.stderr_ = drawn > 1 ? std::sqrt(var * drawn / (drawn - 1.0) / drawn) : 0.0;
  return est;
}

}  // namespace polynormal
