#include <string>

#include <benchmark/benchmark.h>

#include "polynormal/bifurcation.hpp"
#include "polynormal/explorer.hpp"
#include "polynormal/io.hpp"
#include "polynormal/normals.hpp"
#include "polynormal/spherical.hpp"

using namespace polynormal;

namespace {

Polytope fixture(const char* name) { return read_polytope(std::string(POLYNORMAL_FIXTURE_DIR) + "/" + name); }

Polytope tangent(int k) {
  Rng rng = substream(42, static_cast<std::uint64_t>(k));
  return random_polytope(ShapeFamily::TangentPlanes, {k, 0.1}, rng);
}

void BM_NormalsFromPoint(benchmark::State& state) {
  const Polytope P = tangent(static_cast<int>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) {
    const Vec3 y = random_convex_combination(P.vertices(), rng);
    benchmark::DoNotOptimize(try_normals_from_point(P, y));
  }
}
BENCHMARK(BM_NormalsFromPoint)->Arg(6)->Arg(12)->Arg(20);

void BM_ActiveRegionsProfile(benchmark::State& state) {
  const Polytope P = tangent(static_cast<int>(state.range(0)));
  const ActiveRegions regions(P);
  Rng rng(1);
  for (auto _ : state) {
    const Vec3 y = random_convex_combination(P.vertices(), rng);
    benchmark::DoNotOptimize(regions.profile(y));
  }
}
BENCHMARK(BM_ActiveRegionsProfile)->Arg(6)->Arg(12)->Arg(20);

void BM_ChamberDecomposition(benchmark::State& state) {
  const Polytope P = tangent(static_cast<int>(state.range(0)));
  std::size_t chambers = 0;
  for (auto _ : state) {
    const auto d = chamber_decomposition(P);
    chambers = d.chambers.size();
    benchmark::DoNotOptimize(chambers);
  }
  state.counters["chambers"] = static_cast<double>(chambers);
}
BENCHMARK(BM_ChamberDecomposition)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MaxNormalsTetrahedron(benchmark::State& state) {
  const Polytope P = fixture("four_normal_tetra.json");
  for (auto _ : state) benchmark::DoNotOptimize(max_normals(P).N);
}
BENCHMARK(BM_MaxNormalsTetrahedron)->Unit(benchmark::kMillisecond);

void BM_MonteCarloAverage(benchmark::State& state) {
  const Polytope P = fixture("four_normal_tetra.json");
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_average(P, 10000, 7).mean);
}
BENCHMARK(BM_MonteCarloAverage)->Unit(benchmark::kMillisecond);

void BM_ClassifyByDefinition(benchmark::State& state) {
  const Polytope P = fixture("four_normal_tetra.json");
  const SphericalTriangle t = vertex_figure(P, 0);
  for (auto _ : state) benchmark::DoNotOptimize(classify_by_definition(t, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ClassifyByDefinition)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_ClassifyByLemma(benchmark::State& state) {
  const Polytope P = fixture("four_normal_tetra.json");
  const SphericalTriangle t = vertex_figure(P, 0);
  for (auto _ : state) benchmark::DoNotOptimize(classify_by_lemma(t).verdict);
}
BENCHMARK(BM_ClassifyByLemma);

}  // namespace

BENCHMARK_MAIN();
