#include "polynormal/explorer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "polynormal/bifurcation.hpp"
#include "polynormal/errors.hpp"
#include "polynormal/spherical.hpp"

namespace polynormal {
namespace {

constexpr int kMaxDraws = 1000;
constexpr double kRightAngleGap = 1e-4;
constexpr double kShortEdge = 1e-3;

bool passes_filter(const Polytope& P) {
  for (const Face& e : P.faces(1))
    if ((P.vertex(e.vertex_ids[0]) - P.vertex(e.vertex_ids[1])).norm() < kShortEdge * P.diameter())
      return false;
  for (int e = 0; e < P.num_edges(); ++e)
    if (std::abs(dihedral_angle(P, e) - std::numbers::pi / 2) < kRightAngleGap) return false;
  for (int f = 0; f < P.num_facets(); ++f)
    for (int v : P.faces(2)[f].vertex_ids)
      if (std::abs(planar_angle(P, f, v) - std::numbers::pi / 2) < kRightAngleGap) return false;
  return true;
}

std::vector<Halfspace> prism_planes() {
  std::vector<Halfspace> h{{Vec3::UnitZ(), 1.0}, {-Vec3::UnitZ(), 1.0}};
  for (int k = 0; k < 3; ++k) {
    const double phi = std::numbers::pi / 3 + 2 * std::numbers::pi * k / 3;
    h.push_back({Vec3(std::cos(phi), std::sin(phi), 0.0), 0.5});
  }
  return h;
}

std::optional<Polytope> draw(ShapeFamily family, const ShapeParams& params, Rng& rng, const Tolerance& tol) {
  std::normal_distribution<double> gauss;
  try {
    switch (family) {
      case ShapeFamily::TangentPlanes: {
        std::vector<Halfspace> planes;
        for (int i = 0; i < params.k; ++i) planes.push_back({random_unit_vector(rng), 1.0});
        return polytope_from_halfspaces(planes, 3, tol);
      }
      case ShapeFamily::VertexCloud: {
        std::vector<Vec3> pts;
        for (int i = 0; i < params.k; ++i) pts.push_back(random_unit_vector(rng));
        return hull_from_points(pts, tol);
      }
      case ShapeFamily::PerturbedTetra: {
        std::vector<Vec3> pts = regular_tetrahedron().vertices();
        for (Vec3& p : pts) p += params.sigma * Vec3(gauss(rng), gauss(rng), gauss(rng));
        Polytope P = hull_from_points(pts, tol);
        if (P.num_vertices() != 4) return std::nullopt;
        return P;
      }
      case ShapeFamily::PerturbedPrism: {
        std::vector<Halfspace> planes = prism_planes();
        for (Halfspace& h : planes) {
          h.normal = (h.normal + params.sigma * Vec3(gauss(rng), gauss(rng), gauss(rng))).normalized();
          h.offset *= 1.0 + params.sigma * gauss(rng);
        }
        Polytope P = polytope_from_halfspaces(planes, 3, tol);
        if (P.num_vertices() != 6 || P.num_edges() != 9 || P.num_facets() != 5) return std::nullopt;
        return P;
      }
    }
  } catch (const ValidationError&) {
  }
  return std::nullopt;
}

}  // namespace

ShapeFamily parse_family(const std::string& name) {
  if (name == "tangent_planes") return ShapeFamily::TangentPlanes;
  if (name == "vertex_cloud") return ShapeFamily::VertexCloud;
  if (name == "perturbed_tetra") return ShapeFamily::PerturbedTetra;
  if (name == "perturbed_prism") return ShapeFamily::PerturbedPrism;
  throw ValidationError("unknown shape family '" + name + "'");
}

std::string family_name(ShapeFamily family) {
  switch (family) {
    case ShapeFamily::TangentPlanes: return "tangent_planes";
    case ShapeFamily::VertexCloud: return "vertex_cloud";
    case ShapeFamily::PerturbedTetra: return "perturbed_tetra";
    case ShapeFamily::PerturbedPrism: return "perturbed_prism";
  }
  return "unknown";
}

Polytope regular_tetrahedron() {
  const double s = 1.0 / std::sqrt(3.0);
  const std::vector<Vec3> pts{Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)};
  return hull_from_points(pts);
}

Polytope triangular_prism() {
  const auto planes = prism_planes();
  return polytope_from_halfspaces(planes);
}

Polytope random_polytope(ShapeFamily family, const ShapeParams& params, Rng& rng, const Tolerance& tol) {
  if ((family == ShapeFamily::TangentPlanes && params.k < 4) || (family == ShapeFamily::VertexCloud && params.k < 4))
    throw ValidationError("at least four planes or points are needed");
  for (int i = 0; i < kMaxDraws; ++i) {
    auto P = draw(family, params, rng, tol);
    if (P && passes_filter(*P)) return std::move(*P);
  }
  throw RejectionLimit("no generic " + family_name(family) + " polytope after 1000 draws");
}

ScanConfig ScanConfig::from_json(const nlohmann::json& j) {
  ScanConfig c;
  c.seed = j.value("seed", c.seed);
  c.n_polytopes = j.value("n_polytopes", c.n_polytopes);
  if (j.contains("facet_range")) {
    c.facet_min = j.at("facet_range").at(0).get<int>();
    c.facet_max = j.at("facet_range").at(1).get<int>();
  }
  c.facet_min = j.value("facet_min", c.facet_min);
  c.facet_max = j.value("facet_max", c.facet_max);
  if (j.contains("family")) c.family = parse_family(j.at("family").get<std::string>());
  c.sigma = j.value("sigma", c.sigma);
  c.chamber_cap = j.value("chamber_cap", c.chamber_cap);
  c.exact_average = j.value("exact_average", c.exact_average);
  c.mc_samples = j.value("mc_samples", c.mc_samples);
  if (j.contains("tolerance")) {
    const auto& t = j.at("tolerance");
    c.tol.geometry = t.value("geometry", c.tol.geometry);
    c.tol.relint = t.value("relint", c.tol.relint);
    c.tol.merge_angle = t.value("merge_angle", c.tol.merge_angle);
  }
  if (c.n_polytopes < 0 || c.facet_min > c.facet_max || c.facet_min < 4)
    throw ValidationError("scan config needs n_polytopes >= 0 and 4 <= facet_min <= facet_max");
  return c;
}

nlohmann::json ScanConfig::to_json() const {
  return {{"seed", seed},
          {"n_polytopes", n_polytopes},
          {"facet_range", {facet_min, facet_max}},
          {"family", family_name(family)},
          {"sigma", sigma},
          {"chamber_cap", chamber_cap},
          {"exact_average", exact_average},
          {"mc_samples", mc_samples},
          {"tolerance", {{"geometry", tol.geometry}, {"relint", tol.relint}, {"merge_angle", tol.merge_angle}}}};
}

namespace {

struct ScanItem {
  ScanEntry entry;
  std::optional<nlohmann::json> candidate;
};

ScanItem scan_one(const ScanConfig& config, int i) {
  Rng rng = substream(config.seed, static_cast<std::uint64_t>(i));
  ScanItem item;
  ScanEntry& entry = item.entry;
  entry.index = i;
  ShapeParams params;
  params.sigma = config.sigma;
  if (config.family == ShapeFamily::TangentPlanes || config.family == ShapeFamily::VertexCloud) {
    params.k = std::uniform_int_distribution<int>(config.facet_min, config.facet_max)(rng);
    entry.params = {{"family", family_name(config.family)}, {"k", params.k}};
  } else {
    entry.params = {{"family", family_name(config.family)}, {"sigma", params.sigma}};
  }
  try {
    const Polytope P = random_polytope(config.family, params, rng, config.tol);
    entry.vertices = P.num_vertices();
    entry.facets = P.num_facets();
    entry.simple = P.is_simple();

    ChamberOptions opts;
    opts.cap = config.chamber_cap;
    opts.tol = config.tol;
    const MaxNormals mx = max_normals(P, opts);
    entry.N = mx.N;
    if (config.exact_average) {
      entry.EN = exact_average(mx.decomposition);
      entry.EN_exact = true;
    } else {
      const auto est = monte_carlo_average(P, config.mc_samples, config.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)),
                                           config.tol);
      entry.EN = est.mean;
      entry.EN_stderr = est.stderr_;
    }
    if (entry.simple) {
      int nice = 0, pattern = 0;
      for (int v = 0; v < P.num_vertices(); ++v)
        if (classify_by_definition(vertex_figure(P, v)).verdict == Verdict::Nice) ++nice;
      for (const auto& c : acute_census(P, 0.0))
        if (c.compatible_with_low_N()) ++pattern;
      entry.nice_vertices = nice;
      entry.low_N_pattern_vertices = pattern;
    }
    if (entry.simple && mx.N < 10) {
      ChamberOptions tight = opts;
      tight.tol = config.tol.tightened(100);
      const int recount = max_normals(P, tight).N;
      if (recount < 10) {
        nlohmann::json cand{{"index", i}, {"N", recount}};
        for (const Vec3& v : P.vertices()) cand["vertices"].push_back({v.x(), v.y(), v.z()});
        item.candidate = std::move(cand);
      }
    }
  } catch (const Error& e) {
    entry.N.reset();
    entry.error = e.what();
  }
  return item;
}

}  // namespace

ScanReport scan(const ScanConfig& config) {
  std::vector<ScanItem> items(static_cast<std::size_t>(config.n_polytopes));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < config.n_polytopes; i = next++) items[i] = scan_one(config, i);
  };
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(1, config.n_polytopes));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  ScanReport report;
  for (ScanItem& item : items) {
    if (!item.entry.error.empty()) {
      ++report.failures;
    } else if (item.entry.N) {
      const int N = *item.entry.N;
      report.histogram[N] += 1;
      report.min_N = report.min_N ? std::min(*report.min_N, N) : N;
    }
    if (item.candidate) report.candidates.push_back(std::move(*item.candidate));
    report.entries.push_back(std::move(item.entry));
  }
  return report;
}

nlohmann::json to_json(const ScanEntry& e) {
  nlohmann::json j{{"index", e.index}, {"params", e.params}, {"vertices", e.vertices},
                   {"facets", e.facets}, {"simple", e.simple}};
  j["N"] = e.N ? nlohmann::json(*e.N) : nlohmann::json(nullptr);
  j["EN"] = e.EN ? nlohmann::json(*e.EN) : nlohmann::json(nullptr);
  j["EN_method"] = e.EN_exact ? "exact" : "monte_carlo";
  if (e.EN_stderr) j["EN_stderr"] = *e.EN_stderr;
  if (e.nice_vertices) j["nice_vertices"] = *e.nice_vertices;
  if (e.low_N_pattern_vertices) j["low_N_pattern_vertices"] = *e.low_N_pattern_vertices;
  if (!e.error.empty()) j["error"] = e.error;
  return j;
}

nlohmann::json summary_json(const ScanReport& r) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [n, count] : r.histogram) hist[std::to_string(n)] = count;
  return {{"summary",
           {{"polytopes", r.entries.size()},
            {"failures", r.failures},
            {"min_N", r.min_N ? nlohmann::json(*r.min_N) : nlohmann::json(nullptr)},
            {"histogram", hist},
            {"candidates", r.candidates}}}};
}

}  // namespace polynormal
