#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polynormal/polytope.hpp"
#include "polynormal/random.hpp"
#include "polynormal/tolerance.hpp"

namespace polynormal {

enum class ShapeFamily { TangentPlanes, VertexCloud, PerturbedTetra, PerturbedPrism };

ShapeFamily parse_family(const std::string& name);
std::string family_name(ShapeFamily family);

struct ShapeParams {
  /// Planes (tangent_planes) or points (vertex_cloud).
  int k = 8;
  /// Noise for the perturbed families: vertex noise for tetrahedra
  /// (circumradius 1), plane noise for prisms.
  double sigma = 0.1;
};

/// Draws polytopes of the family until one passes the genericity filter: no
/// dihedral or facet angle within 1e-4 of pi/2 and no edge shorter than
/// 1e-3 of the diameter. Throws RejectionLimit after 1000 draws.
Polytope random_polytope(ShapeFamily family, const ShapeParams& params, Rng& rng, const Tolerance& tol = {});

/// The fixtures the perturbed families start from.
Polytope regular_tetrahedron();
/// Right prism over an equilateral triangle with circumradius 1 and height 2.
Polytope triangular_prism();

struct ScanConfig {
  std::uint64_t seed = 1;
  int n_polytopes = 10;
  int facet_min = 5;
  int facet_max = 12;
  ShapeFamily family = ShapeFamily::TangentPlanes;
  double sigma = 0.1;
  std::size_t chamber_cap = 1'000'000;
  bool exact_average = false;
  std::size_t mc_samples = 10'000;
  Tolerance tol;

  /// Keys as in the member names, plus "family" by name and "tolerance".
  static ScanConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ScanEntry {
  int index = 0;
  nlohmann::json params;
  int vertices = 0;
  int facets = 0;
  bool simple = false;
  std::optional<int> N;
  std::optional<double> EN;
  bool EN_exact = false;
  std::optional<double> EN_stderr;
  /// Vertices with a nice figure (simple polytopes only).
  std::optional<int> nice_vertices;
  /// Vertices showing the acute pattern required for N < 10.
  std::optional<int> low_N_pattern_vertices;
  std::string error;
};

struct ScanReport {
  std::vector<ScanEntry> entries;
  std::optional<int> min_N;
  std::map<int, int> histogram;
  /// Simple polytopes with N < 10 confirmed at a hundredfold tighter
  /// tolerance, with vertices in full precision.
  std::vector<nlohmann::json> candidates;
  int failures = 0;
};

ScanReport scan(const ScanConfig& config);

nlohmann::json to_json(const ScanEntry& entry);
nlohmann::json summary_json(const ScanReport& report);

}  // namespace polynormal
