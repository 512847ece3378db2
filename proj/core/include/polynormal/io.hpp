#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "polynormal/bifurcation.hpp"
#include "polynormal/normals.hpp"
#include "polynormal/polytope.hpp"
#include "polynormal/spherical.hpp"
#include "polynormal/tolerance.hpp"

namespace polynormal {

inline constexpr std::string_view kVersion = "0.3.0";

/// Reads ASCII OFF, or JSON with one of the keys "vertices" ([[x,y,z],...]),
/// "halfspaces" ([[nx,ny,nz,b],...], meaning <n, x> <= b) or "polygon"
/// ([[x,y],...]). The format is sniffed from the first non-blank character.
/// Throws ParseError (with the line number) or a ValidationError.
Polytope read_polytope(const std::string& path, const Tolerance& tol = {});
Polytope parse_polytope(std::string_view text, const Tolerance& tol = {});
Polytope parse_off(std::string_view text, const Tolerance& tol = {});

std::string read_file(const std::string& path);

/// OFF for 3-polytopes; polygons have no OFF form and are rejected.
void write_off(const Polytope& P, std::ostream& out);
/// {"vertices": ...} or {"polygon": ...}, in full precision.
nlohmann::json polytope_to_json(const Polytope& P);

/// OFF scene with one polygon per sheet plane, clipped to P.
void write_sheets_off(const Polytope& P, const std::vector<SheetPlane>& planes, std::ostream& out);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

nlohmann::json to_json(const Vec3& v, int dim = 3);
nlohmann::json to_json(const MorseProfile& p);
nlohmann::json to_json(const NormalRecord& r, int dim);
nlohmann::json to_json(const SheetPlane& s);
nlohmann::json to_json(const Crossing& c, int dim);
nlohmann::json to_json(const VertexClassification& c);

/// Report envelope: payload keys at the top level, provenance under
/// "envelope". nlohmann::json objects are key-sorted.
nlohmann::json make_report(const std::string& command, const std::string& input_digest,
                           const nlohmann::json& parameters, nlohmann::json payload);

}  // namespace polynormal
