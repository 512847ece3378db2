#include "polynormal/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "polynormal/errors.hpp"

namespace polynormal {
namespace {

using nlohmann::json;

struct Line {
  int number;
  std::vector<std::string> tokens;
};

// Non-empty lines with '#' comments stripped.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int n = 1; std::getline(in, raw); ++n) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{n, {}};
    for (std::string tok; ls >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

double to_double(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'", line);
  }
  if (used != s.size() || !std::isfinite(v)) throw ParseError("expected a number, got '" + s + "'", line);
  return v;
}

long to_int(const std::string& s, int line) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + s + "'", line);
  }
  if (used != s.size()) throw ParseError("expected an integer, got '" + s + "'", line);
  return v;
}

int line_of_offset(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

Polytope from_json(const json& j, const Tolerance& tol) {
  try {
    if (j.contains("vertices")) {
      std::vector<Vec3> pts;
      for (const auto& p : j.at("vertices")) {
        if (p.size() != 3) throw ParseError("each vertex needs three coordinates", 0);
        pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
      }
      return hull_from_points(pts, tol);
    }
    if (j.contains("halfspaces")) {
      std::vector<Halfspace> hs;
      for (const auto& h : j.at("halfspaces")) {
        if (h.size() != 4) throw ParseError("each half-space needs [nx, ny, nz, b]", 0);
        hs.push_back({Vec3(h.at(0).get<double>(), h.at(1).get<double>(), h.at(2).get<double>()),
                      h.at(3).get<double>()});
      }
      return polytope_from_halfspaces(hs, 3, tol);
    }
    if (j.contains("polygon")) {
      std::vector<Vec2> pts;
      for (const auto& p : j.at("polygon")) {
        if (p.size() != 2) throw ParseError("each polygon vertex needs two coordinates", 0);
        pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      }
      return polygon_from_points(pts, tol);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed polytope JSON: ") + e.what(), 0);
  }
  throw ParseError("JSON input needs a \"vertices\", \"halfspaces\" or \"polygon\" key", 1);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Polytope read_polytope(const std::string& path, const Tolerance& tol) {
  return parse_polytope(read_file(path), tol);
}

Polytope parse_polytope(std::string_view text, const Tolerance& tol) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty input", 1);
  if (text[first] != '{') return parse_off(text, tol);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  return from_json(j, tol);
}

Polytope parse_off(std::string_view text, const Tolerance& tol) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError("empty input", 1);
  std::size_t li = 0;
  std::vector<std::string> head = lines[0].tokens;
  if (head[0] != "OFF") throw ParseError("missing OFF header", lines[0].number);
  head.erase(head.begin());
  int counts_line = lines[0].number;
  if (head.empty()) {
    if (++li >= lines.size()) throw ParseError("missing vertex and face counts", lines[0].number + 1);
    head = lines[li].tokens;
    counts_line = lines[li].number;
  }
  if (head.size() < 2) throw ParseError("expected vertex and face counts", counts_line);
  const long nv = to_int(head[0], counts_line);
  const long nf = to_int(head[1], counts_line);
  if (nv < 4 || nf < 4) throw ParseError("a 3-polytope needs at least four vertices and faces", counts_line);

  std::vector<Vec3> pts;
  for (long i = 0; i < nv; ++i) {
    if (++li >= lines.size()) throw ParseError("unexpected end of file in vertex list", lines.back().number + 1);
    const Line& l = lines[li];
    if (l.tokens.size() < 3) throw ParseError("vertex needs three coordinates", l.number);
    pts.emplace_back(to_double(l.tokens[0], l.number), to_double(l.tokens[1], l.number),
                     to_double(l.tokens[2], l.number));
  }
  std::vector<std::pair<int, std::vector<int>>> faces;
  for (long i = 0; i < nf; ++i) {
    if (++li >= lines.size()) throw ParseError("unexpected end of file in face list", lines.back().number + 1);
    const Line& l = lines[li];
    const long k = to_int(l.tokens[0], l.number);
    if (k < 3 || static_cast<long>(l.tokens.size()) < k + 1)
      throw ParseError("face needs a vertex count of at least 3 followed by that many indices", l.number);
    std::vector<int> ids;
    for (long t = 1; t <= k; ++t) {
      const long id = to_int(l.tokens[t], l.number);
      if (id < 0 || id >= nv)
        throw ParseError("face index " + std::to_string(id) + " out of range [0, " + std::to_string(nv) + ")",
                         l.number);
      ids.push_back(static_cast<int>(id));
    }
    faces.emplace_back(l.number, std::move(ids));
  }

  Polytope P = hull_from_points(pts, tol);
  const double eps = 1e3 * tol.geometry * P.diameter();
  for (const auto& [line, ids] : faces) {
    const bool on_facet = std::any_of(P.facets().begin(), P.facets().end(), [&](const Halfspace& h) {
      return std::all_of(ids.begin(), ids.end(),
                         [&](int id) { return std::abs(h.signed_distance(pts[id])) <= eps; });
    });
    if (!on_facet) throw ValidationError("line " + std::to_string(line) + ": face is not on the convex hull boundary");
  }
  return P;
}

void write_off(const Polytope& P, std::ostream& out) {
  if (P.dim() != 3) throw ValidationError("OFF output needs a 3-polytope");
  out << std::setprecision(17) << "OFF\n" << P.num_vertices() << ' ' << P.num_facets() << ' ' << P.num_edges() << '\n';
  for (const Vec3& v : P.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const Face& f : P.faces(2)) {
    out << f.vertex_ids.size();
    for (int id : f.vertex_ids) out << ' ' << id;
    out << '\n';
  }
}

json polytope_to_json(const Polytope& P) {
  json pts = json::array();
  if (P.dim() == 2) {
    for (const Vec3& v : P.vertices()) pts.push_back({v.x(), v.y()});
    return {{"polygon", pts}};
  }
  for (const Vec3& v : P.vertices()) pts.push_back({v.x(), v.y(), v.z()});
  return {{"vertices", pts}};
}

void write_sheets_off(const Polytope& P, const std::vector<SheetPlane>& planes, std::ostream& out) {
  if (P.dim() != 3) throw ValidationError("sheet scenes need a 3-polytope");
  const double eps = 10.0 * 1e-9 * P.diameter();
  std::vector<Vec3> verts;
  std::vector<std::vector<int>> polys;
  for (const SheetPlane& s : planes) {
    std::vector<Vec3> pts;
    auto add = [&](const Vec3& p) {
      for (const Vec3& q : pts)
        if ((q - p).norm() <= eps) return;
      pts.push_back(p);
    };
    for (const Vec3& v : P.vertices())
      if (std::abs(s.normal.dot(v) - s.offset) <= eps) add(v);
    for (const Face& e : P.faces(1)) {
      const Vec3& a = P.vertex(e.vertex_ids[0]);
      const Vec3& b = P.vertex(e.vertex_ids[1]);
      const double da = s.normal.dot(a) - s.offset, db = s.normal.dot(b) - s.offset;
      if ((da > eps && db < -eps) || (da < -eps && db > eps)) add(a + da / (da - db) * (b - a));
    }
    if (pts.size() < 3) continue;
    Vec3 c = Vec3::Zero();
    for (const Vec3& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    const Vec3 e1 = (std::abs(s.normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(s.normal).normalized();
    const Vec3 e2 = s.normal.cross(e1);
    std::sort(pts.begin(), pts.end(), [&](const Vec3& a, const Vec3& b) {
      return std::atan2((a - c).dot(e2), (a - c).dot(e1)) < std::atan2((b - c).dot(e2), (b - c).dot(e1));
    });
    std::vector<int> ids;
    for (const Vec3& p : pts) {
      ids.push_back(static_cast<int>(verts.size()));
      verts.push_back(p);
    }
    polys.push_back(std::move(ids));
  }
  out << std::setprecision(17) << "OFF\n" << verts.size() << ' ' << polys.size() << " 0\n";
  for (const Vec3& v : verts) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& p : polys) {
    out << p.size();
    for (int id : p) out << ' ' << id;
    out << '\n';
  }
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

json to_json(const Vec3& v, int dim) {
  if (dim == 2) return {v.x(), v.y()};
  return {v.x(), v.y(), v.z()};
}

json to_json(const MorseProfile& p) { return {{"min", p.minima}, {"saddle", p.saddles}, {"max", p.maxima}}; }

json to_json(const NormalRecord& r, int dim) {
  return {{"face", {{"dim", r.face.dim}, {"id", r.face.id}}},
          {"base_point", to_json(r.base_point, dim)},
          {"sq_dist", r.sq_dist},
          {"morse_index", r.morse_index}};
}

namespace {
json source_json(const SheetSource& s) {
  return {{"color", s.color == SheetColor::Blue ? "blue" : "red"},
          {"owner", {{"dim", s.owner.dim}, {"id", s.owner.id}}},
          {"attached", {{"dim", s.attached.dim}, {"id", s.attached.id}}}};
}
}  // namespace

json to_json(const SheetPlane& s) {
  json sources = json::array();
  for (const SheetSource& src : s.sources) sources.push_back(source_json(src));
  return {{"normal", to_json(s.normal)},
          {"offset", s.offset},
          {"color", s.color == SheetColor::Blue ? "blue" : "red"},
          {"sources", sources}};
}

json to_json(const Crossing& c, int dim) {
  json sheets = json::array();
  for (const SheetSource& s : c.sheets) sheets.push_back(source_json(s));
  return {{"t", c.t},
          {"point", to_json(c.point, dim)},
          {"sheets", sheets},
          {"count_before", c.count_before},
          {"count_after", c.count_after},
          {"profile_before", to_json(c.profile_before)},
          {"profile_after", to_json(c.profile_after)},
          {"predicted_delta", c.predicted_delta},
          {"type_rule_ok", crossing_obeys_type_rule(c, dim)}};
}

json to_json(const VertexClassification& c) {
  json j{{"verdict", c.verdict == Verdict::Nice ? "nice" : "skew"}};
  if (!c.conditions.empty()) {
    json rows = json::array();
    for (const LemmaRow& r : c.conditions)
      rows.push_back({{"labeling", r.labeling}, {"holds", r.holds}, {"all", r.all()}});
    j["conditions"] = rows;
  } else {
    j["margin"] = c.margin;
    j["borderline"] = c.borderline;
    j["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
  }
  return j;
}

json make_report(const std::string& command, const std::string& input_digest, const json& parameters,
                 json payload) {
  payload["envelope"] = {{"version", std::string(kVersion)},
                         {"command", command},
                         {"input_digest", input_digest},
                         {"parameters", parameters}};
  return payload;
}

}  // namespace polynormal
