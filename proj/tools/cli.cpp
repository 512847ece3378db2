#include "cli.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "polynormal/bifurcation.hpp"
#include "polynormal/errors.hpp"
#include "polynormal/explorer.hpp"
#include "polynormal/io.hpp"
#include "polynormal/spherical.hpp"

namespace polynormal::cli {
namespace {

using nlohmann::json;

struct Globals {
  std::optional<double> tol;
  std::size_t chamber_cap = 1'000'000;
  bool quiet = false;
};

Tolerance tolerance_from(const Globals& g) {
  std::optional<double> tau = g.tol;
  if (!tau) {
    if (const char* env = std::getenv("POLYNORMAL_TOL")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0' || !(v > 0)) throw ValidationError("POLYNORMAL_TOL must be a positive number");
      tau = v;
    }
  }
  Tolerance t;
  if (tau) {
    if (!(*tau > 0)) throw ValidationError("--tol must be positive");
    t = {*tau, 10 * *tau, 100 * *tau};
  }
  return t;
}

json tolerance_json(const Tolerance& t) {
  return {{"geometry", t.geometry}, {"relint", t.relint}, {"merge_angle", t.merge_angle}};
}

Vec3 parse_point(const std::string& s, int dim) {
  std::vector<double> xs;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ValidationError("cannot parse point '" + s + "'");
    }
  }
  if (xs.size() == 3 && (dim == 3 || xs[2] == 0.0)) return {xs[0], xs[1], xs[2]};
  if (xs.size() == 2 && dim == 2) return {xs[0], xs[1], 0.0};
  throw ValidationError("point '" + s + "' needs " + std::to_string(dim) + " coordinates");
}

struct Input {
  Polytope polytope;
  std::string digest;
};

Input load(const std::string& path, const Tolerance& tol) {
  const std::string text = read_file(path);
  return {parse_polytope(text, tol), fnv1a_hex(text)};
}

json chamber_options_json(const Globals& g, const Tolerance& tol) {
  return {{"tolerance", tolerance_json(tol)}, {"chamber_cap", g.chamber_cap}};
}

ChamberOptions chamber_options(const Globals& g, const Tolerance& tol) {
  ChamberOptions o;
  o.cap = g.chamber_cap;
  o.tol = tol;
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normals of convex polytopes: counts, bifurcation chambers, vertex classification"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "Base tolerance tau (geometry tau, relint 10 tau, merge angle 100 tau)");
  app.add_option("--chamber-cap", g.chamber_cap, "Maximum number of chambers");
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");

  std::string file;
  std::uint64_t seed = 1;

  auto* count = app.add_subcommand("count", "Normals from a point");
  std::string point;
  count->add_option("--point", point, "x,y,z (x,y for polygons)")->required();
  count->add_option("--seed", seed, "Seed for the perturbation off the bifurcation set");
  count->add_option("file", file)->required();

  auto* max = app.add_subcommand("max", "Maximal number of normals N(P)");
  max->add_option("file", file)->required();

  auto* average = app.add_subcommand("average", "Volume-averaged number of normals");
  bool exact = false;
  std::size_t mc = 0;
  auto* exact_flag = average->add_flag("--exact", exact, "Exact average over chambers (default)");
  average->add_option("--mc", mc, "Monte-Carlo sample count")->excludes(exact_flag);
  average->add_option("--seed", seed, "Monte-Carlo seed");
  average->add_option("file", file)->required();

  auto* classify = app.add_subcommand("classify", "Nice/skew vertex table and certificates");
  classify->add_option("file", file)->required();

  auto* sheets = app.add_subcommand("sheets", "Sheet planes of the bifurcation set");
  std::string export_format = "json";
  sheets->add_option("--export", export_format)->check(CLI::IsMember({"json", "off"}));
  sheets->add_option("file", file)->required();

  auto* audit = app.add_subcommand("audit", "Crossing audit along a segment");
  std::string from, to;
  audit->add_option("--from", from)->required();
  audit->add_option("--to", to)->required();
  audit->add_option("--seed", seed);
  audit->add_option("file", file)->required();

  auto* scan_cmd = app.add_subcommand("scan", "Randomized conjecture scan");
  std::string config_path;
  scan_cmd->add_option("--config", config_path)->required();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const Tolerance tol = tolerance_from(g);

    if (*count) {
      const Input in = load(file, tol);
      const Polytope& P = in.polytope;
      const Vec3 y = parse_point(point, P.dim());
      Rng rng(seed);
      const Vec3 generic = perturb_to_generic(P, y, rng, tol);
      const auto normals = normals_from_point(P, generic, tol);
      const MorseProfile profile = profile_of(normals, P.dim());
      check_profile(profile, P.dim());
      json list = json::array();
      for (const NormalRecord& r : normals) list.push_back(to_json(r, P.dim()));
      json payload{{"n", profile.total()},
                   {"profile", to_json(profile)},
                   {"normals", list},
                   {"point", to_json(generic, P.dim())},
                   {"perturbed", generic != y}};
      out << make_report("count", in.digest,
                         {{"point", to_json(y, P.dim())}, {"seed", seed}, {"tolerance", tolerance_json(tol)}},
                         payload)
                 .dump(2)
          << '\n';
    } else if (*max) {
      const Input in = load(file, tol);
      const MaxNormals m = max_normals(in.polytope, chamber_options(g, tol));
      const Chamber& w = m.decomposition.chambers[m.witness];
      json payload{{"N", m.N},
                   {"chambers", m.decomposition.chambers.size()},
                   {"witness", to_json(w.rep_point, in.polytope.dim())},
                   {"profile", to_json(w.profile)}};
      out << make_report("max", in.digest, chamber_options_json(g, tol), payload).dump(2) << '\n';
    } else if (*average) {
      const Input in = load(file, tol);
      json params = chamber_options_json(g, tol);
      json payload;
      if (mc > 0) {
        const auto est = monte_carlo_average(in.polytope, mc, seed, tol);
        payload = {{"EN", est.mean}, {"stderr", est.stderr_}, {"samples", est.samples}, {"method", "monte_carlo"}};
        params["seed"] = seed;
        params["samples"] = mc;
      } else {
        const auto d = chamber_decomposition(in.polytope, chamber_options(g, tol));
        json chambers = json::array();
        int N = 0;
        for (const Chamber& c : d.chambers) {
          chambers.push_back({{"volume", c.volume}, {"count", c.count}});
          N = std::max(N, c.count);
        }
        payload = {{"EN", exact_average(d)}, {"N", N}, {"chambers", chambers}, {"method", "exact"}};
      }
      out << make_report("average", in.digest, params, payload).dump(2) << '\n';
    } else if (*classify) {
      const Input in = load(file, tol);
      const Polytope& P = in.polytope;
      if (P.dim() != 3) throw ValidationError("classify needs a 3-polytope");
      if (!P.is_simple()) throw NotSimple("classify needs a simple polytope");
      json vertices = json::array();
      for (int v = 0; v < P.num_vertices(); ++v) {
        const SphericalTriangle fig = vertex_figure(P, v);
        json row = to_json(classify_by_definition(fig));
        row["vertex"] = v;
        try {
          row["lemma"] = to_json(classify_by_lemma(fig));
        } catch (const Borderline& e) {
          row["lemma"] = {{"verdict", "borderline"}, {"reason", e.what()}};
        }
        vertices.push_back(row);
      }
      json payload{{"vertices", vertices}};
      try {
        const auto cert = ten_normals_certificate(P);
        payload["certificate"] = cert ? json(*cert) : json(nullptr);
        json census = json::array();
        for (const AcuteCensusEntry& c : acute_census(P))
          census.push_back({{"vertex", c.vertex},
                            {"acute_dihedral", c.acute_dihedral},
                            {"acute_planar", c.acute_planar},
                            {"planar_between_acute_edges", c.planar_between_acute_edges},
                            {"compatible_with_low_N", c.compatible_with_low_N()}});
        payload["census"] = census;
      } catch (const NotGeneric& e) {
        payload["certificate"] = nullptr;
        payload["certificate_error"] = e.what();
      }
      const NormalFanTiling tiling = normal_fan_tiling(P);
      payload["tiling"] = {{"tiles", tiling.tiles.size()},
                           {"total_solid_angle", tiling.total_solid_angle},
                           {"all_skew", tiling.all_skew}};
      const ShellRatio shell = shell_ratio_check(P, chebyshev_center(P, tol).center);
      payload["shell_ratio"] = {{"r_in", shell.r_in}, {"r_out", shell.r_out}, {"ratio", shell.ratio},
                                {"certifies", shell.certifies}};
      out << make_report("classify", in.digest, {{"tolerance", tolerance_json(tol)}}, payload).dump(2) << '\n';
    } else if (*sheets) {
      const Input in = load(file, tol);
      const auto planes = sheet_planes(in.polytope, tol);
      if (export_format == "off") {
        write_sheets_off(in.polytope, planes, out);
      } else {
        json list = json::array();
        int blue = 0, red = 0;
        for (const SheetPlane& s : planes) {
          list.push_back(to_json(s));
          (s.color == SheetColor::Blue ? blue : red) += 1;
        }
        int raw_blue = 0, raw_red = 0;
        for (const SheetSource& s : sheet_sources(in.polytope)) (s.color == SheetColor::Blue ? raw_blue : raw_red) += 1;
        json payload{{"planes", list},
                     {"distinct", {{"blue", blue}, {"red", red}}},
                     {"raw", {{"blue", raw_blue}, {"red", raw_red}}}};
        out << make_report("sheets", in.digest, {{"tolerance", tolerance_json(tol)}}, payload).dump(2) << '\n';
      }
    } else if (*audit) {
      const Input in = load(file, tol);
      const Polytope& P = in.polytope;
      Rng rng(seed);
      const AuditResult r = crossing_audit(P, parse_point(from, P.dim()), parse_point(to, P.dim()), rng, tol);
      json crossings = json::array();
      int violations = 0;
      for (const Crossing& c : r.crossings) {
        crossings.push_back(to_json(c, P.dim()));
        if (!crossing_obeys_type_rule(c, P.dim())) ++violations;
      }
      json payload{{"from", to_json(r.from, P.dim())},
                   {"to", to_json(r.to, P.dim())},
                   {"crossings", crossings},
                   {"violations", violations}};
      out << make_report("audit", in.digest, {{"seed", seed}, {"tolerance", tolerance_json(tol)}}, payload).dump(2)
          << '\n';
      if (violations > 0) throw InvariantViolation("crossing audit found " + std::to_string(violations) +
                                                   " crossings violating the count/type rule");
    } else if (*scan_cmd) {
      const std::string text = read_file(config_path);
      json cfg;
      try {
        cfg = json::parse(text);
      } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid scan config: ") + e.what(), 0);
      }
      ScanConfig config = ScanConfig::from_json(cfg);
      if (g.tol) config.tol = tol;
      if (app.get_option("--chamber-cap")->count() > 0) config.chamber_cap = g.chamber_cap;
      const ScanReport report = scan(config);
      for (const ScanEntry& e : report.entries) {
        out << to_json(e).dump() << '\n';
        if (!g.quiet && !e.error.empty()) err << "polytope " << e.index << ": " << e.error << '\n';
      }
      out << make_report("scan", fnv1a_hex(text), config.to_json(), summary_json(report)).dump() << '\n';
    }
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace polynormal::cli
