#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polynormal/bifurcation.hpp"
#include "polynormal/errors.hpp"

namespace polynormal {
namespace {

using Loop = std::vector<Vec3>;

// Convex cell. In 3-D `faces` holds its boundary polygons; in 2-D `faces`
// holds a single loop, the cell polygon itself.
struct Cell {
  std::vector<Loop> faces;
  std::vector<Vec3> vertices;
  std::vector<Halfspace> cuts;
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

void append_unique(std::vector<Vec3>& pts, const Vec3& p, double eps) {
  for (const Vec3& q : pts)
    if ((q - p).squaredNorm() <= eps * eps) return;
  pts.push_back(p);
}

void finish(Cell& c, double eps) {
  c.vertices.clear();
  for (const Loop& f : c.faces)
    for (const Vec3& p : f) append_unique(c.vertices, p, eps);
  c.center = Vec3::Zero();
  for (const Vec3& p : c.vertices) c.center += p;
  c.center /= static_cast<double>(std::max<std::size_t>(1, c.vertices.size()));
  c.radius = 0.0;
  for (const Vec3& p : c.vertices) c.radius = std::max(c.radius, (p - c.center).norm());
}

// Clips a loop to d <= 0 (sign = -1) or d >= 0 (sign = +1), treating
// |d| <= eps as on the plane. On-plane points are reported in `cut`.
Loop clip(const Loop& loop, const Vec3& n, double c, int sign, double eps, std::vector<Vec3>* cut) {
  Loop out;
  const std::size_t k = loop.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3& p = loop[i];
    const Vec3& q = loop[(i + 1) % k];
    const double dp = sign * (n.dot(p) - c);
    const double dq = sign * (n.dot(q) - c);
    if (dp >= -eps) out.push_back(p);
    if (std::abs(dp) <= eps && cut) cut->push_back(p);
    if ((dp > eps && dq < -eps) || (dp < -eps && dq > eps)) {
      const Vec3 x = p + (dp / (dp - dq)) * (q - p);
      out.push_back(x);
      if (cut) cut->push_back(x);
    }
  }
  return out;
}

Loop dedup_loop(const Loop& loop, double eps) {
  Loop out;
  for (const Vec3& p : loop)
    if (out.empty() || (out.back() - p).norm() > eps) out.push_back(p);
  while (out.size() > 1 && (out.front() - out.back()).norm() <= eps) out.pop_back();
  return out;
}

Loop cap_polygon(std::vector<Vec3> pts, const Vec3& n, double eps) {
  Loop unique;
  for (const Vec3& p : pts) append_unique(unique, p, eps);
  if (unique.size() < 3) return {};
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : unique) c += p;
  c /= static_cast<double>(unique.size());
  const Vec3 e1 = (std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(n).normalized();
  const Vec3 e2 = n.cross(e1);
  std::sort(unique.begin(), unique.end(), [&](const Vec3& a, const Vec3& b) {
    return std::atan2((a - c).dot(e2), (a - c).dot(e1)) < std::atan2((b - c).dot(e2), (b - c).dot(e1));
  });
  return unique;
}

double cell_volume(const Cell& cell, int dim) {
  if (dim == 2) {
    const Loop& p = cell.faces.front();
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Vec3& u = p[i];
      const Vec3& v = p[(i + 1) % p.size()];
      a += u.x() * v.y() - u.y() * v.x();
    }
    return 0.5 * std::abs(a);
  }
  double v = 0.0;
  for (const Loop& f : cell.faces)
    for (std::size_t k = 1; k + 1 < f.size(); ++k)
      v += std::abs((f[0] - cell.center).dot((f[k] - cell.center).cross(f[k + 1] - cell.center)));
  return v / 6.0;
}

// Splits `cell` by <n, x> = c; returns false if the plane misses its interior.
bool split(const Cell& cell, const Vec3& n, double c, int dim, double eps, Cell& neg, Cell& pos) {
  if (std::abs(n.dot(cell.center) - c) > cell.radius + eps) return false;
  double lo = 0.0, hi = 0.0;
  for (const Vec3& p : cell.vertices) {
    const double d = n.dot(p) - c;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (hi <= eps || lo >= -eps) return false;

  neg = Cell{};
  pos = Cell{};
  neg.cuts = cell.cuts;
  pos.cuts = cell.cuts;
  neg.cuts.push_back({n, c});
  pos.cuts.push_back({-n, -c});

  if (dim == 2) {
    Loop a = dedup_loop(clip(cell.faces.front(), n, c, -1, eps, nullptr), eps);
    Loop b = dedup_loop(clip(cell.faces.front(), n, c, +1, eps, nullptr), eps);
    if (a.size() < 3 || b.size() < 3) return false;
    neg.faces = {std::move(a)};
    pos.faces = {std::move(b)};
  } else {
    std::vector<Vec3> cut;
    for (const Loop& f : cell.faces) {
      Loop a = dedup_loop(clip(f, n, c, -1, eps, &cut), eps);
      Loop b = dedup_loop(clip(f, n, c, +1, eps, nullptr), eps);
      if (a.size() >= 3) neg.faces.push_back(std::move(a));
      if (b.size() >= 3) pos.faces.push_back(std::move(b));
    }
    Loop cap = cap_polygon(std::move(cut), n, eps);
    if (cap.size() < 3) return false;
    neg.faces.push_back(cap);
    pos.faces.push_back(std::move(cap));
  }
  finish(neg, eps);
  finish(pos, eps);
  return true;
}

Cell initial_cell(const Polytope& P, double eps) {
  Cell cell;
  if (P.dim() == 2) {
    // Chain the edges into the counter-clockwise boundary loop.
    Loop loop;
    int v = P.faces(1)[0].vertex_ids[0];
    for (int step = 0; step < P.num_vertices(); ++step) {
      loop.push_back(P.vertex(v));
      for (const Face& e : P.faces(1))
        if (e.vertex_ids[0] == v) {
          v = e.vertex_ids[1];
          break;
        }
    }
    cell.faces = {loop};
  } else {
    for (const Face& f : P.faces(2)) {
      Loop loop;
      for (int v : f.vertex_ids) loop.push_back(P.vertex(v));
      cell.faces.push_back(std::move(loop));
    }
  }
  finish(cell, eps);
  return cell;
}

}  // namespace

double ChamberDecomposition::covered_volume() const {
  double v = 0.0;
  for (const Chamber& c : chambers) v += c.volume;
  return v;
}

ChamberDecomposition chamber_decomposition(const Polytope& P, const ChamberOptions& options) {
  const double eps = options.tol.geometry * P.diameter();
  const auto planes = arrangement_planes(P, options.tol);

  std::vector<Cell> cells{initial_cell(P, eps)};
  for (const SheetPlane& plane : planes) {
    std::vector<Cell> next;
    next.reserve(cells.size() + cells.size() / 4);
    for (Cell& cell : cells) {
      Cell a, b;
      if (split(cell, plane.normal, plane.offset, P.dim(), eps, a, b)) {
        next.push_back(std::move(a));
        next.push_back(std::move(b));
      } else {
        next.push_back(std::move(cell));
      }
    }
    cells = std::move(next);
    if (cells.size() > options.cap)
      throw TooManyChambers("chamber decomposition exceeded the cap of " + std::to_string(options.cap) +
                            " cells");
  }

  ChamberDecomposition out;
  out.polytope_volume = P.volume();
  out.planes = static_cast<int>(planes.size());
  const ActiveRegions regions(P, options.tol);

  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& cell = cells[i];
    const double volume = cell_volume(cell, P.dim());
    Rng rng = substream(options.seed, i);

    Vec3 rep = cell.center;
    auto profile = regions.profile(rep);
    for (int attempt = 0; attempt < 50 && !profile; ++attempt) {
      rep = random_convex_combination(cell.vertices, rng);
      profile = regions.profile(rep);
    }
    if (!profile) {
      out.discarded_volume += volume;
      continue;
    }
    check_profile(*profile, P.dim());

    Chamber ch;
    ch.halfspaces = cell.cuts;
    ch.vertices = cell.vertices;
    ch.rep_point = rep;
    ch.volume = volume;
    ch.profile = *profile;
    ch.count = profile->total();
    for (int k = 0; k < options.spot_checks; ++k) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        const auto other = regions.profile(random_convex_combination(cell.vertices, rng));
        if (!other) continue;
        (*other == *profile ? ch.spot_checks_passed : ch.spot_checks_failed) += 1;
        break;
      }
    }
    out.chambers.push_back(std::move(ch));
  }
  return out;
}

MaxNormals max_normals(const Polytope& P, const ChamberOptions& options) {
  MaxNormals m;
  m.decomposition = chamber_decomposition(P, options);
  const auto& chambers = m.decomposition.chambers;
  for (int i = 0; i < static_cast<int>(chambers.size()); ++i)
    if (m.witness < 0 || chambers[i].count > chambers[m.witness].count) m.witness = i;
  if (m.witness < 0) throw InvariantViolation("chamber decomposition produced no chambers");
  m.N = chambers[m.witness].count;
  if (m.N > P.num_faces()) throw InvariantViolation("N(P) exceeds the number of faces");
  return m;
}

double exact_average(const ChamberDecomposition& d) {
  double weighted = 0.0, total = 0.0;
  for (const Chamber& c : d.chambers) {
    weighted += c.volume * c.count;
    total += c.volume;
  }
  return weighted / total;
}

double exact_average(const Polytope& P, const ChamberOptions& options) {
  return exact_average(chamber_decomposition(P, options));
}

}  // namespace polynormal
