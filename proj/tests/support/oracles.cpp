#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {
namespace {

using polynormal::Face;

double sq(const Vec3& a, const Vec3& y) { return (a - y).squaredNorm(); }

// |z + r w - y|^2 - |z - y|^2, expanded to avoid cancellation for small r.
double ring_delta(const Vec3& z, const Vec3& w, double r, const Vec3& y) {
  return 2 * r * (z - y).dot(w) + r * r * w.squaredNorm();
}

// Cyclic sign changes of a sequence of nonzero values.
int sign_changes(const std::vector<double>& v) {
  int n = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if ((v[i] > 0) != (v[(i + 1) % v.size()] > 0)) ++n;
  return n;
}

std::vector<int> polygon_order(const Polytope& P) {
  std::vector<int> order;
  int v = P.faces(1)[0].vertex_ids[0];
  for (int k = 0; k < P.num_vertices(); ++k) {
    order.push_back(v);
    for (const Face& e : P.faces(1))
      if (e.vertex_ids[0] == v) {
        v = e.vertex_ids[1];
        break;
      }
  }
  return order;
}

double dist_to_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (a + t * d - p).norm();
}

}  // namespace

polynormal::MorseProfile boundary_scan_2d(const Polytope& P, const Vec3& y, int samples) {
  const auto order = polygon_order(P);
  double perimeter = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i)
    perimeter += (P.vertex(order[(i + 1) % order.size()]) - P.vertex(order[i])).norm();
  std::vector<double> f;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Vec3& a = P.vertex(order[i]);
    const Vec3& b = P.vertex(order[(i + 1) % order.size()]);
    const int k = std::max(4, static_cast<int>(samples * (b - a).norm() / perimeter));
    for (int s = 0; s < k; ++s) f.push_back(sq(a + (static_cast<double>(s) / k) * (b - a), y));
  }
  polynormal::MorseProfile p;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = f[(i + n - 1) % n], next = f[(i + 1) % n];
    if (f[i] < prev && f[i] < next) ++p.minima;
    if (f[i] > prev && f[i] > next) ++p.maxima;
  }
  return p;
}

polynormal::MorseProfile ring_sampling_3d(const Polytope& P, const Vec3& y) {
  constexpr int kArc = 90;
  polynormal::MorseProfile p;

  for (int f = 0; f < P.num_facets(); ++f) {
    const Vec3& n = P.facets()[f].normal;
    const auto& cyc = P.faces(2)[f].vertex_ids;
    const Vec3 z = y - (n.dot(y) - P.facets()[f].offset) * n;
    double clearance = std::numeric_limits<double>::infinity();
    int side = 0;
    bool inside = true;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const Vec3& a = P.vertex(cyc[i]);
      const Vec3& b = P.vertex(cyc[(i + 1) % cyc.size()]);
      const int s = (b - a).cross(z - a).dot(n) > 0 ? 1 : -1;
      if (side != 0 && s != side) inside = false;
      side = s;
      clearance = std::min(clearance, dist_to_segment(z, a, b));
    }
    if (!inside) continue;
    const double r = 1e-4 * clearance;
    const Vec3 e1 = (P.vertex(cyc[1]) - P.vertex(cyc[0])).normalized();
    const Vec3 e2 = n.cross(e1);
    std::vector<double> ring;
    for (int k = 0; k < 4 * kArc; ++k) {
      const double th = 2 * std::numbers::pi * k / (4 * kArc);
      ring.push_back(ring_delta(z, std::cos(th) * e1 + std::sin(th) * e2, r, y));
    }
    if (std::all_of(ring.begin(), ring.end(), [](double d) { return d > 0; })) ++p.minima;
  }

  for (const Face& e : P.faces(1)) {
    const Vec3& a = P.vertex(e.vertex_ids[0]);
    const Vec3& b = P.vertex(e.vertex_ids[1]);
    const double len = (b - a).norm();
    const Vec3 u = (b - a) / len;
    const double t = u.dot(y - a);
    if (t <= 0 || t >= len) continue;
    const Vec3 z = a + t * u;
    const double r = 1e-4 * std::min(t, len - t);
    std::vector<double> ring;
    for (int side = 0; side < 2; ++side) {
      const Face& F = P.faces(2)[e.facet_ids[side]];
      Vec3 c = Vec3::Zero();
      for (int v : F.vertex_ids) c += P.vertex(v);
      c /= static_cast<double>(F.vertex_ids.size());
      const Vec3 m = ((c - a) - (c - a).dot(u) * u).normalized();
      for (int k = 0; k <= kArc; ++k) {
        const double th = std::numbers::pi * (side == 0 ? k : kArc - k) / kArc;
        ring.push_back(ring_delta(z, std::cos(th) * u + std::sin(th) * m, r, y));
      }
    }
    const int changes = sign_changes(ring);
    if (changes == 4) ++p.saddles;
  }

  for (int v = 0; v < P.num_vertices(); ++v) {
    const Vec3& V = P.vertex(v);
    double shortest = std::numeric_limits<double>::infinity();
    for (int e : P.faces(0)[v].edge_ids) {
      const auto& ids = P.faces(1)[e].vertex_ids;
      shortest = std::min(shortest, (P.vertex(ids[0]) - P.vertex(ids[1])).norm());
    }
    const double r = 1e-4 * shortest;
    bool all_closer = true;
    for (int f : P.faces(0)[v].facet_ids) {
      const auto& cyc = P.faces(2)[f].vertex_ids;
      const std::size_t i = std::find(cyc.begin(), cyc.end(), v) - cyc.begin();
      const Vec3 d1 = (P.vertex(cyc[(i + 1) % cyc.size()]) - V).normalized();
      const Vec3 d2 = (P.vertex(cyc[(i + cyc.size() - 1) % cyc.size()]) - V).normalized();
      for (int k = 0; k <= kArc; ++k) {
        const double s = static_cast<double>(k) / kArc;
        const Vec3 w = ((1 - s) * d1 + s * d2).normalized();
        if (ring_delta(V, w, r, y) >= 0) all_closer = false;
      }
    }
    if (all_closer) ++p.maxima;
  }
  return p;
}

PlaneCounts brute_force_sheets(const Polytope& P) {
  struct Plane {
    Vec3 n;
    Vec3 point;
  };
  const double eps = 1e-8 * P.diameter();
  auto distinct = [&](const std::vector<Plane>& planes) {
    std::vector<Plane> kept;
    for (const Plane& q : planes) {
      const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Plane& k) {
        return std::abs(std::abs(k.n.dot(q.n)) - 1.0) < 1e-9 && std::abs(k.n.dot(q.point - k.point)) < eps;
      });
      if (!dup) kept.push_back(q);
    }
    return static_cast<int>(kept.size());
  };
  std::vector<Plane> blue, red;
  for (int f = 0; f < P.num_facets(); ++f) {
    const auto& cyc = P.faces(2)[f].vertex_ids;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const Vec3& a = P.vertex(cyc[i]);
      const Vec3& b = P.vertex(cyc[(i + 1) % cyc.size()]);
      blue.push_back({P.facets()[f].normal.cross(b - a).normalized(), a});
    }
  }
  for (const Face& e : P.faces(1)) {
    const Vec3& a = P.vertex(e.vertex_ids[0]);
    const Vec3& b = P.vertex(e.vertex_ids[1]);
    red.push_back({(b - a).normalized(), a});
    red.push_back({(b - a).normalized(), b});
  }
  return {static_cast<int>(blue.size()), static_cast<int>(red.size()), distinct(blue), distinct(red)};
}

Vec3 arc_argmin(const Vec3& x, const Vec3& y, const Vec3& z, int samples) {
  const double omega = std::acos(std::clamp(y.dot(z), -1.0, 1.0));
  Vec3 best = y;
  double best_d = -2.0;
  for (int k = 0; k <= samples; ++k) {
    const double s = static_cast<double>(k) / samples;
    const Vec3 p = (std::sin((1 - s) * omega) * y + std::sin(s * omega) * z) / std::sin(omega);
    if (p.dot(x) > best_d) best_d = p.dot(x), best = p;
  }
  return best;
}

double definition_lp_margin(const polynormal::SphericalTriangle& t) {
  // Unknowns (c0, c1, c2, m) with x = c0 A + c1 B + c2 C and c0 + c1 + c2 = 1.
  // Each row r encodes the inequality r . (c, 1) >= m.
  std::vector<Eigen::Vector3d> rows;
  for (int i = 0; i < 3; ++i) rows.push_back(Eigen::Vector3d::Unit(i));
  std::vector<Vec3> w;
  for (int i = 0; i < 3; ++i) {
    const Vec3& y = t.vertex(i);
    const Vec3& z = t.vertex((i + 1) % 3);
    w.push_back((z - y.dot(z) * y).normalized());
    w.push_back((y - z.dot(y) * z).normalized());
    w.push_back(y);
  }
  for (const Vec3& wk : w) rows.emplace_back(wk.dot(t.A()), wk.dot(t.B()), wk.dot(t.C()));

  double best = -std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(rows.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Eigen::Matrix4d M;
        Eigen::Vector4d rhs(0, 0, 0, 1);
        const int idx[3] = {i, j, k};
        for (int r = 0; r < 3; ++r) {
          M.row(r) << rows[idx[r]].transpose(), -1.0;
        }
        M.row(3) << 1, 1, 1, 0;
        if (std::abs(M.determinant()) < 1e-12) continue;
        const Eigen::Vector4d s = M.partialPivLu().solve(rhs);
        const Eigen::Vector3d c = s.head<3>();
        bool feasible = true;
        for (const auto& row : rows)
          if (row.dot(c) < s(3) - 1e-12) feasible = false;
        if (feasible) best = std::max(best, s(3));
      }
  return best;
}

double triangle_average(const Polytope& triangle) {
  const auto& v = triangle.vertices();
  auto area = [](const std::vector<Vec3>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec3& p = poly[i];
      const Vec3& q = poly[(i + 1) % poly.size()];
      a += p.x() * q.y() - q.x() * p.y();
    }
    return std::abs(a) / 2;
  };
  // Part of the polygon with <y - o, d> <= 0.
  auto clip = [](const std::vector<Vec3>& poly, const Vec3& o, const Vec3& d) {
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec3& p = poly[i];
      const Vec3& q = poly[(i + 1) % poly.size()];
      const double fp = (p - o).dot(d), fq = (q - o).dot(d);
      if (fp <= 0) out.push_back(p);
      if ((fp < 0) != (fq < 0) && fp != 0 && fq != 0) out.push_back(p + fp / (fp - fq) * (q - p));
    }
    return out;
  };
  const std::vector<Vec3> tri(v.begin(), v.end());
  for (int i = 0; i < 3; ++i) {
    const Vec3& o = v[i];
    const Vec3 a = (v[(i + 1) % 3] - o).normalized();
    const Vec3 b = (v[(i + 2) % 3] - o).normalized();
    if (a.dot(b) >= 0) continue;
    const double lost = area(clip(tri, o, a)) + area(clip(tri, o, b));
    return 6.0 - 2.0 * lost / area(tri);
  }
  return 6.0;
}

std::string fixture(const std::string& name) { return std::string(POLYNORMAL_FIXTURE_DIR) + "/" + name; }

}  // namespace oracle
