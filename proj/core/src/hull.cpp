#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>
#include <vector>

#include "polynormal/errors.hpp"
#include "polynormal/polytope.hpp"

namespace polynormal {
namespace {

double bounding_scale(std::span<const Vec3> pts) {
  Vec3 lo = pts.front(), hi = pts.front();
  for (const Vec3& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return std::max((hi - lo).norm(), 1e-300);
}

std::vector<Vec3> dedup_points(std::span<const Vec3> pts, double eps) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const Vec3& p : pts) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Vec3& q) { return (p - q).norm() <= eps; });
    if (!seen) out.push_back(p);
  }
  return out;
}

struct Triangle {
  std::array<int, 3> v;
  Vec3 normal;
  double offset;
  bool alive = true;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

// Incremental 3-D hull producing an outward-oriented triangulated surface.
class TriangulatedHull {
 public:
  TriangulatedHull(std::vector<Vec3> pts, double eps) : pts_(std::move(pts)), eps_(eps) {}

  void build() {
    seed_simplex();
    std::vector<int> order;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i)
      if (std::find(seed_.begin(), seed_.end(), i) == seed_.end()) order.push_back(i);
    // Far points first: fewer intermediate triangles, fewer near-coplanar tests.
    const Vec3 c = (pts_[seed_[0]] + pts_[seed_[1]] + pts_[seed_[2]] + pts_[seed_[3]]) / 4.0;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return (pts_[a] - c).squaredNorm() > (pts_[b] - c).squaredNorm();
    });
    for (int i : order) insert(i);
  }

  const std::vector<Vec3>& points() const { return pts_; }
  const std::vector<Triangle>& triangles() const { return tris_; }
  int neighbor(int a, int b) const {
    auto it = owner_.find(edge_key(b, a));
    return it == owner_.end() ? -1 : it->second;
  }

 private:
  void seed_simplex() {
    const int n = static_cast<int>(pts_.size());
    if (n < 4) throw DegenerateInput("hull needs at least 4 distinct points");
    int i0 = 0;
    for (int i = 1; i < n; ++i)
      if (pts_[i].x() < pts_[i0].x()) i0 = i;
    int i1 = -1;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = (pts_[i] - pts_[i0]).squaredNorm();
      if (d > best) best = d, i1 = i;
    }
    const Vec3 dir = (pts_[i1] - pts_[i0]).normalized();
    int i2 = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const Vec3 w = pts_[i] - pts_[i0];
      const double d = (w - w.dot(dir) * dir).norm();
      if (d > best) best = d, i2 = i;
    }
    if (best <= eps_) throw DegenerateInput("points are collinear");
    const Vec3 nrm = (pts_[i1] - pts_[i0]).cross(pts_[i2] - pts_[i0]).normalized();
    int i3 = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(nrm.dot(pts_[i] - pts_[i0]));
      if (d > best) best = d, i3 = i;
    }
    if (best <= eps_) throw DegenerateInput("points are coplanar");
    seed_ = {i0, i1, i2, i3};
    interior_ = (pts_[i0] + pts_[i1] + pts_[i2] + pts_[i3]) / 4.0;
    add_oriented(i0, i1, i2);
    add_oriented(i0, i1, i3);
    add_oriented(i0, i2, i3);
    add_oriented(i1, i2, i3);
  }

  void add_oriented(int a, int b, int c) {
    const Vec3 n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
    if (n.dot(pts_[a] - interior_) < 0) std::swap(b, c);
    add(a, b, c);
  }

  void add(int a, int b, int c) {
    Triangle t;
    t.v = {a, b, c};
    t.normal = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]).normalized();
    t.offset = t.normal.dot(pts_[a]);
    const int id = static_cast<int>(tris_.size());
    tris_.push_back(t);
    owner_[edge_key(a, b)] = id;
    owner_[edge_key(b, c)] = id;
    owner_[edge_key(c, a)] = id;
  }

  void insert(int p) {
    const Vec3& x = pts_[p];
    std::vector<int> visible;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
      if (tris_[t].alive && tris_[t].normal.dot(x) - tris_[t].offset > eps_) visible.push_back(t);
    if (visible.empty()) return;

    std::set<int> vis(visible.begin(), visible.end());
    std::vector<std::array<int, 2>> horizon;
    for (int t : visible) {
      const auto& v = tris_[t].v;
      for (int k = 0; k < 3; ++k) {
        const int a = v[k], b = v[(k + 1) % 3];
        const int nb = neighbor(a, b);
        if (nb < 0) throw InvariantViolation("hull surface is not closed");
        if (!vis.contains(nb)) horizon.push_back({a, b});
      }
    }
    for (int t : visible) {
      tris_[t].alive = false;
      const auto& v = tris_[t].v;
      for (int k = 0; k < 3; ++k) {
        auto it = owner_.find(edge_key(v[k], v[(k + 1) % 3]));
        if (it != owner_.end() && it->second == t) owner_.erase(it);
      }
    }
    for (const auto& e : horizon) add(e[0], e[1], p);
  }

  std::vector<Vec3> pts_;
  double eps_;
  std::array<int, 4> seed_{};
  Vec3 interior_ = Vec3::Zero();
  std::vector<Triangle> tris_;
  std::unordered_map<std::uint64_t, int> owner_;
};

}  // namespace

Polytope hull_from_points(std::span<const Vec3> points, const Tolerance& tol) {
  if (points.size() < 4) throw DegenerateInput("hull needs at least 4 points");
  const double scale = bounding_scale(points);
  const double eps = tol.geometry * scale;

  TriangulatedHull hull(dedup_points(points, eps), eps);
  hull.build();
  const auto& pts = hull.points();
  const auto& tris = hull.triangles();

  std::vector<int> alive;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t)
    if (tris[t].alive) alive.push_back(t);

  // Coplanar neighbours merge into one facet: by normal angle, or by
  // distance of the far vertex for sliver triangles whose normals are noisy.
  DisjointSets groups(static_cast<int>(tris.size()));
  const double cos_merge = std::cos(tol.merge_angle);
  for (int t : alive) {
    const auto& v = tris[t].v;
    for (int k = 0; k < 3; ++k) {
      const int nb = hull.neighbor(v[k], v[(k + 1) % 3]);
      if (nb < 0 || nb < t) continue;
      const Triangle& s = tris[nb];
      bool coplanar = tris[t].normal.dot(s.normal) >= cos_merge;
      if (!coplanar) {
        const int far_s = s.v[0] + s.v[1] + s.v[2] - v[k] - v[(k + 1) % 3];
        const int far_t = v[(k + 2) % 3];
        coplanar = std::abs(tris[t].normal.dot(pts[far_s]) - tris[t].offset) <= eps &&
                   std::abs(s.normal.dot(pts[far_t]) - s.offset) <= eps;
      }
      if (coplanar) groups.unite(t, nb);
    }
  }

  std::vector<int> group_of(tris.size(), -1);
  std::vector<std::vector<int>> members;
  for (int t : alive) {
    const int root = groups.find(t);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<int>(members.size());
      members.emplace_back();
    }
    group_of[t] = group_of[root];
    members[group_of[t]].push_back(t);
  }

  // A hull point is a polytope vertex iff it touches at least three facets.
  std::vector<std::set<int>> point_groups(pts.size());
  for (int t : alive)
    for (int v : tris[t].v) point_groups[v].insert(group_of[t]);

  std::vector<int> new_id(pts.size(), -1);
  std::vector<Vec3> vertices;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (point_groups[i].size() >= 3) {
      new_id[i] = static_cast<int>(vertices.size());
      vertices.push_back(pts[i]);
    }
  }

  std::vector<Halfspace> planes;
  std::vector<std::vector<int>> cycles;
  for (const auto& group : members) {
    Vec3 n = Vec3::Zero();
    std::unordered_map<int, int> next;
    std::set<std::uint64_t> directed;
    for (int t : group) {
      const auto& v = tris[t].v;
      n += (pts[v[1]] - pts[v[0]]).cross(pts[v[2]] - pts[v[0]]);
      for (int k = 0; k < 3; ++k) directed.insert(edge_key(v[k], v[(k + 1) % 3]));
    }
    n.normalize();
    for (int t : group) {
      const auto& v = tris[t].v;
      for (int k = 0; k < 3; ++k) {
        const int a = v[k], b = v[(k + 1) % 3];
        if (directed.contains(edge_key(b, a))) continue;
        if (next.contains(a)) throw InvariantViolation("facet boundary is not a simple cycle");
        next[a] = b;
      }
    }
    std::vector<int> cycle;
    const int start = next.begin()->first;
    int cur = start;
    do {
      cycle.push_back(cur);
      auto it = next.find(cur);
      if (it == next.end() || cycle.size() > next.size())
        throw InvariantViolation("facet boundary is not a simple cycle");
      cur = it->second;
    } while (cur != start);
    if (cycle.size() != next.size()) throw InvariantViolation("facet boundary is not a simple cycle");

    std::vector<int> kept;
    double offset = -std::numeric_limits<double>::infinity();
    for (int p : cycle) {
      offset = std::max(offset, n.dot(pts[p]));
      if (new_id[p] >= 0) kept.push_back(new_id[p]);
    }
    if (kept.size() < 3) throw DegenerateInput("facet with fewer than three vertices");
    planes.push_back({n, offset});
    cycles.push_back(std::move(kept));
  }

  return Polytope::from_lattice(3, std::move(vertices), std::move(planes), std::move(cycles), tol);
}

Polytope polygon_from_points(std::span<const Vec2> points, const Tolerance& tol) {
  if (points.size() < 3) throw DegenerateInput("polygon needs at least 3 points");
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  double scale = (pts.back() - pts.front()).norm();
  for (const Vec2& p : pts) scale = std::max(scale, (p - pts.front()).norm());
  const double eps = tol.geometry * std::max(scale, 1e-300);

  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  // Monotone chain; collinear points (within eps of the chord) are dropped.
  std::vector<Vec2> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Vec2& p = pass == 0 ? pts[k] : pts[pts.size() - 1 - k];
      while (hull.size() >= base + 2) {
        const Vec2& o = hull[hull.size() - 2];
        const Vec2& a = hull[hull.size() - 1];
        const double len = std::max((p - o).norm(), 1e-300);
        if (cross(o, a, p) / len > eps) break;
        hull.pop_back();
      }
      hull.push_back(p);
    }
    hull.pop_back();
  }
  if (hull.size() < 3) throw DegenerateInput("points are collinear");

  std::vector<Vec3> vertices;
  for (const Vec2& p : hull) vertices.emplace_back(p.x(), p.y(), 0.0);
  const int n = static_cast<int>(vertices.size());
  std::vector<Halfspace> planes;
  std::vector<std::vector<int>> cycles;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const Vec3 d = vertices[j] - vertices[i];
    const Vec3 normal = Vec3(d.y(), -d.x(), 0.0).normalized();
    planes.push_back({normal, normal.dot(vertices[i])});
    cycles.push_back({i, j});
  }
  return Polytope::from_lattice(2, std::move(vertices), std::move(planes), std::move(cycles), tol);
}

}  // namespace polynormal
