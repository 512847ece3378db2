#include "polynormal/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "polynormal/errors.hpp"
#include "polynormal/linear_program.hpp"

namespace polynormal {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kNiceMargin = 1e-7;
constexpr double kBorderlineMargin = 1e-6;
constexpr double kLemmaBorderline = 1e-9;

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

struct GridSearch {
  const SphericalTriangle& t;
  double best = -std::numeric_limits<double>::infinity();
  Vec3 best_x = Vec3::Zero();
  double best_alpha = 1.0 / 3, best_beta = 1.0 / 3;

  void eval(double alpha, double beta) {
    const double gamma = 1.0 - alpha - beta;
    if (alpha <= 0 || beta <= 0 || gamma <= 0) return;
    const Vec3 x = (alpha * t.A() + beta * t.B() + gamma * t.C()).normalized();
    const double m = witness_margin(t, x);
    if (m > best) best = m, best_x = x, best_alpha = alpha, best_beta = beta;
  }

  // Full grid of step 1/res; stops early once a witness is certain.
  void scan(int res) {
    const double h = 1.0 / res;
    for (int i = 1; i < res && best < kNiceMargin; ++i)
      for (int j = 1; i + j < res; ++j) eval(i * h, j * h);
  }

  void refine(double h) {
    const double a0 = best_alpha, b0 = best_beta, step = h / 10;
    for (int i = -10; i <= 10; ++i)
      for (int j = -10; j <= 10; ++j) eval(a0 + i * step, b0 + j * step);
  }

  // Witness regions of needle-shaped triangles can be narrower than any
  // grid cell. Maximizes the smallest witness inequality exactly over
  // x = c0 A + c1 B + c2 C with c0 + c1 + c2 = 1 and every c_i >= m.
  // Variables (c0, c1, c2, s) with m = s - 1, all nonnegative.
  void polish() {
    std::vector<Vec3> normals;
    for (int i = 0; i < 3; ++i) {
      const Vec3& y = t.vertex(i);
      const Vec3& z = t.vertex((i + 1) % 3);
      normals.push_back(tangent_toward(y, z));
      normals.push_back(tangent_toward(z, y));
      normals.push_back(y);
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(normals.size()) + 5, 4);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(A.rows());
    Eigen::Index r = 0;
    for (const Vec3& w : normals) {
      for (int i = 0; i < 3; ++i) A(r, i) = -t.vertex(i).dot(w);
      A(r++, 3) = 1.0;
    }
    for (int i = 0; i < 3; ++i) {
      A(r, i) = -1.0;
      A(r++, 3) = 1.0;
    }
    A.row(r++) << 1, 1, 1, 0;
    A.row(r) << -1, -1, -1, 0;
    b(r) = -1.0;
    const auto res = lp::maximize(A, b, Eigen::Vector4d(0, 0, 0, 1));
    if (res.status != lp::Status::Optimal) return;
    const Vec3 x = (res.x(0) * t.A() + res.x(1) * t.B() + res.x(2) * t.C()).normalized();
    const double m = witness_margin(t, x);
    if (m > best && (res.x.head<3>().array() > 0).all())
      best = m, best_x = x, best_alpha = res.x(0), best_beta = res.x(1);
  }
};

void check_not_borderline(double value, double threshold, const char* what) {
  if (std::abs(value - threshold) <= kLemmaBorderline)
    throw Borderline(std::string(what) + " is within 1e-9 of its threshold");
}

}  // namespace

double spherical_distance(const Vec3& x, const Vec3& y) { return angle_between(x, y); }

SphericalTriangle::SphericalTriangle(const Vec3& a, const Vec3& b, const Vec3& c) {
  v_ = {a.normalized(), b.normalized(), c.normalized()};
  for (const Vec3& v : v_)
    if (!v.allFinite()) throw DegenerateInput("spherical triangle vertex is not a direction");
  // Three unit vectors fit in an open hemisphere iff they are linearly
  // independent or lie strictly on one side of the origin.
  if (std::abs(v_[0].dot(v_[1].cross(v_[2]))) <= 1e-12)
    throw DegenerateInput("spherical triangle is degenerate or does not fit in an open hemisphere");
}

double SphericalTriangle::side(int i) const { return angle_between(v_[(i + 1) % 3], v_[(i + 2) % 3]); }

double SphericalTriangle::angle(int i) const {
  const Vec3& v = v_[i];
  return angle_between(tangent_toward(v, v_[(i + 1) % 3]), tangent_toward(v, v_[(i + 2) % 3]));
}

double SphericalTriangle::solid_angle() const {
  const Vec3 &a = v_[0], &b = v_[1], &c = v_[2];
  return 2.0 * std::atan2(std::abs(a.dot(b.cross(c))), 1.0 + a.dot(b) + b.dot(c) + c.dot(a));
}

Vec3 tangent_toward(const Vec3& y, const Vec3& z) { return (z - y.dot(z) * y).normalized(); }

std::optional<ArcProjection> spherical_project(const Vec3& x_in, const Vec3& y, const Vec3& z) {
  const Vec3 x = x_in.normalized();
  if (x.dot(tangent_toward(y, z)) < 0 || x.dot(tangent_toward(z, y)) < 0) return std::nullopt;
  const Vec3 n = y.cross(z).normalized();
  const Vec3 in_plane = x - x.dot(n) * n;
  if (in_plane.norm() < 1e-15) return std::nullopt;  // x is a pole of the arc
  ArcProjection p;
  p.foot = in_plane.normalized();
  p.distance = angle_between(x, p.foot);
  return p;
}

SphericalTriangle vertex_figure(const Polytope& P, int vertex) {
  if (P.dim() != 3) throw ValidationError("vertex figures need a 3-polytope");
  const Face& v = P.faces(0).at(vertex);
  if (v.edge_ids.size() != 3) throw NotSimple("vertex " + std::to_string(vertex) + " is not simple");
  std::array<Vec3, 3> dirs;
  for (int k = 0; k < 3; ++k) {
    const auto& ids = P.faces(1)[v.edge_ids[k]].vertex_ids;
    const int other = ids[0] == vertex ? ids[1] : ids[0];
    dirs[k] = P.vertex(other) - P.vertex(vertex);
  }
  return SphericalTriangle(dirs[0], dirs[1], dirs[2]);
}

SphericalTriangle polar_dual_triangle(const SphericalTriangle& t) {
  std::array<Vec3, 3> d;
  for (int i = 0; i < 3; ++i) {
    Vec3 p = t.vertex((i + 1) % 3).cross(t.vertex((i + 2) % 3)).normalized();
    if (p.dot(t.vertex(i)) < 0) p = -p;
    d[i] = p;
  }
  return SphericalTriangle(d[0], d[1], d[2]);
}

bool LemmaRow::all() const { return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; }); }

double witness_margin(const SphericalTriangle& t, const Vec3& x) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Vec3& y = t.vertex(i);
    const Vec3& z = t.vertex((i + 1) % 3);
    m = std::min({m, x.dot(tangent_toward(y, z)), x.dot(tangent_toward(z, y)), x.dot(y)});
  }
  return m;
}

VertexClassification classify_by_definition(const SphericalTriangle& t, int grid_res) {
  GridSearch g{t};
  for (int res : {8, 40, grid_res}) {
    if (res > grid_res && res != grid_res) continue;
    g.scan(res);
    if (g.best >= kNiceMargin) break;
  }
  if (g.best < kNiceMargin) {
    g.refine(1.0 / grid_res);
    g.refine(0.1 / grid_res);
  }
  if (g.best < kNiceMargin) g.polish();
  VertexClassification c;
  c.margin = g.best;
  c.verdict = g.best >= kNiceMargin ? Verdict::Nice : Verdict::Skew;
  c.borderline = std::abs(g.best) < kBorderlineMargin;
  if (c.verdict == Verdict::Nice) c.witness = g.best_x;
  return c;
}

VertexClassification classify_by_lemma(const SphericalTriangle& t) {
  for (int i = 0; i < 3; ++i) {
    check_not_borderline(t.side(i), kHalfPi, "a side length");
    check_not_borderline(t.angle(i), kHalfPi, "an angle");
  }
  VertexClassification c;
  c.verdict = Verdict::Nice;
  std::array<int, 3> p{0, 1, 2};
  do {
    const int a = p[0], b = p[1], cc = p[2];
    // Side opposite vertex k is side(k); angle at vertex k is angle(k).
    const double CA = t.side(b), BC = t.side(a), BA = t.side(cc);
    const double angA = t.angle(a), angB = t.angle(b), angC = t.angle(cc);
    LemmaRow row;
    row.labeling = p;
    row.holds[0] = CA > kHalfPi;
    row.holds[1] = BC < kHalfPi;
    row.holds[2] = angB > kHalfPi;
    row.holds[3] = angA < kHalfPi;
    row.holds[4] = angC < kHalfPi;
    row.holds[5] = BA > kHalfPi;
    // Right triangle ZBC (right angle at B): tan|CZ| = tan|BC| / cos(angle C).
    const double CZ = std::atan2(std::sin(BC), std::cos(BC) * std::cos(angC));
    if (CZ < CA) {
      check_not_borderline(CZ, CA, "the foot Z");
      const double AZ = CA - CZ;
      check_not_borderline(AZ, kHalfPi, "|AZ|");
      row.holds[6] = AZ > kHalfPi;
    } else {
      check_not_borderline(CZ, CA, "the foot Z");
    }
    if (row.all()) c.verdict = Verdict::Skew;
    c.conditions.push_back(row);
  } while (std::next_permutation(p.begin(), p.end()));
  return c;
}

}  // namespace polynormal
