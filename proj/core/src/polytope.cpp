#include "polynormal/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "polynormal/errors.hpp"
#include "polynormal/linear_program.hpp"

namespace polynormal {
namespace {

Vec3 any_orthonormal(const Vec3& n) {
  const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (seed - seed.dot(n) * n).normalized();
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

Polytope Polytope::from_lattice(int dim, std::vector<Vec3> vertices, std::vector<Halfspace> facets,
                                std::vector<std::vector<int>> facet_cycles, const Tolerance& tol) {
  if (dim != 2 && dim != 3) throw DegenerateInput("dimension must be 2 or 3");
  if (facets.size() != facet_cycles.size())
    throw DegenerateInput("facet planes and facet cycles disagree in number");

  Polytope P;
  P.dim_ = dim;
  P.vertices_ = std::move(vertices);
  P.facets_ = std::move(facets);
  for (auto& h : P.facets_) {
    const double len = h.normal.norm();
    if (len <= 0) throw DegenerateInput("zero facet normal");
    h.normal /= len;
    h.offset /= len;
  }
  const int nv = P.num_vertices();
  const int nf = P.num_facets();

  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      P.diameter_ = std::max(P.diameter_, (P.vertices_[i] - P.vertices_[j]).norm());
  if (P.diameter_ <= 0) throw DegenerateInput("polytope has no extent");
  const double eps = 10.0 * tol.geometry * P.diameter_;

  P.faces_.assign(dim, {});
  auto& vfaces = P.faces_[0];
  vfaces.resize(nv);
  for (int v = 0; v < nv; ++v) {
    vfaces[v].dim = 0;
    vfaces[v].vertex_ids = {v};
    vfaces[v].affine_point = P.vertices_[v];
  }

  if (dim == 3) {
    std::map<std::pair<int, int>, int> edge_id;
    auto& efaces = P.faces_[1];
    auto& ffaces = P.faces_[2];
    ffaces.resize(nf);
    for (int f = 0; f < nf; ++f) {
      const auto& cyc = facet_cycles[f];
      if (cyc.size() < 3) throw DegenerateInput("facet with fewer than three vertices");
      ffaces[f].dim = 2;
      ffaces[f].vertex_ids = cyc;
      ffaces[f].facet_ids = {f};
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        const int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
        if (a < 0 || a >= nv || b < 0 || b >= nv || a == b)
          throw DegenerateInput("facet cycle references an invalid vertex");
        const auto key = std::minmax(a, b);
        auto [it, fresh] = edge_id.try_emplace(key, static_cast<int>(efaces.size()));
        if (fresh) {
          Face e;
          e.dim = 1;
          e.vertex_ids = {key.first, key.second};
          efaces.push_back(std::move(e));
        }
        efaces[it->second].facet_ids.push_back(f);
        ffaces[f].edge_ids.push_back(it->second);
      }
    }
    for (int e = 0; e < static_cast<int>(efaces.size()); ++e) {
      if (efaces[e].facet_ids.size() != 2)
        throw InvariantViolation("edge " + std::to_string(e) + " is not shared by exactly two facets");
      for (int v : efaces[e].vertex_ids) vfaces[v].edge_ids.push_back(e);
    }
    for (int f = 0; f < nf; ++f)
      for (int v : ffaces[f].vertex_ids) vfaces[v].facet_ids.push_back(f);
    const int euler = nv - static_cast<int>(efaces.size()) + nf;
    if (euler != 2)
      throw InvariantViolation("Euler formula V - E + F = 2 violated (got " + std::to_string(euler) + ")");
  } else {
    auto& efaces = P.faces_[1];
    efaces.resize(nf);
    for (int f = 0; f < nf; ++f) {
      const auto& cyc = facet_cycles[f];
      if (cyc.size() != 2) throw DegenerateInput("polygon edge must have two endpoints");
      efaces[f].dim = 1;
      efaces[f].vertex_ids = cyc;
      efaces[f].facet_ids = {f};
      for (int v : cyc) {
        if (v < 0 || v >= nv) throw DegenerateInput("edge references an invalid vertex");
        vfaces[v].edge_ids.push_back(f);
        vfaces[v].facet_ids.push_back(f);
      }
    }
  }

  for (int v = 0; v < nv; ++v) {
    if (static_cast<int>(vfaces[v].facet_ids.size()) < dim)
      throw DegenerateInput("vertex " + std::to_string(v) + " lies on fewer than dim facets");
    for (int f = 0; f < nf; ++f)
      if (P.facets_[f].signed_distance(P.vertices_[v]) > eps)
        throw InvariantViolation("vertex " + std::to_string(v) + " violates facet " + std::to_string(f));
  }

  for (int d = 0; d < dim; ++d) {
    for (Face& F : P.faces_[d]) {
      Vec3 c = Vec3::Zero();
      for (int v : F.vertex_ids) c += P.vertices_[v];
      F.affine_point = c / static_cast<double>(F.vertex_ids.size());
      std::sort(F.facet_ids.begin(), F.facet_ids.end());
      std::sort(F.edge_ids.begin(), F.edge_ids.end());
      for (int f : F.facet_ids) {
        F.cone_generators.push_back(-P.facets_[f].normal);
        for (int v : F.vertex_ids)
          if (std::abs(P.facets_[f].signed_distance(P.vertices_[v])) > eps)
            throw InvariantViolation("vertex " + std::to_string(v) + " is off the plane of facet " +
                                     std::to_string(f));
      }
      if (d == 1) {
        F.tangent_basis = {(P.vertices_[F.vertex_ids[1]] - P.vertices_[F.vertex_ids[0]]).normalized()};
      } else if (d == 2) {
        const Vec3& n = P.facets_[F.facet_ids.front()].normal;
        const Vec3 e1 = any_orthonormal(n);
        F.tangent_basis = {e1, n.cross(e1)};
      }
    }
  }
  // Facet edge lists must stay in cyclic order; undo the sort above.
  if (dim == 3) {
    for (int f = 0; f < nf; ++f) {
      Face& F = P.faces_[2][f];
      F.edge_ids.clear();
      const auto& cyc = F.vertex_ids;
      for (std::size_t i = 0; i < cyc.size(); ++i)
        F.edge_ids.push_back(P.edge_between(cyc[i], cyc[(i + 1) % cyc.size()]));
    }
  }
  return P;
}

int Polytope::num_faces() const {
  int n = 0;
  for (const auto& fs : faces_) n += static_cast<int>(fs.size());
  return n;
}

Vec3 Polytope::vertex_centroid() const {
  Vec3 c = Vec3::Zero();
  for (const Vec3& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

double Polytope::volume() const {
  const Vec3 c = vertex_centroid();
  double total = 0.0;
  if (dim_ == 2) {
    for (const Face& e : faces_[1]) {
      const Vec3 a = vertices_[e.vertex_ids[0]] - c;
      const Vec3 b = vertices_[e.vertex_ids[1]] - c;
      total += 0.5 * (a.x() * b.y() - a.y() * b.x());
    }
    return total;
  }
  for (int f = 0; f < num_facets(); ++f) {
    const auto& cyc = faces_[2][f].vertex_ids;
    Vec3 area = Vec3::Zero();
    for (std::size_t i = 0; i < cyc.size(); ++i)
      area += vertices_[cyc[i]].cross(vertices_[cyc[(i + 1) % cyc.size()]]);
    const double a = 0.5 * area.dot(facets_[f].normal);
    total += a * (facets_[f].offset - facets_[f].normal.dot(c)) / 3.0;
  }
  return total;
}

bool Polytope::is_simple() const {
  return std::all_of(faces_[0].begin(), faces_[0].end(),
                     [&](const Face& v) { return static_cast<int>(v.edge_ids.size()) == dim_; });
}

int Polytope::edge_between(int u, int v) const {
  for (int e : faces_[0][u].edge_ids) {
    const auto& ids = faces_[1][e].vertex_ids;
    if ((ids[0] == u && ids[1] == v) || (ids[0] == v && ids[1] == u)) return e;
  }
  return -1;
}

Polytope polytope_from_halfspaces(std::span<const Halfspace> input, int dim, const Tolerance& tol) {
  if (dim != 2 && dim != 3) throw DegenerateInput("dimension must be 2 or 3");
  std::vector<Halfspace> planes;
  double offset_scale = 1.0;
  for (Halfspace h : input) {
    if (dim == 2) h.normal.z() = 0.0;
    const double len = h.normal.norm();
    if (len <= 0) throw DegenerateInput("zero normal in half-space list");
    h.normal /= len;
    h.offset /= len;
    offset_scale = std::max(offset_scale, std::abs(h.offset));
    planes.push_back(h);
  }
  const int m = static_cast<int>(planes.size());
  if (m < dim + 1) throw Unbounded("fewer than dim + 1 half-spaces");

  // Inscribed-ball LP with free center (split into positive and negative parts).
  Eigen::MatrixXd A(m, 2 * dim + 1);
  Eigen::VectorXd b(m), c = Eigen::VectorXd::Zero(2 * dim + 1);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < dim; ++k) {
      A(i, k) = planes[i].normal(k);
      A(i, dim + k) = -planes[i].normal(k);
    }
    A(i, 2 * dim) = 1.0;
    b(i) = planes[i].offset;
  }
  c(2 * dim) = 1.0;
  const auto ball = lp::maximize(A, b, c);
  if (ball.status == lp::Status::Infeasible) throw Empty("half-space intersection is empty");
  if (ball.status == lp::Status::Unbounded) throw Unbounded("half-space intersection is unbounded");
  if (ball.objective <= tol.geometry * offset_scale)
    throw Empty("half-space intersection has empty interior");

  const double eps = tol.geometry * offset_scale;
  std::vector<Vec3> points;
  auto feasible = [&](const Vec3& x) {
    return std::all_of(planes.begin(), planes.end(),
                       [&](const Halfspace& h) { return h.signed_distance(x) <= 10 * eps; });
  };
  if (dim == 3) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          Eigen::Matrix3d M;
          M.row(0) = planes[i].normal;
          M.row(1) = planes[j].normal;
          M.row(2) = planes[k].normal;
          if (std::abs(M.determinant()) < 1e-12) continue;
          const Vec3 x = M.partialPivLu().solve(Vec3(planes[i].offset, planes[j].offset, planes[k].offset));
          if (feasible(x)) points.push_back(x);
        }
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        Eigen::Matrix2d M;
        M << planes[i].normal.x(), planes[i].normal.y(), planes[j].normal.x(), planes[j].normal.y();
        if (std::abs(M.determinant()) < 1e-12) continue;
        const Vec2 x = M.partialPivLu().solve(Vec2(planes[i].offset, planes[j].offset));
        if (feasible(Vec3(x.x(), x.y(), 0.0))) points.emplace_back(x.x(), x.y(), 0.0);
      }
  }
  if (static_cast<int>(points.size()) < dim + 1) throw Unbounded("half-space intersection is unbounded");

  Polytope P = [&] {
    if (dim == 3) return hull_from_points(points, tol);
    std::vector<Vec2> flat;
    for (const Vec3& p : points) flat.emplace_back(p.x(), p.y());
    return polygon_from_points(flat, tol);
  }();

  // conv(vertices) equals the intersection iff each of its facets lies on an
  // input plane; an unbounded intersection leaves a spurious cap facet.
  const double match = 1e3 * tol.geometry * std::max(P.diameter(), offset_scale);
  for (const Halfspace& h : P.facets()) {
    const bool found = std::any_of(planes.begin(), planes.end(), [&](const Halfspace& g) {
      return g.normal.dot(h.normal) > 1.0 - 1e-9 && std::abs(g.offset - h.offset) <= match;
    });
    if (!found) throw Unbounded("half-space intersection is unbounded");
  }
  return P;
}

std::vector<Vec3> inner_normal_cone(const Polytope& P, FaceRef face) {
  if (face.dim < 0 || face.dim >= P.dim() || face.id < 0 ||
      face.id >= static_cast<int>(P.faces(face.dim).size()))
    throw std::out_of_range("invalid face reference");
  return P.face(face).cone_generators;
}

ConeFit fit_cone(std::span<const Vec3> generators, const Vec3& x) {
  // Lawson-Hanson active-set NNLS; the problems here have at most a handful
  // of generators.
  const int k = static_cast<int>(generators.size());
  Eigen::Matrix<double, 3, Eigen::Dynamic> G(3, k);
  for (int j = 0; j < k; ++j) G.col(j) = generators[j];
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(k);
  std::vector<bool> passive(k, false);
  const double eps = 1e-14 * std::max(1.0, x.norm());

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<int> idx;
    for (int j = 0; j < k; ++j)
      if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd Gp(3, idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) Gp.col(t) = G.col(idx[t]);
    const Eigen::VectorXd sp = Gp.colPivHouseholderQr().solve(x);
    s.setZero(k);
    for (std::size_t t = 0; t < idx.size(); ++t) s(idx[t]) = sp(t);
  };

  for (int outer = 0; outer < 3 * k + 3; ++outer) {
    const Eigen::VectorXd w = G.transpose() * (x - G * lambda);
    int best = -1;
    for (int j = 0; j < k; ++j)
      if (!passive[j] && w(j) > eps && (best < 0 || w(j) > w(best))) best = j;
    if (best < 0) break;
    passive[best] = true;
    Eigen::VectorXd s;
    for (int inner = 0; inner < k + 1; ++inner) {
      solve_passive(s);
      double alpha = 1.0;
      int blocking = -1;
      for (int j = 0; j < k; ++j) {
        if (passive[j] && s(j) <= 0) {
          const double a = lambda(j) / (lambda(j) - s(j));
          if (a < alpha) alpha = a, blocking = j;
        }
      }
      if (blocking < 0) {
        lambda = s;
        break;
      }
      lambda += alpha * (s - lambda);
      for (int j = 0; j < k; ++j)
        if (passive[j] && lambda(j) <= eps) passive[j] = false, lambda(j) = 0.0;
    }
  }
  return {lambda, (x - G * lambda).norm()};
}

InscribedSphere chebyshev_center(const Polytope& P, const Tolerance& tol) {
  const int dim = P.dim();
  const int m = P.num_facets();
  // Shift so P sits strictly inside the positive orthant: the bounds x >= 0
  // are then never tight and the simplex vertex is tangent to dim + 1 facets.
  Vec3 lo = P.vertex(0);
  for (const Vec3& v : P.vertices()) lo = lo.cwiseMin(v);
  const Vec3 origin = lo - Vec3::Constant(P.diameter());

  Eigen::MatrixXd A(m, dim + 1);
  Eigen::VectorXd b(m), c = Eigen::VectorXd::Zero(dim + 1);
  for (int i = 0; i < m; ++i) {
    const Halfspace& h = P.facets()[i];
    for (int k = 0; k < dim; ++k) A(i, k) = h.normal(k);
    A(i, dim) = 1.0;
    b(i) = h.offset - h.normal.dot(origin);
  }
  c(dim) = 1.0;
  const auto sol = lp::maximize(A, b, c);
  if (sol.status != lp::Status::Optimal) throw InvariantViolation("inscribed-ball LP failed on a valid polytope");

  InscribedSphere s;
  s.center = origin;
  for (int k = 0; k < dim; ++k) s.center(k) += sol.x(k);
  s.radius = sol.x(dim);
  const double eps = 10.0 * tol.geometry * P.diameter();
  for (int i = 0; i < m; ++i)
    if (std::abs(-P.facets()[i].signed_distance(s.center) - s.radius) <= eps) s.tangent_facets.push_back(i);
  return s;
}

double dihedral_angle(const Polytope& P, int edge) {
  if (P.dim() != 3) throw ValidationError("dihedral angles are undefined for polygons");
  const Face& e = P.faces(1).at(edge);
  const Vec3& n1 = P.facets()[e.facet_ids[0]].normal;
  const Vec3& n2 = P.facets()[e.facet_ids[1]].normal;
  return std::numbers::pi - angle_between(n1, n2);
}

double planar_angle(const Polytope& P, int facet, int vertex) {
  if (P.dim() != 3) throw ValidationError("planar facet angles are undefined for polygons");
  const auto& cyc = P.faces(2).at(facet).vertex_ids;
  const auto it = std::find(cyc.begin(), cyc.end(), vertex);
  if (it == cyc.end()) throw std::out_of_range("vertex is not on the facet");
  const std::size_t i = it - cyc.begin();
  const Vec3& v = P.vertex(vertex);
  const Vec3& prev = P.vertex(cyc[(i + cyc.size() - 1) % cyc.size()]);
  const Vec3& next = P.vertex(cyc[(i + 1) % cyc.size()]);
  return angle_between(prev - v, next - v);
}

double polygon_angle(const Polytope& P, int vertex) {
  if (P.dim() != 2) throw ValidationError("polygon_angle needs a polygon");
  const Face& v = P.faces(0).at(vertex);
  Vec3 dirs[2];
  for (int k = 0; k < 2; ++k) {
    const auto& ids = P.faces(1)[v.edge_ids[k]].vertex_ids;
    const int other = ids[0] == vertex ? ids[1] : ids[0];
    dirs[k] = P.vertex(other) - P.vertex(vertex);
  }
  return angle_between(dirs[0], dirs[1]);
}

bool contains_interior(const Polytope& P, const Vec3& y, double tol) {
  if (P.dim() == 2 && std::abs(y.z()) > tol) return false;
  return std::all_of(P.facets().begin(), P.facets().end(),
                     [&](const Halfspace& h) { return h.signed_distance(y) <= -tol; });
}

}  // namespace polynormal
