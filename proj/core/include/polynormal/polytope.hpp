#pragma once

#include <compare>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "polynormal/tolerance.hpp"

namespace polynormal {

/// Points and directions. Polygons are stored in the z = 0 plane.
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Closed half-space <normal, x> <= offset with a unit normal.
struct Halfspace {
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;

  double signed_distance(const Vec3& x) const { return normal.dot(x) - offset; }
};

struct FaceRef {
  int dim = 0;
  int id = 0;

  friend auto operator<=>(const FaceRef&, const FaceRef&) = default;
};

/// One face of the lattice. Vertex, edge and facet records share the layout;
/// unused fields stay empty.
struct Face {
  int dim = 0;
  /// Facets of a 3-polytope list their vertices counter-clockwise as seen
  /// from outside; edges list their two endpoints.
  std::vector<int> vertex_ids;
  /// Vertex: incident edges. 3-D facet: boundary edges, edge i joining
  /// vertex_ids[i] and vertex_ids[i + 1].
  std::vector<int> edge_ids;
  /// Facets containing the face (a facet contains itself).
  std::vector<int> facet_ids;
  /// Point in the relative interior (vertex centroid).
  Vec3 affine_point = Vec3::Zero();
  /// Orthonormal basis of the direction space of aff(F).
  std::vector<Vec3> tangent_basis;
  /// Extreme rays of the inner normal cone: negated outward facet normals.
  std::vector<Vec3> cone_generators;
};

/// Immutable convex polytope with its complete face lattice, in dimension 2
/// (polygon in the z = 0 plane) or 3.
class Polytope {
 public:
  /// Assembles and validates the lattice. `facet_cycles[i]` lists the
  /// vertices of facet i: counter-clockwise from outside in 3-D, the two
  /// endpoints (counter-clockwise order) in 2-D.
  static Polytope from_lattice(int dim, std::vector<Vec3> vertices, std::vector<Halfspace> facets,
                               std::vector<std::vector<int>> facet_cycles,
                               const Tolerance& tol = {});

  int dim() const { return dim_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const Vec3& vertex(int i) const { return vertices_[i]; }
  const std::vector<Halfspace>& facets() const { return facets_; }

  /// Faces of dimension d, 0 <= d < dim. In 2-D the edges are the facets,
  /// and faces(1)[i] corresponds to facets()[i].
  const std::vector<Face>& faces(int d) const { return faces_[d]; }
  const Face& face(FaceRef ref) const { return faces_[ref.dim][ref.id]; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(faces_[1].size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }
  /// Number of proper faces of every dimension (upper bound on n(P, y)).
  int num_faces() const;

  /// Largest vertex-to-vertex distance; the unit for relative tolerances.
  double diameter() const { return diameter_; }
  Vec3 vertex_centroid() const;
  /// Volume in 3-D, area in 2-D.
  double volume() const;
  bool is_simple() const;
  /// Edge joining two vertices, or -1.
  int edge_between(int u, int v) const;

 private:
  Polytope() = default;

  int dim_ = 3;
  std::vector<Vec3> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<std::vector<Face>> faces_;
  double diameter_ = 0.0;
};

/// Convex hull of a 3-D point set. Interior points and points on edges or in
/// facet interiors are dropped. Throws DegenerateInput if the points are
/// coplanar.
Polytope hull_from_points(std::span<const Vec3> points, const Tolerance& tol = {});

/// Convex hull of a planar point set. Throws DegenerateInput if collinear.
Polytope polygon_from_points(std::span<const Vec2> points, const Tolerance& tol = {});

/// Bounded intersection of half-spaces (normals need not be unit length).
/// Redundant half-spaces are dropped. Throws Empty or Unbounded.
Polytope polytope_from_halfspaces(std::span<const Halfspace> planes, int dim = 3,
                                  const Tolerance& tol = {});

/// Generators of the inner normal cone Cone(F).
std::vector<Vec3> inner_normal_cone(const Polytope& P, FaceRef face);

/// Nonnegative least-squares fit of x by cone generators: the cone contains
/// x iff `residual` vanishes.
struct ConeFit {
  Eigen::VectorXd coefficients;
  double residual = 0.0;
};
ConeFit fit_cone(std::span<const Vec3> generators, const Vec3& x);

struct InscribedSphere {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  /// Facets touching the sphere. The center is a vertex of the LP feasible
  /// region, so at least dim + 1 facets are listed.
  std::vector<int> tangent_facets;
};

/// Largest inscribed ball, via max r s.t. <n_i, y> + r <= b_i.
InscribedSphere chebyshev_center(const Polytope& P, const Tolerance& tol = {});

/// Interior dihedral angle at a 3-D edge, in (0, pi).
double dihedral_angle(const Polytope& P, int edge);
/// Angle of a 3-D facet polygon at one of its vertices, in (0, pi).
double planar_angle(const Polytope& P, int facet, int vertex);
/// Interior angle of a polygon at a vertex, in (0, pi).
double polygon_angle(const Polytope& P, int vertex);

/// True iff <n_i, y> <= b_i - tol for every facet.
bool contains_interior(const Polytope& P, const Vec3& y, double tol);

}  // namespace polynormal
