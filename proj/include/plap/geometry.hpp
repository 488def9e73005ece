// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace plap {

using Vec3 = Eigen::Vector3d;

/// Raised for malformed meshes: open boundaries, degenerate simplices,
/// inverted cells, bad OFF input.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Edge-midpoint quadrature node. The sampled value of a P1 field is
/// (u[a] + u[b]) / 2; for n = 2 the edge is the facet itself.
struct QuadPoint {
  int a;
  int b;
  double weight;
};

/// Piecewise-linear element data shared by surface and volume meshes.
/// Element e has `nodes_per_element` vertices; `grads[e][k]` is the
/// (tangential, for surfaces) gradient of the k-th hat function.
struct P1Elements {
  int nodes_per_element = 0;
  std::vector<std::array<int, 4>> nodes;
  std::vector<double> measure;
  std::vector<std::array<Vec3, 4>> grads;

  std::size_t size() const { return nodes.size(); }
};

/// Vertex -> (element, local slot) incidence in CSR form. Used to gather
/// per-element contributions without write races.
struct Incidence {
  std::vector<int> offsets;
  std::vector<int> element;
  std::vector<int> slot;

  static Incidence build(const P1Elements& elems, int num_vertices);
};

/// Closed, consistently oriented codimension-1 mesh in R^n, n in {2, 3}.
/// Polygonal curves store facets as {i, j, -1}. Immutable once built.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;

  /// Validates closedness and orientation consistency, then orients the
  /// mesh so that the enclosed volume is positive.
  static SurfaceMesh build(int dim, std::vector<Vec3> vertices,
                           std::vector<std::array<int, 3>> facets);

  int dim() const { return dim_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_facets() const { return facets_.size(); }

  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const std::array<int, 3>> facets() const { return facets_; }
  std::span<const Vec3> facet_normals() const { return normals_; }
  std::span<const double> facet_measures() const { return measures_; }
  std::span<const QuadPoint> quadrature() const { return quad_; }
  const P1Elements& elements() const { return elems_; }
  const Incidence& incidence() const { return incidence_; }

  Vec3 quad_position(const QuadPoint& q) const {
    return 0.5 * (vertices_[q.a] + vertices_[q.b]);
  }
  Vec3 facet_centroid(std::size_t f) const;

  /// Returns a copy with every vertex moved by `offset`.
  SurfaceMesh translated(const Vec3& offset) const;
  /// Returns a copy with every vertex mapped through `rotation`.
  SurfaceMesh transformed(const Eigen::Matrix3d& rotation) const;

 private:
  void finalize();

  int dim_ = 0;
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> facets_;
  std::vector<Vec3> normals_;
  std::vector<double> measures_;
  std::vector<QuadPoint> quad_;
  P1Elements elems_;
  Incidence incidence_;
};

/// Simplicial mesh of the enclosed domain. `boundary_map[s]` is the volume
/// vertex carrying surface vertex s.
class VolumeMesh {
 public:
  VolumeMesh() = default;

  static VolumeMesh build(int dim, std::vector<Vec3> vertices,
                          std::vector<std::array<int, 4>> cells,
                          SurfaceMesh boundary, std::vector<int> boundary_map);

  int dim() const { return dim_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const std::array<int, 4>> cells() const { return cells_; }
  std::span<const double> cell_volumes() const { return elems_.measure; }
  const SurfaceMesh& boundary() const { return boundary_; }
  std::span<const int> boundary_map() const { return boundary_map_; }
  const P1Elements& elements() const { return elems_; }
  const Incidence& incidence() const { return incidence_; }

  /// Boundary quadrature with node indices in volume numbering.
  std::span<const QuadPoint> boundary_quadrature() const { return quad_; }

  double total_volume() const;

  /// True iff `x` lies in some cell, boundary included (barycentric
  /// coordinates >= -tol).
  bool contains(const Vec3& x, double tol = 1e-12) const;

 private:
  int dim_ = 0;
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> cells_;
  SurfaceMesh boundary_;
  std::vector<int> boundary_map_;
  std::vector<QuadPoint> quad_;
  P1Elements elems_;
  Incidence incidence_;
};

// ---------------------------------------------------------------------------
// Measures

double surface_measure(const SurfaceMesh& mesh);

/// Divergence-theorem volume (1/n) sum <x, nu> |f|; exact for polytopes.
double enclosed_volume(const SurfaceMesh& mesh);

/// Closed-form quantities. Valid for any n >= 2.
double unit_ball_volume(int n);
double ball_volume(int n, double radius);
double sphere_area(int n, double radius);
double equal_volume_radius(double volume, int n);
/// First nonzero Laplace eigenvalue of the round sphere S(R) in R^n.
double sphere_lambda1(int n, double radius);

/// Per-facet tangential gradient of a P1 field.
std::vector<Vec3> tangential_gradient(const SurfaceMesh& mesh,
                                      std::span<const double> values);

/// Facet-quadrature approximation of the integral of |x - q|^p over M.
double radial_moment(const SurfaceMesh& mesh, const Vec3& q, double p);

/// cos of the angle between the outward normal and the radial direction
/// from q, evaluated at each facet centroid.
std::vector<double> normal_radial_angle(const SurfaceMesh& mesh, const Vec3& q);

/// Nodal values of the coordinate function x_i.
std::vector<double> coordinate_field(std::span<const Vec3> vertices, int axis);

}  // namespace plap
