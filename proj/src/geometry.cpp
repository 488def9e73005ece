// SPDX-License-Identifier: Apache-2.0
#include "plap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

namespace plap {

namespace {

constexpr double kDegenerate = 1e-14;

std::string edge_name(int a, int b) {
  std::ostringstream os;
  os << "(" << a << ", " << b << ")";
  return os.str();
}

void check_closed_3d(std::span<const std::array<int, 3>> facets) {
  // Directed edge -> count. A closed, consistently oriented surface uses every
  // directed edge once and its reverse once.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : facets) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k];
      const int b = f[(k + 1) % 3];
      if (++directed[{a, b}] > 1) {
        throw MeshError("inconsistent orientation or non-manifold edge " +
                        edge_name(std::min(a, b), std::max(a, b)));
      }
    }
  }
  for (const auto& [e, count] : directed) {
    if (!directed.contains({e.second, e.first})) {
      throw MeshError("mesh is not closed: boundary edge " +
                      edge_name(std::min(e.first, e.second),
                                std::max(e.first, e.second)));
    }
  }
}

void check_closed_2d(std::span<const std::array<int, 3>> facets,
                     std::size_t num_vertices) {
  std::vector<int> starts(num_vertices, 0);
  std::vector<int> ends(num_vertices, 0);
  for (const auto& f : facets) {
    ++starts[f[0]];
    ++ends[f[1]];
  }
  for (std::size_t v = 0; v < num_vertices; ++v) {
    if (starts[v] + ends[v] == 0) continue;
    if (starts[v] != 1 || ends[v] != 1) {
      std::ostringstream os;
      os << "curve is not closed or not consistently oriented at vertex " << v;
      throw MeshError(os.str());
    }
  }
}

double signed_volume(int dim, std::span<const Vec3> x,
                     std::span<const std::array<int, 3>> facets) {
  double vol = 0.0;
  if (dim == 2) {
    for (const auto& f : facets) {
      const Vec3& a = x[f[0]];
      const Vec3& b = x[f[1]];
      vol += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * vol;
  }
  for (const auto& f : facets) {
    vol += x[f[0]].dot(x[f[1]].cross(x[f[2]]));
  }
  return vol / 6.0;
}

// Hat-function gradients of a triangle lying in the plane with unit normal nu.
std::array<Vec3, 4> triangle_grads(const Vec3& x0, const Vec3& x1,
                                   const Vec3& x2, const Vec3& nu,
                                   double area) {
  const double s = 1.0 / (2.0 * area);
  return {nu.cross(x2 - x1) * s, nu.cross(x0 - x2) * s, nu.cross(x1 - x0) * s,
          Vec3::Zero()};
}

}  // namespace

Incidence Incidence::build(const P1Elements& elems, int num_vertices) {
  Incidence inc;
  inc.offsets.assign(num_vertices + 1, 0);
  const int k = elems.nodes_per_element;
  for (const auto& nodes : elems.nodes) {
    for (int j = 0; j < k; ++j) ++inc.offsets[nodes[j] + 1];
  }
  for (int v = 0; v < num_vertices; ++v) inc.offsets[v + 1] += inc.offsets[v];
  inc.element.resize(inc.offsets.back());
  inc.slot.resize(inc.offsets.back());
  std::vector<int> cursor(inc.offsets.begin(), inc.offsets.end() - 1);
  for (std::size_t e = 0; e < elems.nodes.size(); ++e) {
    for (int j = 0; j < k; ++j) {
      const int pos = cursor[elems.nodes[e][j]]++;
      inc.element[pos] = static_cast<int>(e);
      inc.slot[pos] = j;
    }
  }
  return inc;
}

// ---------------------------------------------------------------------------
// SurfaceMesh

SurfaceMesh SurfaceMesh::build(int dim, std::vector<Vec3> vertices,
                               std::vector<std::array<int, 3>> facets) {
  if (dim != 2 && dim != 3) {
    throw MeshError("surface meshes support ambient dimension 2 or 3 only");
  }
  if (facets.empty()) throw MeshError("mesh has no facets");
  const int nv = static_cast<int>(vertices.size());
  std::vector<char> used(nv, 0);
  for (auto& f : facets) {
    if (dim == 2) f[2] = -1;
    for (int k = 0; k < dim; ++k) {
      if (f[k] < 0 || f[k] >= nv) {
        throw MeshError("facet references vertex " + std::to_string(f[k]) +
                        " out of range");
      }
      used[f[k]] = 1;
    }
    if (f[0] == f[1] || (dim == 3 && (f[1] == f[2] || f[0] == f[2]))) {
      throw MeshError("facet with repeated vertex");
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (!used[v]) throw MeshError("unreferenced vertex " + std::to_string(v));
  }
  if (dim == 2) {
    for (auto& x : vertices) x.z() = 0.0;
    check_closed_2d(facets, vertices.size());
  } else {
    check_closed_3d(facets);
  }

  if (signed_volume(dim, vertices, facets) < 0.0) {
    for (auto& f : facets) {
      if (dim == 2) {
        std::swap(f[0], f[1]);
      } else {
        std::swap(f[1], f[2]);
      }
    }
  }

  SurfaceMesh mesh;
  mesh.dim_ = dim;
  mesh.vertices_ = std::move(vertices);
  mesh.facets_ = std::move(facets);
  mesh.finalize();
  if (enclosed_volume(mesh) <= 0.0) {
    throw MeshError("mesh encloses no volume");
  }
  return mesh;
}

void SurfaceMesh::finalize() {
  const std::size_t nf = facets_.size();
  normals_.resize(nf);
  measures_.resize(nf);
  elems_ = P1Elements{};
  elems_.nodes_per_element = dim_;
  elems_.nodes.resize(nf);
  elems_.measure.resize(nf);
  elems_.grads.resize(nf);
  quad_.clear();
  quad_.reserve(dim_ == 2 ? nf : 3 * nf);

  double scale = 0.0;
  for (const auto& x : vertices_) scale = std::max(scale, x.norm());
  scale = std::max(scale, 1.0);

  for (std::size_t f = 0; f < nf; ++f) {
    const auto& idx = facets_[f];
    elems_.nodes[f] = {idx[0], idx[1], idx[2], -1};
    if (dim_ == 2) {
      const Vec3 t = vertices_[idx[1]] - vertices_[idx[0]];
      const double len = t.norm();
      if (len <= kDegenerate * scale) {
        throw MeshError("degenerate facet " + std::to_string(f));
      }
      const Vec3 tu = t / len;
      normals_[f] = Vec3(tu.y(), -tu.x(), 0.0);
      measures_[f] = len;
      elems_.grads[f] = {-tu / len, tu / len, Vec3::Zero(), Vec3::Zero()};
      quad_.push_back({idx[0], idx[1], len});
    } else {
      const Vec3& x0 = vertices_[idx[0]];
      const Vec3& x1 = vertices_[idx[1]];
      const Vec3& x2 = vertices_[idx[2]];
      const Vec3 c = (x1 - x0).cross(x2 - x0);
      const double twice_area = c.norm();
      if (twice_area <= kDegenerate * scale * scale) {
        throw MeshError("degenerate facet " + std::to_string(f));
      }
      const double area = 0.5 * twice_area;
      normals_[f] = c / twice_area;
      measures_[f] = area;
      elems_.grads[f] = triangle_grads(x0, x1, x2, normals_[f], area);
      const double w = area / 3.0;
      quad_.push_back({idx[0], idx[1], w});
      quad_.push_back({idx[1], idx[2], w});
      quad_.push_back({idx[2], idx[0], w});
    }
    elems_.measure[f] = measures_[f];
  }
  incidence_ = Incidence::build(elems_, static_cast<int>(vertices_.size()));
}

Vec3 SurfaceMesh::facet_centroid(std::size_t f) const {
  const auto& idx = facets_[f];
  Vec3 c = Vec3::Zero();
  for (int k = 0; k < dim_; ++k) c += vertices_[idx[k]];
  return c / dim_;
}

SurfaceMesh SurfaceMesh::translated(const Vec3& offset) const {
  std::vector<Vec3> x(vertices_.begin(), vertices_.end());
  Vec3 o = offset;
  if (dim_ == 2) o.z() = 0.0;
  for (auto& v : x) v += o;
  return build(dim_, std::move(x), facets_);
}

SurfaceMesh SurfaceMesh::transformed(const Eigen::Matrix3d& rotation) const {
  std::vector<Vec3> x(vertices_.begin(), vertices_.end());
  for (auto& v : x) v = rotation * v;
  return build(dim_, std::move(x), facets_);
}

// ---------------------------------------------------------------------------
// VolumeMesh

VolumeMesh VolumeMesh::build(int dim, std::vector<Vec3> vertices,
                             std::vector<std::array<int, 4>> cells,
                             SurfaceMesh boundary,
                             std::vector<int> boundary_map) {
  if (dim != 2 && dim != 3) {
    throw MeshError("volume meshes support ambient dimension 2 or 3 only");
  }
  if (boundary.dim() != dim) throw MeshError("boundary dimension mismatch");
  if (boundary_map.size() != boundary.num_vertices()) {
    throw MeshError("boundary map size does not match boundary vertex count");
  }
  const int nv = static_cast<int>(vertices.size());
  const int k = dim + 1;
  for (std::size_t s = 0; s < boundary_map.size(); ++s) {
    const int v = boundary_map[s];
    if (v < 0 || v >= nv) throw MeshError("boundary map index out of range");
    if ((vertices[v] - boundary.vertices()[s]).norm() > 1e-12 * (1.0 + vertices[v].norm())) {
      throw MeshError("boundary vertex " + std::to_string(s) +
                      " does not coincide with its volume vertex");
    }
  }

  VolumeMesh mesh;
  mesh.dim_ = dim;
  auto& el = mesh.elems_;
  el.nodes_per_element = k;
  el.nodes.resize(cells.size());
  el.measure.resize(cells.size());
  el.grads.resize(cells.size());

  double scale = 1.0;
  for (const auto& x : vertices) scale = std::max(scale, x.norm());

  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& cell = cells[c];
    for (int j = 0; j < k; ++j) {
      if (cell[j] < 0 || cell[j] >= nv) {
        throw MeshError("cell references vertex out of range");
      }
    }
    if (dim == 2) {
      cell[3] = -1;
      const Vec3& x0 = vertices[cell[0]];
      const Vec3& x1 = vertices[cell[1]];
      const Vec3& x2 = vertices[cell[2]];
      const double area = 0.5 * (x1 - x0).cross(x2 - x0).z();
      if (area <= kDegenerate * scale * scale) {
        throw MeshError("inverted or degenerate cell " + std::to_string(c));
      }
      el.measure[c] = area;
      el.grads[c] = triangle_grads(x0, x1, x2, Vec3::UnitZ(), area);
    } else {
      Eigen::Matrix3d J;
      J.col(0) = vertices[cell[1]] - vertices[cell[0]];
      J.col(1) = vertices[cell[2]] - vertices[cell[0]];
      J.col(2) = vertices[cell[3]] - vertices[cell[0]];
      const double det = J.determinant();
      if (det <= kDegenerate * scale * scale * scale) {
        throw MeshError("inverted or degenerate cell " + std::to_string(c));
      }
      const Eigen::Matrix3d Jinv = J.inverse();
      const Vec3 g1 = Jinv.row(0).transpose();
      const Vec3 g2 = Jinv.row(1).transpose();
      const Vec3 g3 = Jinv.row(2).transpose();
      el.measure[c] = det / 6.0;
      el.grads[c] = {-(g1 + g2 + g3), g1, g2, g3};
    }
    el.nodes[c] = cell;
  }

  // Each boundary facet must be a facet of exactly one cell, and every
  // unshared cell facet must be a boundary facet.
  std::map<std::array<int, 3>, int> face_count;
  for (const auto& cell : cells) {
    for (int skip = 0; skip < k; ++skip) {
      std::array<int, 3> face{-1, -1, -1};
      int m = 0;
      for (int j = 0; j < k; ++j) {
        if (j != skip) face[m++] = cell[j];
      }
      std::sort(face.begin(), face.begin() + dim);
      ++face_count[face];
    }
  }
  std::size_t boundary_faces = 0;
  for (const auto& f : boundary.facets()) {
    std::array<int, 3> face{-1, -1, -1};
    for (int j = 0; j < dim; ++j) face[j] = boundary_map[f[j]];
    std::sort(face.begin(), face.begin() + dim);
    auto it = face_count.find(face);
    if (it == face_count.end() || it->second != 1) {
      throw MeshError("boundary facet does not match exactly one cell facet");
    }
    ++boundary_faces;
  }
  std::size_t exposed = 0;
  for (const auto& [face, count] : face_count) {
    if (count == 1) ++exposed;
    if (count > 2) throw MeshError("non-manifold cell facet");
  }
  if (exposed != boundary_faces) {
    throw MeshError("volume mesh has exposed facets not on the boundary");
  }

  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);
  mesh.boundary_map_ = std::move(boundary_map);
  mesh.boundary_ = std::move(boundary);
  mesh.incidence_ = Incidence::build(el, nv);
  for (const auto& q : mesh.boundary_.quadrature()) {
    mesh.quad_.push_back(
        {mesh.boundary_map_[q.a], mesh.boundary_map_[q.b], q.weight});
  }

  const double enclosed = enclosed_volume(mesh.boundary_);
  if (std::abs(mesh.total_volume() - enclosed) > 1e-9 * enclosed) {
    throw MeshError("cells overlap or leave gaps: cell volume " +
                    std::to_string(mesh.total_volume()) + " vs enclosed " +
                    std::to_string(enclosed));
  }
  return mesh;
}

double VolumeMesh::total_volume() const {
  double v = 0.0;
  for (double m : elems_.measure) v += m;
  return v;
}

bool VolumeMesh::contains(const Vec3& x, double tol) const {
  const int k = dim_ + 1;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const Vec3 d = x - vertices_[cells_[c][0]];
    double rest = 1.0;
    bool inside = true;
    for (int j = 1; j < k && inside; ++j) {
      const double lam = elems_.grads[c][j].dot(d);
      rest -= lam;
      inside = lam >= -tol;
    }
    if (inside && rest >= -tol) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Measures

double surface_measure(const SurfaceMesh& mesh) {
  double s = 0.0;
  for (double m : mesh.facet_measures()) s += m;
  return s;
}

double enclosed_volume(const SurfaceMesh& mesh) {
  return signed_volume(mesh.dim(), mesh.vertices(), mesh.facets());
}

double unit_ball_volume(int n) {
  // Closed forms keep the common dimensions exact to the last bit.
  if (n == 2) return std::numbers::pi;
  if (n == 3) return 4.0 * std::numbers::pi / 3.0;
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double ball_volume(int n, double radius) {
  return unit_ball_volume(n) * std::pow(radius, n);
}

double sphere_area(int n, double radius) {
  // |S^{n-1}| = n * omega_n.
  if (n == 2) return 2.0 * std::numbers::pi * radius;
  if (n == 3) return 4.0 * std::numbers::pi * radius * radius;
  return n * unit_ball_volume(n) * std::pow(radius, n - 1);
}

double equal_volume_radius(double volume, int n) {
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
  return std::pow(volume / unit_ball_volume(n), 1.0 / n);
}

double sphere_lambda1(int n, double radius) {
  return (n - 1) / (radius * radius);
}

std::vector<Vec3> tangential_gradient(const SurfaceMesh& mesh,
                                      std::span<const double> values) {
  if (values.size() != mesh.num_vertices()) {
    throw std::invalid_argument("field size does not match vertex count");
  }
  const auto& el = mesh.elements();
  std::vector<Vec3> g(el.size(), Vec3::Zero());
  for (std::size_t f = 0; f < el.size(); ++f) {
    for (int j = 0; j < el.nodes_per_element; ++j) {
      g[f] += values[el.nodes[f][j]] * el.grads[f][j];
    }
  }
  return g;
}

double radial_moment(const SurfaceMesh& mesh, const Vec3& q, double p) {
  double s = 0.0;
  for (const auto& qp : mesh.quadrature()) {
    s += qp.weight * std::pow((mesh.quad_position(qp) - q).norm(), p);
  }
  return s;
}

std::vector<double> normal_radial_angle(const SurfaceMesh& mesh, const Vec3& q) {
  std::vector<double> cosines(mesh.num_facets());
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const Vec3 d = mesh.facet_centroid(f) - q;
    cosines[f] = std::clamp(mesh.facet_normals()[f].dot(d) / d.norm(), -1.0, 1.0);
  }
  return cosines;
}

std::vector<double> coordinate_field(std::span<const Vec3> vertices, int axis) {
  std::vector<double> u(vertices.size());
  for (std::size_t v = 0; v < vertices.size(); ++v) u[v] = vertices[v][axis];
  return u;
}

}  // namespace plap
