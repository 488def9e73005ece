// SPDX-License-Identifier: Apache-2.0
#include "plap/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace plap {

namespace {

using Facets = std::vector<std::array<int, 3>>;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Unit icosahedron subdivided `level` times, vertices projected to the
// sphere. The base vertices (0, +-1, +-phi) and cyclic permutations make the
// mesh symmetric under each coordinate reflection.
std::pair<std::vector<Vec3>, Facets> subdivided_icosahedron(int level) {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec3> x = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                         {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                         {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : x) v.normalize();
  Facets f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
              {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
              {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
              {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      x.push_back((0.5 * (x[a] + x[b])).normalized());
      const int id = static_cast<int>(x.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    Facets next;
    next.reserve(4 * f.size());
    for (const auto& t : f) {
      const int ab = midpoint(t[0], t[1]);
      const int bc = midpoint(t[1], t[2]);
      const int ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({ab, t[1], bc});
      next.push_back({ca, bc, t[2]});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  return {std::move(x), std::move(f)};
}

std::pair<std::vector<Vec3>, Facets> unit_circle(int segments) {
  std::vector<Vec3> x(segments);
  Facets f(segments);
  for (int i = 0; i < segments; ++i) {
    const double th = 2.0 * std::numbers::pi * i / segments;
    x[i] = Vec3(std::cos(th), std::sin(th), 0.0);
    f[i] = {i, (i + 1) % segments, -1};
  }
  return {std::move(x), std::move(f)};
}

double radial_profile(const ShapeSpec& spec, const Vec3& dir) {
  // dir is a unit vector; theta is the polar angle from the z axis (n = 3)
  // or the angle from the x axis (n = 2).
  const double theta = spec.dim == 3
                           ? std::acos(std::clamp(dir.z(), -1.0, 1.0))
                           : std::atan2(dir.y(), dir.x());
  return 1.0 + spec.amplitude * std::cos(spec.frequency * theta);
}

std::pair<std::vector<Vec3>, Facets> polygon_boundary(const ShapeSpec& spec) {
  const auto& corners = spec.polygon_vertices;
  const int per_edge = 1 << std::max(spec.refine + 2, 0);
  std::vector<Vec3> x;
  const int m = static_cast<int>(corners.size());
  for (int c = 0; c < m; ++c) {
    const Vec3& a = corners[c];
    const Vec3& b = corners[(c + 1) % m];
    for (int k = 0; k < per_edge; ++k) {
      x.push_back(a + (b - a) * (static_cast<double>(k) / per_edge));
    }
  }
  const int nv = static_cast<int>(x.size());
  Facets f(nv);
  for (int i = 0; i < nv; ++i) f[i] = {i, (i + 1) % nv, -1};
  return {std::move(x), std::move(f)};
}

void validate(const ShapeSpec& s) {
  require(s.dim == 2 || s.dim == 3, "shape dimension must be 2 or 3");
  require(s.refine >= 0 && s.refine <= 8, "refine must be in [0, 8]");
  require(s.layers >= 0, "layers must be nonnegative");
  switch (s.kind) {
    case ShapeKind::sphere:
      require(s.radius > 0.0, "radius must be positive");
      break;
    case ShapeKind::ellipsoid:
      require(static_cast<int>(s.semiaxes.size()) == s.dim,
              "ellipsoid needs one semiaxis per dimension");
      for (double a : s.semiaxes) require(a > 0.0, "semiaxes must be positive");
      break;
    case ShapeKind::perturbed_sphere:
      require(s.radius > 0.0, "radius must be positive");
      // |amplitude| < 1 keeps the radial graph positive, hence embedded.
      require(std::abs(s.amplitude) < 1.0,
              "perturbation amplitude must satisfy |amplitude| < 1 "
              "(otherwise the surface self-intersects)");
      require(s.frequency >= 0, "frequency must be nonnegative");
      break;
    case ShapeKind::polygon:
      require(s.dim == 2, "polygon shapes are planar (dim 2)");
      require(s.polygon_vertices.size() >= 3, "polygon needs >= 3 vertices");
      break;
  }
}

}  // namespace

std::string ShapeSpec::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (kind) {
    case ShapeKind::sphere:
      os << (dim == 2 ? "circle" : "sphere") << "(R=" << radius << ")";
      break;
    case ShapeKind::ellipsoid: {
      os << (dim == 2 ? "ellipse(" : "ellipsoid(");
      for (std::size_t i = 0; i < semiaxes.size(); ++i) {
        os << (i ? "," : "") << semiaxes[i];
      }
      os << ")";
      break;
    }
    case ShapeKind::perturbed_sphere:
      os << (dim == 2 ? "star" : "perturbed_sphere") << "(amp=" << amplitude
         << ",freq=" << frequency << ")";
      break;
    case ShapeKind::polygon:
      os << "polygon(" << polygon_vertices.size() << " corners)";
      break;
  }
  os << "/n=" << dim << "/refine=" << refine;
  return os.str();
}

ShapeSpec ShapeSpec::sphere(int dim, double radius, int refine) {
  ShapeSpec s;
  s.kind = ShapeKind::sphere;
  s.dim = dim;
  s.radius = radius;
  s.refine = refine;
  return s;
}

ShapeSpec ShapeSpec::ellipsoid(std::vector<double> semiaxes, int refine) {
  ShapeSpec s;
  s.kind = ShapeKind::ellipsoid;
  s.dim = static_cast<int>(semiaxes.size());
  s.semiaxes = std::move(semiaxes);
  s.refine = refine;
  return s;
}

ShapeSpec ShapeSpec::perturbed_sphere(int dim, double amplitude, int frequency,
                                      int refine) {
  ShapeSpec s;
  s.kind = ShapeKind::perturbed_sphere;
  s.dim = dim;
  s.amplitude = amplitude;
  s.frequency = frequency;
  s.refine = refine;
  return s;
}

ShapeSpec ShapeSpec::square(double side, int refine) {
  const double h = 0.5 * side;
  return polygon({{-h, -h, 0}, {h, -h, 0}, {h, h, 0}, {-h, h, 0}}, refine);
}

ShapeSpec ShapeSpec::polygon(std::vector<Vec3> corners, int refine) {
  ShapeSpec s;
  s.kind = ShapeKind::polygon;
  s.dim = 2;
  s.polygon_vertices = std::move(corners);
  s.refine = refine;
  return s;
}

int default_layers(const ShapeSpec& spec) {
  if (spec.layers > 0) return spec.layers;
  if (spec.dim == 3) return std::max(2, 1 << std::max(spec.refine - 1, 0));
  return std::max(4, 1 << spec.refine);
}

SurfaceMesh generate_surface(const ShapeSpec& spec) {
  validate(spec);
  std::vector<Vec3> x;
  Facets f;
  if (spec.kind == ShapeKind::polygon) {
    std::tie(x, f) = polygon_boundary(spec);
  } else {
    std::tie(x, f) = spec.dim == 3 ? subdivided_icosahedron(spec.refine)
                                   : unit_circle(1 << (spec.refine + 4));
    for (auto& v : x) {
      switch (spec.kind) {
        case ShapeKind::sphere:
          v *= spec.radius;
          break;
        case ShapeKind::ellipsoid:
          for (int i = 0; i < spec.dim; ++i) v[i] *= spec.semiaxes[i];
          break;
        case ShapeKind::perturbed_sphere:
          v *= spec.radius * radial_profile(spec, v);
          break;
        case ShapeKind::polygon:
          break;
      }
    }
  }
  for (auto& v : x) {
    v += spec.center;
    if (spec.dim == 2) v.z() = 0.0;
  }
  try {
    return SurfaceMesh::build(spec.dim, std::move(x), std::move(f));
  } catch (const MeshError& e) {
    throw std::invalid_argument(std::string("invalid shape parameters: ") +
                                e.what());
  }
}

VolumeMesh layered_volume(const SurfaceMesh& surface, const Vec3& center,
                          int layers) {
  if (layers < 1) throw std::invalid_argument("layers must be >= 1");
  const int dim = surface.dim();
  const int ns = static_cast<int>(surface.num_vertices());
  auto sv = surface.vertices();

  // Vertex 0 is the center; layer k (1..layers) occupies [1 + (k-1) ns, 1 + k ns).
  std::vector<Vec3> x;
  x.reserve(1 + static_cast<std::size_t>(layers) * ns);
  x.push_back(center);
  for (int k = 1; k <= layers; ++k) {
    const double s = static_cast<double>(k) / layers;
    for (int v = 0; v < ns; ++v) {
      x.push_back(k == layers ? sv[v] : Vec3(center + s * (sv[v] - center)));
    }
  }
  auto id = [&](int layer, int v) { return layer == 0 ? 0 : 1 + (layer - 1) * ns + v; };

  std::vector<std::array<int, 4>> cells;
  auto add_cell = [&](std::array<int, 4> c) {
    // Orient positively; folded cells are caught by the volume balance check
    // in VolumeMesh::build.
    if (dim == 2) {
      const double a = (x[c[1]] - x[c[0]]).cross(x[c[2]] - x[c[0]]).z();
      if (a < 0.0) std::swap(c[1], c[2]);
      c[3] = -1;
    } else {
      const double d =
          (x[c[1]] - x[c[0]]).dot((x[c[2]] - x[c[0]]).cross(x[c[3]] - x[c[0]]));
      if (d < 0.0) std::swap(c[2], c[3]);
    }
    cells.push_back(c);
  };

  for (const auto& f : surface.facets()) {
    if (dim == 2) {
      const int a = f[0];
      const int b = f[1];
      add_cell({0, id(1, a), id(1, b), -1});
      for (int k = 1; k < layers; ++k) {
        // Quad (a_k, b_k, b_{k+1}, a_{k+1}) split along a fixed diagonal
        // chosen from the global vertex order so neighbors agree.
        const int lo = std::min(a, b);
        const int hi = std::max(a, b);
        add_cell({id(k, hi), id(k, lo), id(k + 1, lo), -1});
        add_cell({id(k, hi), id(k + 1, lo), id(k + 1, hi), -1});
      }
    } else {
      std::array<int, 3> t = f;
      std::sort(t.begin(), t.end());
      const int a = t[0];
      const int b = t[1];
      const int c = t[2];
      add_cell({0, id(1, a), id(1, b), id(1, c)});
      for (int k = 1; k < layers; ++k) {
        // Prism split: the quad face over edge (lo, hi) is cut by the
        // diagonal hi_k -> lo_{k+1}, which depends only on the edge.
        add_cell({id(k, a), id(k, b), id(k, c), id(k + 1, a)});
        add_cell({id(k, b), id(k, c), id(k + 1, a), id(k + 1, b)});
        add_cell({id(k, c), id(k + 1, a), id(k + 1, b), id(k + 1, c)});
      }
    }
  }

  std::vector<int> boundary_map(ns);
  for (int v = 0; v < ns; ++v) boundary_map[v] = id(layers, v);
  return VolumeMesh::build(dim, std::move(x), std::move(cells), surface,
                           std::move(boundary_map));
}

MeshPair generate(const ShapeSpec& spec) {
  SurfaceMesh surface = generate_surface(spec);
  Vec3 center = spec.center;
  if (spec.kind == ShapeKind::polygon) {
    center = Vec3::Zero();
    for (const auto& c : spec.polygon_vertices) center += c;
    center /= static_cast<double>(spec.polygon_vertices.size());
    center.z() = 0.0;
  }
  try {
    VolumeMesh volume = layered_volume(surface, center, default_layers(spec));
    return {std::move(surface), std::move(volume)};
  } catch (const MeshError& e) {
    throw std::invalid_argument(
        std::string("shape is not star-shaped about its center: ") + e.what());
  }
}

}  // namespace plap
