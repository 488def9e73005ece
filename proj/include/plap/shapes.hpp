// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "plap/geometry.hpp"

namespace plap {

enum class ShapeKind {
  sphere,            // circle for n = 2
  ellipsoid,         // ellipse for n = 2
  perturbed_sphere,  // radial graph 1 + amplitude * cos(frequency * theta)
  polygon,           // n = 2 only, star-shaped about its centroid
};

struct ShapeSpec {
  ShapeKind kind = ShapeKind::sphere;
  int dim = 3;
  double radius = 1.0;
  std::vector<double> semiaxes;        // ellipsoid: dim entries
  double amplitude = 0.0;              // perturbed_sphere
  int frequency = 3;                   // perturbed_sphere
  std::vector<Vec3> polygon_vertices;  // polygon: counter-clockwise corners
  Vec3 center = Vec3::Zero();
  /// n = 3: icosahedron subdivision level (20 * 4^refine facets).
  /// n = 2: 2^(refine + 4) boundary segments.
  int refine = 4;
  /// Radial layers of the volume mesh; 0 picks a default from `refine`.
  int layers = 0;

  /// Short human-readable descriptor, e.g. "ellipsoid(1.2,1,0.9)".
  std::string describe() const;

  static ShapeSpec sphere(int dim, double radius, int refine);
  static ShapeSpec ellipsoid(std::vector<double> semiaxes, int refine);
  static ShapeSpec perturbed_sphere(int dim, double amplitude, int frequency,
                                    int refine);
  static ShapeSpec square(double side, int refine);
  static ShapeSpec polygon(std::vector<Vec3> corners, int refine);
};

struct MeshPair {
  SurfaceMesh surface;
  VolumeMesh volume;
};

/// Builds the matched surface and volume meshes for `spec`. Throws
/// std::invalid_argument for parameter choices that do not describe an
/// embedded closed hypersurface.
MeshPair generate(const ShapeSpec& spec);

/// Surface mesh only (cheaper; skips the volume mesh).
SurfaceMesh generate_surface(const ShapeSpec& spec);

/// Volume mesh made of `layers` radially scaled copies of `surface` about
/// `center`, joined by prisms split into simplices and a fan at the center.
/// Requires the surface to be star-shaped with respect to `center`.
VolumeMesh layered_volume(const SurfaceMesh& surface, const Vec3& center,
                          int layers);

/// Default layer count used by generate().
int default_layers(const ShapeSpec& spec);

/// OFF text format: "OFF", counts line, vertex lines, facet lines "3 i j k".
SurfaceMesh load_off(const std::filesystem::path& path);
SurfaceMesh parse_off(const std::string& text);
void save_off(const SurfaceMesh& mesh, const std::filesystem::path& path);
std::string format_off(const SurfaceMesh& mesh);

}  // namespace plap
