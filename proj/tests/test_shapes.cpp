// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "plap/shapes.hpp"

using namespace plap;
using std::numbers::pi;

TEST(Shapes, SphereFacetCounts) {
  for (int r = 0; r <= 4; ++r) {
    EXPECT_EQ(generate_surface(ShapeSpec::sphere(3, 1.0, r)).num_facets(),
              20u * (1u << (2 * r)));
    EXPECT_EQ(generate_surface(ShapeSpec::sphere(2, 1.0, r)).num_facets(), 1u << (r + 4));
  }
}

TEST(Shapes, VerticesOnSphere) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(3, 2.5, 3));
  for (const Vec3& x : m.vertices()) EXPECT_NEAR(x.norm(), 2.5, 1e-14);
}

TEST(Shapes, UnitEllipsoidMatchesSphere) {
  const SurfaceMesh s = generate_surface(ShapeSpec::sphere(3, 1.0, 3));
  const SurfaceMesh e = generate_surface(ShapeSpec::ellipsoid({1.0, 1.0, 1.0}, 3));
  EXPECT_NEAR(surface_measure(e), surface_measure(s), 1e-12);
  EXPECT_NEAR(enclosed_volume(e), enclosed_volume(s), 1e-12);
}

TEST(Shapes, EllipseAreaConverges) {
  const SurfaceMesh m = generate_surface(ShapeSpec::ellipsoid({1.5, 1.0}, 6));
  EXPECT_NEAR(enclosed_volume(m), 1.5 * pi, 1e-4);
}

TEST(Shapes, CenterTranslatesMesh) {
  ShapeSpec spec = ShapeSpec::sphere(3, 1.0, 2);
  spec.center = Vec3(1, 2, 3);
  const SurfaceMesh m = generate_surface(spec);
  for (const Vec3& x : m.vertices()) EXPECT_NEAR((x - spec.center).norm(), 1.0, 1e-14);
}

TEST(Shapes, InvalidParametersRejected) {
  EXPECT_THROW(generate_surface(ShapeSpec::perturbed_sphere(3, 1.2, 3, 2)),
               std::invalid_argument);
  EXPECT_THROW(generate_surface(ShapeSpec::ellipsoid({1.0, -1.0, 1.0}, 2)),
               std::invalid_argument);
  EXPECT_THROW(generate_surface(ShapeSpec::sphere(3, 1.0, 12)), std::invalid_argument);
  EXPECT_THROW(generate_surface(ShapeSpec::sphere(3, 0.0, 2)), std::invalid_argument);
}

TEST(Shapes, PolygonPerimeterAndArea) {
  const ShapeSpec tri = ShapeSpec::polygon({Vec3(0, 0, 0), Vec3(3, 0, 0), Vec3(0, 4, 0)}, 1);
  const SurfaceMesh m = generate_surface(tri);
  EXPECT_NEAR(surface_measure(m), 12.0, 1e-13);
  EXPECT_NEAR(enclosed_volume(m), 6.0, 1e-13);
}

TEST(Shapes, VolumeMeshesMatchSurfaces) {
  for (const ShapeSpec& s :
       {ShapeSpec::sphere(3, 1.0, 2), ShapeSpec::ellipsoid({1.2, 1.0, 0.9}, 2),
        ShapeSpec::perturbed_sphere(3, 0.15, 3, 2), ShapeSpec::square(2.0, 2),
        ShapeSpec::ellipsoid({1.5, 1.0}, 2), ShapeSpec::perturbed_sphere(2, 0.3, 5, 2)}) {
    const MeshPair mp = generate(s);
    EXPECT_NEAR(mp.volume.total_volume(), enclosed_volume(mp.surface),
                1e-10 * enclosed_volume(mp.surface))
        << s.describe();
    EXPECT_EQ(mp.volume.boundary().num_facets(), mp.surface.num_facets());
  }
}

TEST(Shapes, LayeredVolumeRejectsNonStarCenter) {
  const SurfaceMesh m = generate_surface(ShapeSpec::ellipsoid({3.0, 1.0}, 2));
  EXPECT_THROW(layered_volume(m, Vec3(2.5, 0.9, 0), 4), MeshError);
}

TEST(Shapes, DescribeIsReadable) {
  EXPECT_EQ(ShapeSpec::ellipsoid({1.2, 1.0, 0.9}, 3).describe(), "ellipsoid(1.2,1,0.9)/n=3/refine=3");
}
