// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "plap/geometry.hpp"
#include "plap/shapes.hpp"

using namespace plap;
using std::numbers::pi;

namespace {

SurfaceMesh octahedron() { return load_off(PLAP_DATA_DIR "/octahedron.off"); }

Eigen::Matrix3d some_rotation() {
  return (Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()) *
          Eigen::AngleAxisd(-1.1, Vec3::UnitZ()))
      .toRotationMatrix();
}

}  // namespace

TEST(SurfaceMesh, OctahedronInvariants) {
  const SurfaceMesh m = octahedron();
  EXPECT_EQ(m.num_vertices(), 6u);
  EXPECT_EQ(m.num_facets(), 8u);
  EXPECT_NEAR(enclosed_volume(m), 4.0 / 3.0, 1e-15);
  for (const Vec3& nu : m.facet_normals()) EXPECT_NEAR(nu.norm(), 1.0, 1e-12);
  for (double a : m.facet_measures()) EXPECT_GT(a, 0.0);
}

TEST(SurfaceMesh, EveryEdgeSharedByTwoFacets) {
  const SurfaceMesh m = generate_surface(ShapeSpec::ellipsoid({1.2, 1.0, 0.9}, 2));
  std::map<std::pair<int, int>, int> count;
  for (const auto& f : m.facets()) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [edge, c] : count) EXPECT_EQ(c, 2);
}

TEST(SurfaceMesh, ReversedOrientationIsFlipped) {
  const SurfaceMesh m = octahedron();
  std::vector<std::array<int, 3>> reversed;
  for (const auto& f : m.facets()) reversed.push_back({f[0], f[2], f[1]});
  const SurfaceMesh r = SurfaceMesh::build(
      3, std::vector<Vec3>(m.vertices().begin(), m.vertices().end()), reversed);
  EXPECT_NEAR(enclosed_volume(r), 4.0 / 3.0, 1e-15);
}

TEST(SurfaceMesh, InconsistentOrientationRejected) {
  const SurfaceMesh m = octahedron();
  std::vector<std::array<int, 3>> facets(m.facets().begin(), m.facets().end());
  std::swap(facets[0][1], facets[0][2]);
  EXPECT_THROW(SurfaceMesh::build(3, std::vector<Vec3>(m.vertices().begin(), m.vertices().end()),
                                  facets),
               MeshError);
}

TEST(SurfaceMesh, RejectsAmbientDimensionFour) {
  EXPECT_THROW(SurfaceMesh::build(4, {}, {}), MeshError);
}

TEST(OffIo, CubeVolume) {
  const SurfaceMesh cube = load_off(PLAP_DATA_DIR "/cube.off");
  EXPECT_NEAR(enclosed_volume(cube), 8.0, 1e-14);
  EXPECT_NEAR(surface_measure(cube), 24.0, 1e-14);
}

TEST(OffIo, BoundaryEdgeErrorNamesTheEdge) {
  try {
    (void)load_off(PLAP_DATA_DIR "/open_box.off");
    FAIL() << "open mesh accepted";
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find("boundary edge"), std::string::npos) << e.what();
  }
}

TEST(OffIo, RoundTrip) {
  const SurfaceMesh m = generate_surface(ShapeSpec::perturbed_sphere(3, 0.2, 3, 2));
  const SurfaceMesh r = parse_off(format_off(m));
  ASSERT_EQ(r.num_vertices(), m.num_vertices());
  for (std::size_t i = 0; i < m.num_vertices(); ++i) {
    EXPECT_EQ(r.vertices()[i], m.vertices()[i]);
  }
  EXPECT_DOUBLE_EQ(enclosed_volume(r), enclosed_volume(m));
}

TEST(OffIo, MalformedInputReportsLine) {
  try {
    (void)parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1\n3 0 1 2\n");
    FAIL() << "malformed input accepted";
  } catch (const MeshError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(Measures, SphereAreaAndVolume) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(3, 1.0, 4));
  EXPECT_NEAR(surface_measure(m), 4 * pi, 0.005 * 4 * pi);
  EXPECT_NEAR(enclosed_volume(m), 4 * pi / 3, 0.005 * 4 * pi / 3);
}

TEST(Measures, CirclePerimeter) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(2, 1.0, 6));  // 1024 segments
  ASSERT_EQ(m.num_facets(), 1024u);
  EXPECT_NEAR(surface_measure(m), 2 * pi, 1e-4);
}

TEST(Measures, SquareExact) {
  const SurfaceMesh m = generate_surface(ShapeSpec::square(2.0, 2));
  EXPECT_DOUBLE_EQ(surface_measure(m), 8.0);
  EXPECT_DOUBLE_EQ(enclosed_volume(m), 4.0);
}

TEST(Measures, VolumeInvariantUnderRigidMotion) {
  const SurfaceMesh m = generate_surface(ShapeSpec::ellipsoid({1.5, 1.0, 0.8}, 3));
  const double v = enclosed_volume(m);
  EXPECT_NEAR(enclosed_volume(m.translated(Vec3(3, -2, 7))), v, 1e-10 * v);
  EXPECT_NEAR(enclosed_volume(m.transformed(some_rotation())), v, 1e-10 * v);
}

TEST(Measures, RefinementConvergence) {
  double prev_area = 0.0, prev_vol = 0.0;
  for (int level = 1; level <= 5; ++level) {
    const SurfaceMesh m = generate_surface(ShapeSpec::sphere(3, 1.0, level));
    const double ea = std::abs(surface_measure(m) - 4 * pi);
    const double ev = std::abs(enclosed_volume(m) - 4 * pi / 3);
    if (level > 1) {
      EXPECT_GE(prev_area / ea, 3.0) << "level " << level;
      EXPECT_GE(prev_vol / ev, 3.0) << "level " << level;
    }
    prev_area = ea;
    prev_vol = ev;
  }
}

TEST(ClosedForms, EqualVolumeRadius) {
  EXPECT_NEAR(equal_volume_radius(4 * pi / 3, 3), 1.0, 1e-15);
  EXPECT_NEAR(equal_volume_radius(pi, 2), 1.0, 1e-15);
  EXPECT_NEAR(equal_volume_radius(32 * pi / 3, 3), 2.0, 1e-15);
}

TEST(ClosedForms, BallToSphereRatio) {
  EXPECT_NEAR(sphere_area(3, 1), 4 * pi, 1e-14);
  EXPECT_NEAR(ball_volume(3, 1), 4 * pi / 3, 1e-14);
  EXPECT_NEAR(sphere_area(2, 2), 4 * pi, 1e-14);
  EXPECT_NEAR(ball_volume(2, 2), 4 * pi, 1e-14);
  for (int n = 2; n <= 8; ++n) {
    for (double r : {0.5, 1.0, 2.0}) {
      EXPECT_NEAR(ball_volume(n, r), sphere_area(n, r) * r / n, 1e-12 * ball_volume(n, r));
    }
  }
  EXPECT_NEAR(ball_volume(5, 1) / sphere_area(5, 1), 0.2, 1e-15);
}

TEST(ClosedForms, SphereEigenvalue) {
  EXPECT_DOUBLE_EQ(sphere_lambda1(3, 1), 2.0);
  EXPECT_DOUBLE_EQ(sphere_lambda1(2, 1), 1.0);
  EXPECT_DOUBLE_EQ(sphere_lambda1(2, 2), 0.25);
}

TEST(TangentialGradient, CoordinateProjection) {
  const SurfaceMesh m = generate_surface(ShapeSpec::perturbed_sphere(3, 0.2, 3, 2));
  const auto g = tangential_gradient(m, coordinate_field(m.vertices(), 0));
  for (std::size_t f = 0; f < m.num_facets(); ++f) {
    const Vec3 nu = m.facet_normals()[f];
    EXPECT_LT((g[f] - (Vec3::UnitX() - nu.x() * nu)).norm(), 1e-12);
  }
}

TEST(TangentialGradient, ConstantAndInPlaneLinear) {
  const SurfaceMesh m = octahedron();
  const auto zero = tangential_gradient(m, std::vector<double>(6, 3.5));
  for (const Vec3& g : zero) EXPECT_LT(g.norm(), 1e-15);
  // Facet 0 has normal (1,1,1)/sqrt(3); a = (1,-1,0) lies in its plane.
  const Vec3 a(1, -1, 0);
  std::vector<double> u;
  for (const Vec3& x : m.vertices()) u.push_back(a.dot(x));
  const auto g = tangential_gradient(m, u);
  for (std::size_t f = 0; f < m.num_facets(); ++f) {
    if (std::abs(m.facet_normals()[f].dot(a)) < 1e-14) EXPECT_LT((g[f] - a).norm(), 1e-14);
  }
}

TEST(RadialMoment, ClosedCases) {
  const SurfaceMesh sphere = generate_surface(ShapeSpec::sphere(3, 1.0, 4));
  for (double p : {1.5, 2.0, 3.0}) {
    EXPECT_NEAR(radial_moment(sphere, Vec3::Zero(), p), 4 * pi, 0.005 * 4 * pi);
  }
  const SurfaceMesh circle = generate_surface(ShapeSpec::sphere(2, 1.0, 6));
  EXPECT_NEAR(radial_moment(circle, Vec3::Zero(), 2.0), 2 * pi, 1e-4);
  const SurfaceMesh square = generate_surface(ShapeSpec::square(2.0, 4));
  // Each side contributes the integral of 1 + t^2 over [-1, 1]; the midpoint
  // rule on 64 segments per side misses it by 4 * 2 * h^2 / 12.
  const double h = 2.0 / 64;
  EXPECT_NEAR(radial_moment(square, Vec3::Zero(), 2.0), 32.0 / 3.0 - 8 * h * h / 12, 1e-12);
}

TEST(RadialMoment, OffCenterSphereMatchesOracle) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(3, 1.0, 5));
  for (double p : {1.5, 2.0, 3.0}) {
    const double exact = oracle::sphere_radial_moment_exact(0.3, p);
    EXPECT_NEAR(radial_moment(m, Vec3(0.3, 0, 0), p), exact, 2e-3 * exact);
  }
}

TEST(NormalRadialAngle, Spheres) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(2, 1.0, 4));
  for (double c : normal_radial_angle(m, Vec3::Zero())) EXPECT_NEAR(c, 1.0, 1e-10);
  const auto off = normal_radial_angle(m, Vec3(0.4, 0, 0));
  EXPECT_LT(*std::min_element(off.begin(), off.end()), 0.99);
}

TEST(NormalRadialAngle, SquareFacetMidpoints) {
  const SurfaceMesh m = generate_surface(ShapeSpec::square(2.0, 2));
  const auto c = normal_radial_angle(m, Vec3::Zero());
  for (std::size_t f = 0; f < m.num_facets(); ++f) {
    EXPECT_NEAR(c[f], 1.0 / m.facet_centroid(f).norm(), 1e-14);
  }
}

TEST(VolumeMesh, LayeredBallInvariants) {
  const MeshPair mp = generate(ShapeSpec::sphere(3, 1.0, 3));
  const VolumeMesh& v = mp.volume;
  for (double vol : v.cell_volumes()) EXPECT_GT(vol, 0.0);
  EXPECT_NEAR(v.total_volume(), enclosed_volume(mp.surface), 1e-12);
  for (std::size_t s = 0; s < mp.surface.num_vertices(); ++s) {
    EXPECT_EQ(v.vertices()[v.boundary_map()[s]], mp.surface.vertices()[s]);
  }
  EXPECT_TRUE(v.contains(Vec3(0.1, 0.2, -0.3)));
  EXPECT_FALSE(v.contains(Vec3(1.1, 0.0, 0.0)));
}

TEST(VolumeMesh, OverlappingCellsRejected) {
  const MeshPair mp = generate(ShapeSpec::sphere(2, 1.0, 0));
  std::vector<std::array<int, 4>> cells(mp.volume.cells().begin(), mp.volume.cells().end());
  cells.push_back(cells.front());
  EXPECT_THROW(VolumeMesh::build(2,
                                 std::vector<Vec3>(mp.volume.vertices().begin(),
                                                   mp.volume.vertices().end()),
                                 cells, mp.surface,
                                 std::vector<int>(mp.volume.boundary_map().begin(),
                                                  mp.volume.boundary_map().end())),
               MeshError);
}
