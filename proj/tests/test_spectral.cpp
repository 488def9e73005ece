// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "plap/bounds.hpp"
#include "plap/pcenter.hpp"
#include "plap/shapes.hpp"
#include "plap/spectral.hpp"

using namespace plap;
using std::numbers::pi;

namespace {

ScalarField coord(const SurfaceMesh& m, int axis) {
  return {coordinate_field(m.vertices(), axis)};
}

ScalarField coord(const VolumeMesh& m, int axis) {
  return {coordinate_field(m.vertices(), axis)};
}

}  // namespace

// -- closed problem ----------------------------------------------------------

TEST(ClosedEnergy, CoordinateOnSphere) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(3, 1.0, 5));
  const ScalarField x = coord(m, 0);
  EXPECT_NEAR(p_dirichlet_energy_surface(m, x, 2.0), 8 * pi / 3, 0.005 * 8 * pi / 3);
  EXPECT_NEAR(p_norm_surface(m, x, 2.0), 4 * pi / 3, 0.005 * 4 * pi / 3);
  EXPECT_NEAR(rayleigh_closed(m, x, 2.0), 2.0, 0.005 * 2);
  EXPECT_NEAR(p_moment_surface(m, x, 3.0), 0.0, 1e-10);
}

TEST(ClosedEnergy, ConstantsAndHomogeneity) {
  const SurfaceMesh m = generate_surface(ShapeSpec::ellipsoid({1.2, 1.0, 0.9}, 2));
  const ScalarField one{std::vector<double>(m.num_vertices(), 1.0)};
  EXPECT_LT(p_dirichlet_energy_surface(m, one, 3.0), 1e-30);
  EXPECT_NEAR(p_norm_surface(m, one, 3.0), surface_measure(m), 1e-12);
  EXPECT_NEAR(p_moment_surface(m, one, 3.0), surface_measure(m), 1e-12);

  ScalarField u = coord(m, 1);
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] += 0.3 * m.vertices()[i].z();
  for (double p : {1.5, 3.0}) {
    const double e = p_dirichlet_energy_surface(m, u, p);
    const double r = rayleigh_closed(m, u, p);
    for (double c : {-1.0, 2.0, 10.0}) {
      ScalarField cu = u;
      for (double& v : cu.values) v *= c;
      EXPECT_NEAR(p_dirichlet_energy_surface(m, cu, p), std::pow(std::abs(c), p) * e,
                  1e-12 * std::pow(std::abs(c), p) * e);
      EXPECT_NEAR(rayleigh_closed(m, cu, p), r, 1e-12 * r);
    }
    ScalarField shifted = u;
    for (double& v : shifted.values) v += 7.0;
    EXPECT_NEAR(p_dirichlet_energy_surface(m, shifted, p, 0.0), e, 1e-12 * e);
  }
}

TEST(ConstraintProject, ShiftsAndAnalyticRoot) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(3, 1.0, 3));
  ScalarField u = coord(m, 0);
  for (double& v : u.values) v += 5.0;
  double shift = 0.0;
  const ScalarField r = constraint_project(m, u, 2.0, 1e-14, &shift);
  EXPECT_NEAR(shift, 5.0, 1e-10);
  EXPECT_NEAR(p_moment_surface(m, r, 2.0), 0.0, 1e-12);

  // Field that is 1 on the northern cap and 0 elsewhere: the p-mean of the
  // two-valued sample set solves the same quadratic as the 1-D oracle.
  ScalarField step;
  for (const Vec3& x : m.vertices()) step.values.push_back(x.z() > 0.5 ? 1.0 : 0.0);
  double w1 = 0, w0 = 0;
  for (const auto& q : m.quadrature()) {
    const double s = 0.5 * (step.values[q.a] + step.values[q.b]);
    if (s == 1.0) w1 += q.weight;
    if (s == 0.0) w0 += q.weight;
  }
  ASSERT_GT(w1, 0.0);
  double c = 0.0;
  (void)constraint_project(m, step, 3.0, 1e-14, &c);
  // Mixed samples (value 1/2) also enter, so compare with the three-value root.
  double wh = surface_measure(m) - w0 - w1;
  auto F = [&](double t) {
    return w0 * std::abs(t) * -t + wh * std::abs(0.5 - t) * (0.5 - t) +
           w1 * std::abs(1 - t) * (1 - t);
  };
  EXPECT_NEAR(F(c), 0.0, 1e-10 * surface_measure(m));
}

TEST(ClosedSolver, P2Values) {
  const EigenEstimate s = solve_p2_closed(generate_surface(ShapeSpec::sphere(3, 1.0, 4)));
  EXPECT_NEAR(s.value, 2.0, 0.01 * 2);
  EXPECT_LE(s.residual, 1e-9);
  const EigenEstimate c = solve_p2_closed(generate_surface(ShapeSpec::sphere(2, 1.0, 6)));
  EXPECT_NEAR(c.value, 1.0, 1e-3);
  const EigenEstimate c2 = solve_p2_closed(generate_surface(ShapeSpec::sphere(2, 2.0, 6)));
  EXPECT_NEAR(c2.value, 0.25, 0.25e-3);
}

TEST(ClosedSolver, CircleMatchesCurveFormula) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(2, 1.0, 6));
  for (double p : {1.5, 3.0}) {
    const EigenEstimate e = minimize_closed(m, p);
    const double ref = oracle::curve_lambda_closed_form(p, 2 * pi);
    EXPECT_NEAR(e.value, ref, 0.01 * ref) << "p=" << p;
  }
}

class ClosedInvariants : public ::testing::TestWithParam<double> {};

TEST_P(ClosedInvariants, EstimateInvariants) {
  const double p = GetParam();
  const SurfaceMesh m = generate_surface(ShapeSpec::perturbed_sphere(3, 0.15, 3, 2));
  const EigenEstimate e = minimize_closed(m, p);
  EXPECT_TRUE(e.converged);
  EXPECT_NEAR(p_norm_surface(m, e.field, p), 1.0, 1e-10);
  EXPECT_LE(e.constraint_residual, 1e-8);
  EXPECT_NEAR(rayleigh_closed(m, e.field, p), e.value, 1e-10 * e.value);
  for (std::size_t i = 1; i < e.history.size(); ++i) {
    EXPECT_LE(e.history[i], e.history[i - 1] * (1 + 1e-12));
  }
  // Sign convention.
  double big = 0.0;
  for (double v : e.field.values) big = std::abs(v) > std::abs(big) ? v : big;
  EXPECT_GT(big, 0.0);
  // Any recentred coordinate function is an admissible competitor.
  const PCenterResult pc = p_center(m, nullptr, p);
  for (int i = 0; i < 3; ++i) {
    ScalarField x = coord(m, i);
    for (double& v : x.values) v -= pc.t[i];
    EXPECT_GE(rayleigh_closed(m, x, p), e.value * (1 - 1e-9));
  }
  EXPECT_LE(e.value, closed_bound_rhs(3, p, equal_volume_radius(enclosed_volume(m), 3),
                                      surface_measure(m)) * 1.05);
}

INSTANTIATE_TEST_SUITE_P(Exponents, ClosedInvariants, ::testing::Values(1.5, 2.0, 3.0));

TEST(ClosedSolver, RejectsUnsupportedP) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(3, 1.0, 1));
  EXPECT_THROW(minimize_closed(m, 0.5), std::invalid_argument);
  EXPECT_THROW(minimize_closed(m, 12.0), std::invalid_argument);
}

// -- Steklov problem ---------------------------------------------------------

TEST(SteklovEnergy, LinearFieldOnBall) {
  const MeshPair mp = generate(ShapeSpec::sphere(3, 1.0, 4));
  const ScalarField x = coord(mp.volume, 0);
  EXPECT_NEAR(p_dirichlet_energy_volume(mp.volume, x, 2.0), 4 * pi / 3, 0.01 * 4 * pi / 3);
  EXPECT_NEAR(p_dirichlet_energy_volume(mp.volume, x, 4.0), 4 * pi / 3, 0.01 * 4 * pi / 3);
  const ScalarField one{std::vector<double>(mp.volume.num_vertices(), 1.0)};
  EXPECT_LT(p_dirichlet_energy_volume(mp.volume, one, 3.0), 1e-30);
}

TEST(SteklovEnergy, TraceNormMatchesSurfaceNorm) {
  const MeshPair mp = generate(ShapeSpec::ellipsoid({1.2, 1.0, 0.9}, 2));
  ScalarField u = coord(mp.volume, 0);
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] += mp.volume.vertices()[i].y();
  const ScalarField t = boundary_trace(mp.volume, u);
  for (std::size_t s = 0; s < t.values.size(); ++s) {
    EXPECT_EQ(t.values[s], u.values[mp.volume.boundary_map()[s]]);
  }
  const double e = p_dirichlet_energy_volume(mp.volume, u, 2.5);
  EXPECT_NEAR(rayleigh_steklov(mp.volume, u, 2.5) * p_norm_surface(mp.surface, t, 2.5), e,
              1e-14 * e);
}

TEST(SteklovSolver, P2Values) {
  const MeshPair disk = generate(ShapeSpec::sphere(2, 1.0, 5));
  EXPECT_NEAR(solve_p2_steklov(disk.volume).value, 1.0, 0.005);
  const MeshPair disk2 = generate(ShapeSpec::sphere(2, 2.0, 5));
  EXPECT_NEAR(minimize_steklov(disk2.volume, 2.0).value, 0.5, 0.005);
  const MeshPair sq = generate(ShapeSpec::square(2.0, 4));
  const double R = 2.0 / std::sqrt(pi);
  EXPECT_LE(solve_p2_steklov(sq.volume).value, 1.0 / R);
}

class SteklovInvariants : public ::testing::TestWithParam<double> {};

TEST_P(SteklovInvariants, EstimateInvariants) {
  const double p = GetParam();
  const MeshPair mp = generate(ShapeSpec::ellipsoid({1.5, 1.0}, 3));
  const SteklovEstimate e = minimize_steklov(mp.volume, p);
  EXPECT_TRUE(e.converged);
  EXPECT_NEAR(p_norm_surface(mp.surface, e.boundary_trace, p), 1.0, 1e-10);
  EXPECT_LE(e.constraint_residual, 1e-8);
  EXPECT_NEAR(rayleigh_steklov(mp.volume, e.field, p), e.value, 1e-10 * e.value);
  for (std::size_t i = 1; i < e.history.size(); ++i) {
    EXPECT_LE(e.history[i], e.history[i - 1] * (1 + 1e-12));
  }
  // Interior optimality: nudging one interior vertex cannot lower the quotient
  // noticeably.
  std::vector<bool> on_boundary(mp.volume.num_vertices(), false);
  for (int v : mp.volume.boundary_map()) on_boundary[v] = true;
  int probed = 0;
  for (std::size_t v = 0; v < mp.volume.num_vertices() && probed < 20; v += 7) {
    if (on_boundary[v]) continue;
    for (double d : {-1e-5, 1e-5}) {
      ScalarField u = e.field;
      u.values[v] += d;
      EXPECT_GE(rayleigh_steklov(mp.volume, u, p), e.value * (1 - 1e-8)) << "vertex " << v;
    }
    ++probed;
  }
}

INSTANTIATE_TEST_SUITE_P(Exponents, SteklovInvariants, ::testing::Values(1.5, 2.0, 3.0));
