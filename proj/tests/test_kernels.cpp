// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "plap/kernels.hpp"
#include "plap/shapes.hpp"

using namespace plap;

namespace {

std::vector<double> random_field(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> u(n);
  for (double& x : u) x = d(rng);
  return u;
}

}  // namespace

class KernelExec : public ::testing::TestWithParam<double> {};

TEST_P(KernelExec, SerialAndParallelAgreeBitwise) {
  const double p = GetParam();
  const MeshPair mp = generate(ShapeSpec::perturbed_sphere(3, 0.15, 3, 3));
  for (const auto* elems : {&mp.surface.elements(), &mp.volume.elements()}) {
    const auto& inc = elems == &mp.surface.elements() ? mp.surface.incidence()
                                                     : mp.volume.incidence();
    const std::size_t n = inc.offsets.size() - 1;
    const auto u = random_field(n, 7);
    std::vector<double> gs(n), gp(n);
    const double es = p_energy_gradient(*elems, inc, u, p, 1e-3, gs, Exec::serial);
    const double ep = p_energy_gradient(*elems, inc, u, p, 1e-3, gp, Exec::parallel);
    EXPECT_EQ(es, ep);
    EXPECT_EQ(gs, gp);
    EXPECT_EQ(p_energy(*elems, u, p, 1e-3, Exec::serial),
              p_energy(*elems, u, p, 1e-3, Exec::parallel));
    std::vector<double> ws(elems->size()), wp(elems->size());
    p_energy_weights(*elems, u, p, 1e-3, ws, Exec::serial);
    p_energy_weights(*elems, u, p, 1e-3, wp, Exec::parallel);
    EXPECT_EQ(ws, wp);
  }
  const auto quad = mp.volume.boundary_quadrature();
  const auto u = random_field(mp.volume.num_vertices(), 11);
  const QuadSums qs = quad_sums(quad, u, p, Exec::serial);
  const QuadSums qp = quad_sums(quad, u, p, Exec::parallel);
  EXPECT_EQ(qs.norm, qp.norm);
  EXPECT_EQ(qs.moment, qp.moment);
  EXPECT_EQ(qs.abs_pm1, qp.abs_pm1);
  std::vector<double> ns(u.size()), np(u.size());
  quad_norm_gradient(quad, u, p, ns, Exec::serial);
  quad_norm_gradient(quad, u, p, np, Exec::parallel);
  EXPECT_EQ(ns, np);
}

TEST_P(KernelExec, EnergyGradientMatchesFiniteDifferences) {
  const double p = GetParam();
  const MeshPair mp = generate(ShapeSpec::ellipsoid({1.2, 1.0, 0.9}, 1));
  const auto& elems = mp.volume.elements();
  const auto u = random_field(mp.volume.num_vertices(), 3);
  std::vector<double> g(u.size());
  const double eps = 1e-2;
  p_energy_gradient(elems, mp.volume.incidence(), u, p, eps, g);
  for (std::size_t i = 0; i < u.size(); i += 5) {
    auto up = u, um = u;
    const double h = 1e-6;
    up[i] += h;
    um[i] -= h;
    const double fd = (p_energy(elems, up, p, eps) - p_energy(elems, um, p, eps)) / (2 * h);
    EXPECT_NEAR(g[i], fd, 1e-6 * std::max(1.0, std::abs(fd))) << "node " << i;
  }
}

INSTANTIATE_TEST_SUITE_P(Exponents, KernelExec, ::testing::Values(1.3, 1.5, 2.0, 3.0, 6.0));

TEST(Kernels, ConstantFieldHasZeroEnergy) {
  const SurfaceMesh m = generate_surface(ShapeSpec::sphere(3, 1.0, 2));
  const std::vector<double> c(m.num_vertices(), 4.2);
  EXPECT_LT(p_energy(m.elements(), c, 3.0, 0.0), 1e-30);
}

TEST(Kernels, LinearFieldOnBall) {
  const MeshPair mp = generate(ShapeSpec::sphere(3, 1.0, 4));
  const auto x = coordinate_field(mp.volume.vertices(), 0);
  const double vol = mp.volume.total_volume();
  EXPECT_NEAR(p_energy(mp.volume.elements(), x, 2.0, 0.0), vol, 1e-12 * vol);
  EXPECT_NEAR(p_energy(mp.volume.elements(), x, 4.0, 0.0), vol, 1e-12 * vol);
  EXPECT_NEAR(vol, 4 * std::numbers::pi / 3, 0.01 * 4 * std::numbers::pi / 3);
}

TEST(Kernels, QuadSumsOfOneGiveMeasure) {
  const SurfaceMesh m = generate_surface(ShapeSpec::ellipsoid({1.2, 1.0, 0.9}, 2));
  const std::vector<double> one(m.num_vertices(), 1.0);
  const QuadSums s = quad_sums(m.quadrature(), one, 2.5);
  EXPECT_NEAR(s.norm, surface_measure(m), 1e-13);
  EXPECT_NEAR(s.moment, surface_measure(m), 1e-13);
}
