// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>

#include "plap/geometry.hpp"

namespace plap {

/// Weighted p-mean: the unique root tau of
///   F(tau) = sum_j w_j |v_j - tau|^(p-2) (v_j - tau),
/// a strictly decreasing function bracketed by [min v, max v].
struct PMean {
  double value = 0.0;
  double residual = 0.0;  // F(value)
  double scale = 0.0;     // sum_j w_j |v_j - value|^(p-1)
  int iterations = 0;
};

/// Safeguarded Newton iteration inside a shrinking bisection bracket.
/// Stops once |F| <= tol * scale or the bracket collapses to adjacent
/// doubles; at most 200 steps.
PMean p_mean_1d(std::span<const double> values, std::span<const double> weights,
                double p, double tol = 1e-10);

/// Evaluates F(tau) and its scale directly; used to certify p-means.
PMean p_moment_1d(std::span<const double> values,
                  std::span<const double> weights, double p, double tau);

struct PCenterResult {
  int dim = 3;
  Vec3 t = Vec3::Zero();
  std::array<double, 3> residuals{};  // integral of |x_i - t_i|^(p-2)(x_i - t_i)
  std::array<double, 3> scales{};     // integral of |x_i - t_i|^(p-1)
  std::array<int, 3> iterations{};
  double f_value = 0.0;               // (1/p) integral of sum |x_i - t_i|^p
  bool in_closure = false;

  /// max_i |residual_i| / scale_i.
  double relative_residual() const;
};

/// Per-coordinate p-means of the surface quadrature samples. Membership of
/// t in the closed domain is decided by point location in `volume` when
/// given, otherwise by the winding number of `surface`.
PCenterResult p_center(const SurfaceMesh& surface, const VolumeMesh* volume,
                       double p, double tol = 1e-10);
PCenterResult p_center(const SurfaceMesh& surface, const VolumeMesh& volume,
                       double p, double tol = 1e-10);

/// f(t) = (1/p) integral over M of sum_i |x_i - t_i|^p.
double p_center_objective(const SurfaceMesh& surface, const Vec3& t, double p);

/// Area-weighted vertex mean (vertex lumping); exact surface centroid for
/// polyhedral meshes.
Vec3 centroid(const SurfaceMesh& surface);

/// Generalized winding number of a closed surface about x (1 inside, 0
/// outside, 1/2 on smooth boundary points).
double winding_number(const SurfaceMesh& surface, const Vec3& x);

}  // namespace plap
