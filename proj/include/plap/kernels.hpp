// SPDX-License-Identifier: Apache-2.0
#pragma once

// Element-level kernels for the regularized p-Dirichlet energy and the
// boundary quadrature sums. Every kernel has a serial reference path and an
// OpenMP path; both accumulate in the same order and agree bit for bit.

#include <span>

#include "plap/geometry.hpp"

namespace plap {

enum class Exec { serial, parallel };

/// sum_e |e| (|grad u|_e^2 + eps^2)^(p/2).
double p_energy(const P1Elements& elems, std::span<const double> u, double p,
                double eps, Exec exec = Exec::parallel);

/// Energy as above; writes d(energy)/du into `grad` (size = #unknowns).
double p_energy_gradient(const P1Elements& elems, const Incidence& incidence,
                         std::span<const double> u, double p, double eps,
                         std::span<double> grad, Exec exec = Exec::parallel);

/// Per-element gradient of the P1 field.
void element_gradients(const P1Elements& elems, std::span<const double> u,
                       std::span<Vec3> out, Exec exec = Exec::parallel);

/// Per-element weights (|g|^2 + eps^2)^((p-2)/2), used to build the
/// linearized stiffness preconditioner.
void p_energy_weights(const P1Elements& elems, std::span<const double> u,
                      double p, double eps, std::span<double> out,
                      Exec exec = Exec::parallel);

struct QuadSums {
  double norm = 0.0;      // sum w |s|^p
  double moment = 0.0;    // sum w |s|^(p-2) s
  double abs_pm1 = 0.0;   // sum w |s|^(p-1), the natural scale of `moment`
};

QuadSums quad_sums(std::span<const QuadPoint> quad, std::span<const double> u,
                   double p, Exec exec = Exec::parallel);

/// Gradient of sum w |s|^p with s = (u[a] + u[b]) / 2.
void quad_norm_gradient(std::span<const QuadPoint> quad,
                        std::span<const double> u, double p,
                        std::span<double> grad, Exec exec = Exec::parallel);

/// Sampled values (u[a] + u[b]) / 2 and the weights, for 1-D p-means.
void quad_samples(std::span<const QuadPoint> quad, std::span<const double> u,
                  std::span<double> values, std::span<double> weights);

}  // namespace plap
