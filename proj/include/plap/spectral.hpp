// SPDX-License-Identifier: Apache-2.0
#pragma once

// First nonzero eigenvalues of the p-Laplacian: the closed problem on a
// surface mesh and the Steklov problem on a volume mesh, both computed by
// minimizing a Rayleigh quotient over P1 fields with zero boundary p-moment.

#include <vector>

#include "plap/geometry.hpp"
#include "plap/quotient.hpp"

namespace plap {

/// Nodal values of a P1 field on a mesh with `values.size()` vertices.
struct ScalarField {
  std::vector<double> values;
};

struct EigenEstimate {
  double value = 0.0;
  ScalarField field;  // normalized: integral of |u|^p over M equals 1
  double constraint_residual = 0.0;
  std::vector<double> history;
  bool converged = false;
  double p = 2.0;
  double epsilon_final = 0.0;
  int iterations = 0;
  double residual = 0.0;  // p = 2 direct solves only: ||Ku - lambda Mu|| / ||Ku||
};

struct SteklovEstimate : EigenEstimate {
  ScalarField boundary_trace;
};

// -- closed problem ---------------------------------------------------------

double p_dirichlet_energy_surface(const SurfaceMesh& mesh, const ScalarField& u,
                                  double p, double eps = 0.0);
double p_norm_surface(const SurfaceMesh& mesh, const ScalarField& u, double p);
double p_moment_surface(const SurfaceMesh& mesh, const ScalarField& u, double p);

/// u - c with c the p-mean of the quadrature samples of u.
ScalarField constraint_project(const SurfaceMesh& mesh, const ScalarField& u,
                               double p, double tol = 1e-14,
                               double* shift = nullptr);

double rayleigh_closed(const SurfaceMesh& mesh, const ScalarField& u, double p,
                       double eps = 0.0);

/// p = 2: P1 stiffness against the quadrature mass matrix.
EigenEstimate solve_p2_closed(const SurfaceMesh& mesh);

EigenEstimate minimize_closed(const SurfaceMesh& mesh, double p,
                              const SolverOptions& opts = {});

// -- Steklov problem --------------------------------------------------------

double p_dirichlet_energy_volume(const VolumeMesh& mesh, const ScalarField& u,
                                 double p, double eps = 0.0);

/// Restriction of a volume field to the boundary mesh vertices.
ScalarField boundary_trace(const VolumeMesh& mesh, const ScalarField& u);

double rayleigh_steklov(const VolumeMesh& mesh, const ScalarField& u, double p,
                        double eps = 0.0);

/// p = 2: volume stiffness against the boundary quadrature mass matrix.
SteklovEstimate solve_p2_steklov(const VolumeMesh& mesh);

SteklovEstimate minimize_steklov(const VolumeMesh& mesh, double p,
                                 const SolverOptions& opts = {});

/// Supported exponent range for the eigensolvers.
inline constexpr double kMinP = 1.1;
inline constexpr double kMaxP = 10.0;
void check_p_range(double p);

}  // namespace plap
