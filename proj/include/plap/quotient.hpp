// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared machinery for the closed and Steklov eigensolvers: a P1 energy
// over some simplices divided by a p-norm sampled at boundary quadrature
// nodes, subject to a vanishing p-moment.

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "plap/geometry.hpp"
#include "plap/kernels.hpp"

namespace plap {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct SolverOptions {
  int max_iters = 5000;
  /// Regularization continuation for p < 2: eps_start, eps_start*eps_factor,
  /// ... down to eps_final. Ignored for p >= 2 (eps = 0).
  double eps_start = 1e-2;
  double eps_final = 1e-8;
  double eps_factor = 0.1;
  double armijo = 1e-4;
  /// Stop a continuation round when the objective changes by less than
  /// stall_tol (relative) over stall_window iterations.
  double stall_tol = 1e-9;
  int stall_window = 10;
  /// Iterations between rebuilds of the linearized stiffness preconditioner.
  int precond_refresh = 10;
  Exec exec = Exec::parallel;
};

struct QuotientProblem {
  const P1Elements* elements = nullptr;
  const Incidence* incidence = nullptr;
  std::span<const QuadPoint> quad;
  int num_unknowns = 0;
};

QuotientProblem closed_problem(const SurfaceMesh& mesh);
QuotientProblem steklov_problem(const VolumeMesh& mesh);

/// P1 stiffness sum_e w_e |e| grad(phi_i).grad(phi_j); unit weights if empty.
SparseMatrix assemble_stiffness(const P1Elements& elems, int num_unknowns,
                                std::span<const double> weights = {});

/// Mass matrix of the quadrature rule: sum_q w_q b_q b_q^T with
/// b_q = (e_a + e_b) / 2. Exact P1 mass for triangle edge-midpoint rules.
SparseMatrix assemble_quad_mass(std::span<const QuadPoint> quad,
                                int num_unknowns);

/// Result of a constant-shift projection onto the zero-p-moment set.
struct Projection {
  std::vector<double> field;
  double shift = 0.0;
  double moment = 0.0;
};

/// u - c with c the p-mean of the quadrature samples of u. Throws
/// std::invalid_argument if the projected field vanishes at every node.
Projection project_moment(const QuotientProblem& prob,
                          std::span<const double> u, double p,
                          double tol = 1e-14);

/// energy_eps(u) / sum w |s|^p. Throws std::invalid_argument if the
/// denominator vanishes.
double quotient_value(const QuotientProblem& prob, std::span<const double> u,
                      double p, double eps, Exec exec = Exec::parallel);

/// Analytic gradient of quotient_value with respect to the nodal values.
double quotient_gradient(const QuotientProblem& prob, std::span<const double> u,
                         double p, double eps, std::span<double> grad,
                         Exec exec = Exec::parallel);

struct QuotientResult {
  std::vector<double> field;
  double value = 0.0;             // eps-free quotient at the final iterate
  double constraint_residual = 0.0;
  double norm = 0.0;              // sum w |s|^p of the final field
  std::vector<double> history;    // regularized objective per accepted step
  bool converged = false;
  double epsilon_final = 0.0;
  int iterations = 0;
};

/// Preconditioned projected gradient descent on the quotient over fields
/// with zero p-moment and unit p-norm, started from `init`.
QuotientResult minimize_quotient(const QuotientProblem& prob, double p,
                                 std::span<const double> init,
                                 const SolverOptions& opts);

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;  // ||K u - lambda M u|| / ||K u||
  int iterations = 0;
};

/// Smallest nonzero eigenpair of K u = lambda M u for a connected P1
/// problem (constants span the kernel of K). Block inverse iteration with
/// Rayleigh-Ritz and deflation of constants. Throws std::runtime_error if
/// the shifted matrix cannot be factored.
Eigenpair smallest_nonzero_eigenpair(const SparseMatrix& K,
                                     const SparseMatrix& M,
                                     std::span<const Vec3> positions,
                                     double tol = 1e-9, int max_iters = 1000);

/// Flips the sign so that the entry of largest magnitude is positive.
void normalize_sign(std::span<double> u);

}  // namespace plap
