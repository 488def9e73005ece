// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plap/geometry.hpp"
#include "plap/pcenter.hpp"
#include "plap/quotient.hpp"
#include "plap/shapes.hpp"

namespace plap {

/// n^(|p-2|/2) * lambda_1(S(R))^(p/2) * vol_M / |S(R)|, with the analytic
/// sphere eigenvalue (n-1)/R^2.
double closed_bound_rhs(int n, double p, double R, double vol_M);

/// 1/R^(p-1) for 1 < p < 2 and n^(p-2)/R^(p-1) for p >= 2.
double steklov_bound_rhs(int n, double p, double R);

struct Lemma1Check {
  double lhs = 0.0;    // integral over M of |x - q|^p
  double rhs = 0.0;    // R^p |S(R)|
  bool holds = false;  // lhs >= rhs (1 - mesh_tol)
  double slack = 0.0;  // rhs / lhs; 1 at equality
};

Lemma1Check check_lemma1(const SurfaceMesh& mesh, const Vec3& q, double p,
                         double R, double mesh_tol = 0.01);

/// max over facets of |sum_i |grad^M x_i|^2 - (n - 1)|.
double check_lemma3(const SurfaceMesh& mesh);

struct PowerSum {
  double lhs = 0.0;  // (sum y)^gamma
  double rhs = 0.0;  // sum y^gamma
  bool holds = false;
  bool equality = false;
};

/// Evaluates (y_1 + ... + y_n)^gamma >= y_1^gamma + ... + y_n^gamma.
/// Throws std::invalid_argument for negative entries or gamma < 1.
PowerSum power_sum(std::span<const double> y, double gamma);
bool power_sum_holds(std::span<const double> y, double gamma);

struct Verdict {
  bool checked = false;
  bool holds = false;
  double ratio = 0.0;  // estimate / rhs
};

struct BoundReport {
  std::string shape;
  int n = 0;
  double p = 0.0;
  double R = 0.0;
  double vol_M = 0.0;
  double vol_Omega = 0.0;
  std::optional<double> lambda_estimate;
  std::optional<double> mu_estimate;
  double closed_rhs = 0.0;
  double steklov_rhs = 0.0;
  double lemma1_lhs = 0.0;
  double lemma1_rhs = 0.0;
  double lemma3_max_deviation = 0.0;

  std::vector<double> pcenter;
  bool pcenter_in_closure = false;
  double pcenter_residual = 0.0;  // relative
  double pcenter_f_value = 0.0;

  double slack = 0.05;
  double lemma_tol = 0.01;
  Verdict closed;
  Verdict steklov;
  Verdict lemma1;

  // Solver metadata.
  bool lambda_converged = false;
  int lambda_iterations = 0;
  double lambda_constraint_residual = 0.0;
  bool mu_converged = false;
  int mu_iterations = 0;
  double mu_constraint_residual = 0.0;
  std::size_t surface_facets = 0;
  std::size_t volume_cells = 0;

  std::string timestamp;
  double elapsed_seconds = 0.0;
  std::vector<std::string> errors;

  /// True iff no stage failed and every checked inequality holds.
  bool all_hold() const;
};

/// Recomputes every verdict from the stored scalar fields; true iff they
/// agree with the stored verdicts and R reproduces vol_Omega.
bool report_consistent(const BoundReport& report);

struct VerifyOptions {
  SolverOptions solver;
  double slack = 0.05;
  double lemma_tol = 0.01;
  double pcenter_tol = 1e-10;
  bool closed = true;
  bool steklov = true;
};

/// generate -> measures -> p-center -> eigensolvers -> bounds -> lemmas.
/// Stage failures are recorded in `errors`; only invalid shape parameters
/// throw (std::invalid_argument).
BoundReport verify_shape(const ShapeSpec& spec, double p,
                         const VerifyOptions& opts = {});

/// Same pipeline for prebuilt meshes. `volume` may be null, in which case
/// the Steklov stage is skipped.
BoundReport verify_meshes(const std::string& descriptor,
                          const SurfaceMesh& surface, const VolumeMesh* volume,
                          double p, const VerifyOptions& opts = {});

}  // namespace plap
