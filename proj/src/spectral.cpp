// SPDX-License-Identifier: Apache-2.0
#include "plap/spectral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace plap {

namespace {

void check_size(const ScalarField& u, std::size_t n) {
  if (u.values.size() != n) {
    throw std::invalid_argument("field size does not match vertex count");
  }
}

EigenEstimate from_quotient(QuotientResult r, double p) {
  EigenEstimate e;
  e.value = r.value;
  e.field.values = std::move(r.field);
  e.constraint_residual = r.constraint_residual;
  e.history = std::move(r.history);
  e.converged = r.converged;
  e.p = p;
  e.epsilon_final = r.epsilon_final;
  e.iterations = r.iterations;
  return e;
}

// Direct p = 2 solve, scaled to unit L2 quadrature norm.
EigenEstimate p2_estimate(const QuotientProblem& prob, std::span<const Vec3> x) {
  const SparseMatrix K = assemble_stiffness(*prob.elements, prob.num_unknowns);
  const SparseMatrix M = assemble_quad_mass(prob.quad, prob.num_unknowns);
  Eigenpair ep = smallest_nonzero_eigenpair(K, M, x);
  const QuadSums s = quad_sums(prob.quad, ep.vector, 2.0);
  const double scale = 1.0 / std::sqrt(s.norm);
  for (double& v : ep.vector) v *= scale;

  EigenEstimate e;
  e.value = ep.value;
  e.field.values = std::move(ep.vector);
  e.constraint_residual = std::abs(quad_sums(prob.quad, e.field.values, 2.0).moment);
  e.history = {ep.value};
  e.converged = true;
  e.p = 2.0;
  e.iterations = ep.iterations;
  e.residual = ep.residual;
  return e;
}

}  // namespace

void check_p_range(double p) {
  if (!(p >= kMinP && p <= kMaxP)) {
    std::ostringstream os;
    os << "p out of supported range [" << kMinP << ", " << kMaxP << "]: " << p;
    throw std::invalid_argument(os.str());
  }
}

double p_dirichlet_energy_surface(const SurfaceMesh& mesh, const ScalarField& u,
                                  double p, double eps) {
  check_size(u, mesh.num_vertices());
  return p_energy(mesh.elements(), u.values, p, eps);
}

double p_norm_surface(const SurfaceMesh& mesh, const ScalarField& u, double p) {
  check_size(u, mesh.num_vertices());
  return quad_sums(mesh.quadrature(), u.values, p).norm;
}

double p_moment_surface(const SurfaceMesh& mesh, const ScalarField& u, double p) {
  check_size(u, mesh.num_vertices());
  return quad_sums(mesh.quadrature(), u.values, p).moment;
}

ScalarField constraint_project(const SurfaceMesh& mesh, const ScalarField& u,
                               double p, double tol, double* shift) {
  check_size(u, mesh.num_vertices());
  Projection pr = project_moment(closed_problem(mesh), u.values, p, tol);
  if (shift) *shift = pr.shift;
  return {std::move(pr.field)};
}

double rayleigh_closed(const SurfaceMesh& mesh, const ScalarField& u, double p,
                       double eps) {
  check_size(u, mesh.num_vertices());
  return quotient_value(closed_problem(mesh), u.values, p, eps);
}

EigenEstimate solve_p2_closed(const SurfaceMesh& mesh) {
  return p2_estimate(closed_problem(mesh), mesh.vertices());
}

EigenEstimate minimize_closed(const SurfaceMesh& mesh, double p,
                              const SolverOptions& opts) {
  check_p_range(p);
  const QuotientProblem prob = closed_problem(mesh);
  const EigenEstimate init = solve_p2_closed(mesh);
  return from_quotient(minimize_quotient(prob, p, init.field.values, opts), p);
}

double p_dirichlet_energy_volume(const VolumeMesh& mesh, const ScalarField& u,
                                 double p, double eps) {
  check_size(u, mesh.num_vertices());
  return p_energy(mesh.elements(), u.values, p, eps);
}

ScalarField boundary_trace(const VolumeMesh& mesh, const ScalarField& u) {
  check_size(u, mesh.num_vertices());
  ScalarField t;
  t.values.reserve(mesh.boundary_map().size());
  for (int v : mesh.boundary_map()) t.values.push_back(u.values[v]);
  return t;
}

double rayleigh_steklov(const VolumeMesh& mesh, const ScalarField& u, double p,
                        double eps) {
  check_size(u, mesh.num_vertices());
  return quotient_value(steklov_problem(mesh), u.values, p, eps);
}

SteklovEstimate solve_p2_steklov(const VolumeMesh& mesh) {
  SteklovEstimate s;
  static_cast<EigenEstimate&>(s) = p2_estimate(steklov_problem(mesh), mesh.vertices());
  s.boundary_trace = boundary_trace(mesh, s.field);
  return s;
}

SteklovEstimate minimize_steklov(const VolumeMesh& mesh, double p,
                                 const SolverOptions& opts) {
  check_p_range(p);
  const QuotientProblem prob = steklov_problem(mesh);
  const SteklovEstimate init = solve_p2_steklov(mesh);
  SteklovEstimate s;
  static_cast<EigenEstimate&>(s) =
      from_quotient(minimize_quotient(prob, p, init.field.values, opts), p);
  s.boundary_trace = boundary_trace(mesh, s.field);
  return s;
}

}  // namespace plap
