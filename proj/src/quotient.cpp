// SPDX-License-Identifier: Apache-2.0
#include "plap/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "plap/pcenter.hpp"

namespace plap {

namespace {

using Vector = Eigen::VectorXd;

// One accepted state of the descent: a projected, normalized field and its
// regularized energy.
struct State {
  std::vector<double> u;
  double energy = 0.0;
};

// Projects onto the zero-moment set and rescales to unit p-norm.
bool make_admissible(const QuotientProblem& prob, std::vector<double>& u,
                     double p, Exec exec) {
  Projection pr;
  try {
    pr = project_moment(prob, u, p);
  } catch (const std::invalid_argument&) {
    return false;
  }
  const double norm = quad_sums(prob.quad, pr.field, p, exec).norm;
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  const double s = std::pow(norm, -1.0 / p);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = pr.field[i] * s;
  return true;
}

class Preconditioner {
 public:
  Preconditioner(const QuotientProblem& prob, Exec exec)
      : prob_(prob), exec_(exec), mass_(assemble_quad_mass(prob.quad, prob.num_unknowns)) {}

  // Linearized energy Hessian per element, w (I + (p-2) g g^T / |g|_eps^2)
  // with w = |g|_eps^(p-2) floored, plus a boundary-mass shift.
  void rebuild(std::span<const double> u, double p, double eps, double shift) {
    const P1Elements& el = *prob_.elements;
    std::vector<double> w(el.size());
    std::vector<Vec3> g(el.size());
    p_energy_weights(el, u, p, eps, w, exec_);
    element_gradients(el, u, g, exec_);
    double mean = 0.0;
    for (double x : w) mean += x;
    mean /= static_cast<double>(w.size());
    const double floor = 1e-3 * mean;

    const int k = el.nodes_per_element;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(el.size() * k * k);
    for (std::size_t e = 0; e < el.size(); ++e) {
      const double s = g[e].squaredNorm() + eps * eps;
      Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
      if (s > 0.0) D += ((p - 2.0) / s) * (g[e] * g[e].transpose());
      D *= std::max(w[e], floor) * el.measure[e];
      for (int i = 0; i < k; ++i) {
        const Vec3 Dg = D * el.grads[e][i];
        for (int j = 0; j < k; ++j) {
          trip.emplace_back(el.nodes[e][j], el.nodes[e][i], Dg.dot(el.grads[e][j]));
        }
      }
    }
    SparseMatrix A(prob_.num_unknowns, prob_.num_unknowns);
    A.setFromTriplets(trip.begin(), trip.end());
    A += shift * mass_;
    if (!analyzed_) {
      solver_.analyzePattern(A);
      analyzed_ = true;
    }
    solver_.factorize(A);
    if (solver_.info() != Eigen::Success) {
      throw std::runtime_error("preconditioner factorization failed");
    }
  }

  Vector apply(const Vector& g) const { return solver_.solve(g); }

 private:
  const QuotientProblem& prob_;
  Exec exec_;
  SparseMatrix mass_;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
  bool analyzed_ = false;
};

}  // namespace

QuotientProblem closed_problem(const SurfaceMesh& mesh) {
  return {&mesh.elements(), &mesh.incidence(), mesh.quadrature(),
          static_cast<int>(mesh.num_vertices())};
}

QuotientProblem steklov_problem(const VolumeMesh& mesh) {
  return {&mesh.elements(), &mesh.incidence(), mesh.boundary_quadrature(),
          static_cast<int>(mesh.num_vertices())};
}

SparseMatrix assemble_stiffness(const P1Elements& el, int n,
                                std::span<const double> weights) {
  std::vector<Eigen::Triplet<double>> trip;
  const int k = el.nodes_per_element;
  trip.reserve(el.size() * k * k);
  for (std::size_t e = 0; e < el.size(); ++e) {
    const double s = el.measure[e] * (weights.empty() ? 1.0 : weights[e]);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        trip.emplace_back(el.nodes[e][i], el.nodes[e][j],
                          s * el.grads[e][i].dot(el.grads[e][j]));
      }
    }
  }
  SparseMatrix K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SparseMatrix assemble_quad_mass(std::span<const QuadPoint> quad, int n) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * quad.size());
  for (const auto& q : quad) {
    const double w = 0.25 * q.weight;
    trip.emplace_back(q.a, q.a, w);
    trip.emplace_back(q.a, q.b, w);
    trip.emplace_back(q.b, q.a, w);
    trip.emplace_back(q.b, q.b, w);
  }
  SparseMatrix M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

Projection project_moment(const QuotientProblem& prob, std::span<const double> u,
                          double p, double tol) {
  std::vector<double> values(prob.quad.size());
  std::vector<double> weights(prob.quad.size());
  quad_samples(prob.quad, u, values, weights);
  const PMean m = p_mean_1d(values, weights, p, tol);
  Projection out;
  out.shift = m.value;
  out.field.assign(u.begin(), u.end());
  bool nonzero = false;
  for (double& x : out.field) {
    x -= m.value;
    nonzero = nonzero || x != 0.0;
  }
  if (!nonzero) {
    throw std::invalid_argument("projection of a constant field vanishes");
  }
  out.moment = quad_sums(prob.quad, out.field, p, Exec::serial).moment;
  return out;
}

double quotient_value(const QuotientProblem& prob, std::span<const double> u,
                      double p, double eps, Exec exec) {
  const double norm = quad_sums(prob.quad, u, p, exec).norm;
  if (!(norm > 0.0)) throw std::invalid_argument("quotient of a zero field");
  return p_energy(*prob.elements, u, p, eps, exec) / norm;
}

double quotient_gradient(const QuotientProblem& prob, std::span<const double> u,
                         double p, double eps, std::span<double> grad,
                         Exec exec) {
  const double norm = quad_sums(prob.quad, u, p, exec).norm;
  if (!(norm > 0.0)) throw std::invalid_argument("quotient of a zero field");
  std::vector<double> gn(u.size());
  const double energy =
      p_energy_gradient(*prob.elements, *prob.incidence, u, p, eps, grad, exec);
  quad_norm_gradient(prob.quad, u, p, gn, exec);
  const double r = energy / norm;
  for (std::size_t i = 0; i < u.size(); ++i) grad[i] = (grad[i] - r * gn[i]) / norm;
  return r;
}

QuotientResult minimize_quotient(const QuotientProblem& prob, double p,
                                 std::span<const double> init,
                                 const SolverOptions& opts) {
  if (static_cast<int>(init.size()) != prob.num_unknowns) {
    throw std::invalid_argument("initial field has the wrong size");
  }
  const Exec exec = opts.exec;
  const std::size_t n = init.size();

  std::vector<double> eps_schedule;
  if (p < 2.0) {
    for (double eps = opts.eps_start; eps > opts.eps_final * (1.0 + 1e-12);
         eps *= opts.eps_factor) {
      eps_schedule.push_back(eps);
    }
    eps_schedule.push_back(opts.eps_final);
  } else {
    eps_schedule.push_back(0.0);
  }

  State cur;
  cur.u.assign(init.begin(), init.end());
  if (!make_admissible(prob, cur.u, p, exec)) {
    throw std::invalid_argument("initial field is constant");
  }

  QuotientResult res;
  Preconditioner precond(prob, exec);
  std::vector<double> ge(n), gn(n), trial(n);
  double alpha = 1.0;
  int total_iters = 0;
  bool budget_exhausted = false;
  bool last_round_converged = false;

  for (const double eps : eps_schedule) {
    cur.energy = p_energy(*prob.elements, cur.u, p, eps, exec);
    res.history.push_back(cur.energy);
    const std::size_t round_start = res.history.size() - 1;
    // The metric is rebuilt after `interval` steps; the interval doubles up
    // to 16 * precond_refresh since factorizations dominate late iterations.
    int since_refresh = 0;
    int interval = std::max(opts.precond_refresh, 1);
    bool factored = false;
    last_round_converged = false;

    while (true) {
      if (total_iters >= opts.max_iters) {
        budget_exhausted = true;
        break;
      }
      const std::size_t k = res.history.size() - 1;
      if (k - round_start >= static_cast<std::size_t>(opts.stall_window)) {
        const double old = res.history[k - opts.stall_window];
        if (std::abs(old - cur.energy) <= opts.stall_tol * std::abs(cur.energy)) {
          last_round_converged = true;
          break;
        }
      }

      // Gradient of u -> E(normalize(project(u))) at an admissible u.
      p_energy_gradient(*prob.elements, *prob.incidence, cur.u, p, eps, ge, exec);
      quad_norm_gradient(prob.quad, cur.u, p, gn, exec);
      double ge_dot_u = 0.0;
      for (std::size_t i = 0; i < n; ++i) ge_dot_u += ge[i] * cur.u[i];
      Vector g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = ge[i] - ge_dot_u / p * gn[i];

      const bool fixed_metric = (p == 2.0);
      if (!factored || (!fixed_metric && since_refresh >= interval)) {
        precond.rebuild(cur.u, p, eps, 0.1 * std::max(cur.energy, 1e-12));
        if (factored) interval = std::min(2 * interval, 16 * std::max(opts.precond_refresh, 1));
        factored = true;
        since_refresh = 0;
      }
      ++since_refresh;
      const Vector d = precond.apply(g);
      const double slope = g.dot(d);
      if (!(slope > 0.0) || !std::isfinite(slope)) {
        last_round_converged = true;
        break;
      }

      bool accepted = false;
      bool first_try = true;
      for (int ls = 0; ls < 60; ++ls) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = cur.u[i] - alpha * d[i];
        if (make_admissible(prob, trial, p, exec)) {
          const double e = p_energy(*prob.elements, trial, p, eps, exec);
          if (e <= cur.energy - opts.armijo * alpha * slope) {
            cur.u.swap(trial);
            cur.energy = e;
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
        first_try = false;
      }
      ++total_iters;
      if (!accepted) {
        // No representable descent left at this regularization.
        alpha = 1.0;
        last_round_converged = true;
        break;
      }
      res.history.push_back(cur.energy);
      if (first_try) alpha = std::min(2.0 * alpha, 16.0);
    }
    res.epsilon_final = eps;
    if (budget_exhausted) break;
  }

  normalize_sign(cur.u);
  const QuadSums sums = quad_sums(prob.quad, cur.u, p, exec);
  res.value = p_energy(*prob.elements, cur.u, p, 0.0, exec) / sums.norm;
  res.constraint_residual = std::abs(sums.moment);
  res.norm = sums.norm;
  res.iterations = total_iters;
  res.converged = !budget_exhausted && last_round_converged;
  res.field = std::move(cur.u);
  return res;
}

void normalize_sign(std::span<double> u) {
  double best = 0.0;
  for (double x : u) {
    if (std::abs(x) > std::abs(best)) best = x;
  }
  if (best < 0.0) {
    for (double& x : u) x = -x;
  }
}

Eigenpair smallest_nonzero_eigenpair(const SparseMatrix& K, const SparseMatrix& M,
                                     std::span<const Vec3> positions, double tol,
                                     int max_iters) {
  const Eigen::Index n = K.rows();
  if (n < 2) throw std::invalid_argument("eigenproblem needs at least 2 unknowns");
  const Vector ones = Vector::Ones(n);
  const Vector m1 = M * ones;
  const double m11 = ones.dot(m1);
  if (!(m11 > 0.0)) throw std::invalid_argument("mass matrix annihilates constants");

  auto deflate = [&](Vector& v) { v -= (m1.dot(v) / m11) * ones; };

  // Shift scale from the Rayleigh quotients of the centered coordinates.
  double rmin = std::numeric_limits<double>::infinity();
  std::vector<Vector> coords;
  for (int axis = 0; axis < 3; ++axis) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = positions[i][axis];
    deflate(x);
    const double den = x.dot(M * x);
    if (den > 1e-14 * m11) {
      rmin = std::min(rmin, x.dot(K * x) / den);
      coords.push_back(x);
    }
  }
  const double sigma = std::isfinite(rmin) && rmin > 0.0 ? 0.1 * rmin : 1.0;

  SparseMatrix A = K + sigma * M;
  Eigen::SimplicialLDLT<SparseMatrix> solver(A);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("singular shifted stiffness (disconnected mesh?)");
  }

  const int block = static_cast<int>(std::min<Eigen::Index>(6, n - 1));
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto random_vector = [&] {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = unif(rng);
    return v;
  };

  Eigen::MatrixXd V(n, block);
  for (int j = 0; j < block; ++j) {
    V.col(j) = j < static_cast<int>(coords.size()) ? coords[j] : random_vector();
  }

  // M-orthonormalize the block against constants and itself.
  auto orthonormalize = [&](Eigen::MatrixXd& B) {
    for (int j = 0; j < B.cols(); ++j) {
      for (int attempt = 0; attempt < 3; ++attempt) {
        Vector v = B.col(j);
        deflate(v);
        for (int i = 0; i < j; ++i) v -= B.col(i).dot(M * v) * B.col(i);
        const double nrm = std::sqrt(std::max(v.dot(M * v), 0.0));
        const double ref = std::sqrt(std::max(Vector(B.col(j)).dot(M * B.col(j)), 0.0));
        if (nrm > 1e-10 * ref && nrm > 0.0) {
          B.col(j) = v / nrm;
          break;
        }
        B.col(j) = solver.solve(M * random_vector());
      }
    }
  };

  Eigenpair out;
  orthonormalize(V);
  for (int it = 1; it <= max_iters; ++it) {
    Eigen::MatrixXd MV = M * V;
    for (int j = 0; j < block; ++j) V.col(j) = solver.solve(MV.col(j));
    orthonormalize(V);

    const Eigen::MatrixXd KV = K * V;
    Eigen::MatrixXd Kp = V.transpose() * KV;
    Kp = 0.5 * (Kp + Kp.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Kp);
    V = V * ritz.eigenvectors();

    const Vector v0 = V.col(0);
    const double theta = ritz.eigenvalues()[0];
    const Vector kv = K * v0;
    const double rel = (kv - theta * (M * v0)).norm() / kv.norm();
    out.value = theta;
    out.residual = rel;
    out.iterations = it;
    if (rel <= tol) break;
  }
  if (out.residual > tol) {
    throw std::runtime_error("inverse iteration did not reach the residual tolerance");
  }
  out.vector.assign(V.col(0).data(), V.col(0).data() + n);
  normalize_sign(out.vector);
  return out;
}

}  // namespace plap
