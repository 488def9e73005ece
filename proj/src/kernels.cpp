// SPDX-License-Identifier: Apache-2.0
#include "plap/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace plap {

namespace {

inline Vec3 local_gradient(const P1Elements& el, std::size_t e,
                           std::span<const double> u) {
  Vec3 g = Vec3::Zero();
  for (int j = 0; j < el.nodes_per_element; ++j) {
    g += u[el.nodes[e][j]] * el.grads[e][j];
  }
  return g;
}

// Energy density and the coefficient c with d(density)/dg = c g.
inline void density(const Vec3& g, double p, double eps, double& value,
                    double& coef) {
  const double s = g.squaredNorm() + eps * eps;
  if (s == 0.0) {
    value = 0.0;
    coef = 0.0;
    return;
  }
  const double sp = std::pow(s, 0.5 * p - 1.0);
  value = sp * s;
  coef = p * sp;
}

inline double signed_pow(double s, double e) {
  return s == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s), e), s);
}

}  // namespace

double p_energy(const P1Elements& el, std::span<const double> u, double p,
                double eps, Exec exec) {
  const long ne = static_cast<long>(el.size());
  std::vector<double> local(ne);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long e = 0; e < ne; ++e) {
      double v, c;
      density(local_gradient(el, e, u), p, eps, v, c);
      local[e] = el.measure[e] * v;
    }
  } else {
    for (long e = 0; e < ne; ++e) {
      double v, c;
      density(local_gradient(el, e, u), p, eps, v, c);
      local[e] = el.measure[e] * v;
    }
  }
  double total = 0.0;
  for (double x : local) total += x;
  return total;
}

double p_energy_gradient(const P1Elements& el, const Incidence& inc,
                         std::span<const double> u, double p, double eps,
                         std::span<double> grad, Exec exec) {
  const long ne = static_cast<long>(el.size());
  const long nv = static_cast<long>(grad.size());
  if (static_cast<long>(inc.offsets.size()) != nv + 1) {
    throw std::invalid_argument("gradient size does not match incidence");
  }
  std::vector<double> local(ne);

  if (exec == Exec::serial) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (long e = 0; e < ne; ++e) {
      const Vec3 g = local_gradient(el, e, u);
      double v, c;
      density(g, p, eps, v, c);
      local[e] = el.measure[e] * v;
      const Vec3 flux = (el.measure[e] * c) * g;
      for (int j = 0; j < el.nodes_per_element; ++j) {
        grad[el.nodes[e][j]] += flux.dot(el.grads[e][j]);
      }
    }
  } else {
    std::vector<Vec3> flux(ne);
#pragma omp parallel for schedule(static)
    for (long e = 0; e < ne; ++e) {
      const Vec3 g = local_gradient(el, e, u);
      double v, c;
      density(g, p, eps, v, c);
      local[e] = el.measure[e] * v;
      flux[e] = (el.measure[e] * c) * g;
    }
    // Gather in ascending element order, matching the serial scatter.
#pragma omp parallel for schedule(static)
    for (long v = 0; v < nv; ++v) {
      double acc = 0.0;
      for (int k = inc.offsets[v]; k < inc.offsets[v + 1]; ++k) {
        const int e = inc.element[k];
        acc += flux[e].dot(el.grads[e][inc.slot[k]]);
      }
      grad[v] = acc;
    }
  }
  double total = 0.0;
  for (double x : local) total += x;
  return total;
}

void element_gradients(const P1Elements& el, std::span<const double> u,
                       std::span<Vec3> out, Exec exec) {
  const long ne = static_cast<long>(el.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long e = 0; e < ne; ++e) out[e] = local_gradient(el, e, u);
  } else {
    for (long e = 0; e < ne; ++e) out[e] = local_gradient(el, e, u);
  }
}

void p_energy_weights(const P1Elements& el, std::span<const double> u,
                      double p, double eps, std::span<double> out, Exec exec) {
  const long ne = static_cast<long>(el.size());
  auto weight = [&](long e) {
    const double s = local_gradient(el, e, u).squaredNorm() + eps * eps;
    return s == 0.0 ? (p >= 2.0 ? 0.0 : 1.0) : std::pow(s, 0.5 * p - 1.0);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long e = 0; e < ne; ++e) out[e] = weight(e);
  } else {
    for (long e = 0; e < ne; ++e) out[e] = weight(e);
  }
}

QuadSums quad_sums(std::span<const QuadPoint> quad, std::span<const double> u,
                   double p, Exec exec) {
  const long nq = static_cast<long>(quad.size());
  std::vector<double> norm(nq), moment(nq), absv(nq);
  auto body = [&](long q) {
    const double s = 0.5 * (u[quad[q].a] + u[quad[q].b]);
    const double a = std::abs(s);
    const double pm1 = a == 0.0 ? 0.0 : std::pow(a, p - 1.0);
    const double w = quad[q].weight;
    norm[q] = w * pm1 * a;
    moment[q] = w * std::copysign(pm1, s);
    absv[q] = w * pm1;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long q = 0; q < nq; ++q) body(q);
  } else {
    for (long q = 0; q < nq; ++q) body(q);
  }
  QuadSums out;
  for (long q = 0; q < nq; ++q) {
    out.norm += norm[q];
    out.moment += moment[q];
    out.abs_pm1 += absv[q];
  }
  return out;
}

void quad_norm_gradient(std::span<const QuadPoint> quad,
                        std::span<const double> u, double p,
                        std::span<double> grad, Exec exec) {
  const long nq = static_cast<long>(quad.size());
  std::vector<double> d(nq);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long q = 0; q < nq; ++q) {
      const double s = 0.5 * (u[quad[q].a] + u[quad[q].b]);
      d[q] = 0.5 * p * quad[q].weight * signed_pow(s, p - 1.0);
    }
  } else {
    for (long q = 0; q < nq; ++q) {
      const double s = 0.5 * (u[quad[q].a] + u[quad[q].b]);
      d[q] = 0.5 * p * quad[q].weight * signed_pow(s, p - 1.0);
    }
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  for (long q = 0; q < nq; ++q) {
    grad[quad[q].a] += d[q];
    grad[quad[q].b] += d[q];
  }
}

void quad_samples(std::span<const QuadPoint> quad, std::span<const double> u,
                  std::span<double> values, std::span<double> weights) {
  for (std::size_t q = 0; q < quad.size(); ++q) {
    values[q] = 0.5 * (u[quad[q].a] + u[quad[q].b]);
    weights[q] = quad[q].weight;
  }
}

}  // namespace plap
