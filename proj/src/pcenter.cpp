// SPDX-License-Identifier: Apache-2.0
#include "plap/pcenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace plap {

namespace {

struct MomentEval {
  double f;      // F(tau)
  double scale;  // sum w |v - tau|^(p-1)
  double slope;  // -F'(tau) >= 0; +inf when tau hits a sample and p < 2
};

MomentEval eval_moment(std::span<const double> v, std::span<const double> w,
                       double p, double tau) {
  MomentEval m{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (w[j] == 0.0) continue;
    const double d = v[j] - tau;
    const double a = std::abs(d);
    if (a == 0.0) {
      if (p < 2.0) m.slope = std::numeric_limits<double>::infinity();
      continue;
    }
    const double am2 = std::pow(a, p - 2.0);
    m.f += w[j] * am2 * d;
    m.scale += w[j] * am2 * a;
    m.slope += w[j] * (p - 1.0) * am2;
  }
  return m;
}

}  // namespace

PMean p_moment_1d(std::span<const double> values,
                  std::span<const double> weights, double p, double tau) {
  const MomentEval m = eval_moment(values, weights, p, tau);
  return {tau, m.f, m.scale, 0};
}

PMean p_mean_1d(std::span<const double> values, std::span<const double> weights,
                double p, double tol) {
  if (values.empty()) throw std::invalid_argument("p_mean_1d: empty samples");
  if (values.size() != weights.size()) {
    throw std::invalid_argument("p_mean_1d: values/weights size mismatch");
  }
  if (!(p > 1.0)) throw std::invalid_argument("p_mean_1d: requires p > 1");

  double total = 0.0;
  double mean = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (weights[j] < 0.0) throw std::invalid_argument("p_mean_1d: negative weight");
    if (weights[j] == 0.0) continue;
    total += weights[j];
    mean += weights[j] * values[j];
    lo = std::min(lo, values[j]);
    hi = std::max(hi, values[j]);
  }
  if (!(total > 0.0)) throw std::invalid_argument("p_mean_1d: zero total weight");
  if (lo == hi) return {lo, 0.0, 0.0, 0};

  // F is strictly decreasing: F(lo) > 0 > F(hi).
  const MomentEval flo = eval_moment(values, weights, p, lo);
  const MomentEval fhi = eval_moment(values, weights, p, hi);
  if (!(flo.f >= 0.0 && fhi.f <= 0.0)) {
    throw std::logic_error("p_mean_1d: bracket endpoints do not change sign");
  }

  double tau = std::clamp(mean / total, lo, hi);
  PMean best{tau, std::numeric_limits<double>::infinity(), 0.0, 0};
  for (int it = 1; it <= 200; ++it) {
    const MomentEval m = eval_moment(values, weights, p, tau);
    if (std::abs(m.f) < std::abs(best.residual)) best = {tau, m.f, m.scale, it};
    best.iterations = it;
    if (std::abs(m.f) <= tol * m.scale) break;
    if (m.f > 0.0) {
      lo = tau;
    } else {
      hi = tau;
    }
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // bracket is two adjacent doubles
    double next = mid;
    if (std::isfinite(m.slope) && m.slope > 0.0) {
      const double newton = tau + m.f / m.slope;
      if (newton > lo && newton < hi) next = newton;
    }
    // Fall back to bisection when Newton stalls in a corner of the bracket.
    if (it % 4 == 0) next = mid;
    tau = next;
  }
  return best;
}

double PCenterResult::relative_residual() const {
  double r = 0.0;
  for (int i = 0; i < dim; ++i) {
    if (scales[i] > 0.0) r = std::max(r, std::abs(residuals[i]) / scales[i]);
  }
  return r;
}

PCenterResult p_center(const SurfaceMesh& surface, const VolumeMesh* volume,
                       double p, double tol) {
  if (!(p > 1.0)) throw std::invalid_argument("p_center: requires p > 1");
  const auto quad = surface.quadrature();
  std::vector<double> v(quad.size());
  std::vector<double> w(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) w[q] = quad[q].weight;

  PCenterResult r;
  r.dim = surface.dim();
  for (int i = 0; i < r.dim; ++i) {
    for (std::size_t q = 0; q < quad.size(); ++q) {
      v[q] = surface.quad_position(quad[q])[i];
    }
    const PMean m = p_mean_1d(v, w, p, tol);
    r.t[i] = m.value;
    r.residuals[i] = m.residual;
    r.scales[i] = m.scale;
    r.iterations[i] = m.iterations;
  }
  r.f_value = p_center_objective(surface, r.t, p);
  r.in_closure = volume ? volume->contains(r.t, 1e-12)
                        : winding_number(surface, r.t) >= 0.5 - 1e-9;
  return r;
}

PCenterResult p_center(const SurfaceMesh& surface, const VolumeMesh& volume,
                       double p, double tol) {
  return p_center(surface, &volume, p, tol);
}

double p_center_objective(const SurfaceMesh& surface, const Vec3& t, double p) {
  double f = 0.0;
  for (const auto& q : surface.quadrature()) {
    const Vec3 x = surface.quad_position(q);
    double s = 0.0;
    for (int i = 0; i < surface.dim(); ++i) s += std::pow(std::abs(x[i] - t[i]), p);
    f += q.weight * s;
  }
  return f / p;
}

Vec3 centroid(const SurfaceMesh& surface) {
  std::vector<double> vertex_weight(surface.num_vertices(), 0.0);
  const int k = surface.dim();
  for (std::size_t f = 0; f < surface.num_facets(); ++f) {
    for (int j = 0; j < k; ++j) {
      vertex_weight[surface.facets()[f][j]] += surface.facet_measures()[f] / k;
    }
  }
  Vec3 c = Vec3::Zero();
  double total = 0.0;
  for (std::size_t v = 0; v < surface.num_vertices(); ++v) {
    c += vertex_weight[v] * surface.vertices()[v];
    total += vertex_weight[v];
  }
  return c / total;
}

double winding_number(const SurfaceMesh& surface, const Vec3& x) {
  const auto X = surface.vertices();
  double total = 0.0;
  if (surface.dim() == 2) {
    for (const auto& f : surface.facets()) {
      const Vec3 a = X[f[0]] - x;
      const Vec3 b = X[f[1]] - x;
      total += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
    return total / (2.0 * std::numbers::pi);
  }
  for (const auto& f : surface.facets()) {
    // Van Oosterom-Strackee solid angle of the triangle seen from x.
    const Vec3 a = X[f[0]] - x;
    const Vec3 b = X[f[1]] - x;
    const Vec3 c = X[f[2]] - x;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    total += 2.0 * std::atan2(num, den);
  }
  return total / (4.0 * std::numbers::pi);
}

}  // namespace plap
