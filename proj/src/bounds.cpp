// SPDX-License-Identifier: Apache-2.0
#include "plap/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "plap/spectral.hpp"

namespace plap {

double closed_bound_rhs(int n, double p, double R, double vol_M) {
  return std::pow(static_cast<double>(n), std::abs(p - 2.0) / 2.0) *
         std::pow(sphere_lambda1(n, R), p / 2.0) * vol_M / sphere_area(n, R);
}

double steklov_bound_rhs(int n, double p, double R) {
  if (p < 2.0) return 1.0 / std::pow(R, p - 1.0);
  return std::pow(static_cast<double>(n), p - 2.0) / std::pow(R, p - 1.0);
}

Lemma1Check check_lemma1(const SurfaceMesh& mesh, const Vec3& q, double p,
                         double R, double mesh_tol) {
  Lemma1Check c;
  c.lhs = radial_moment(mesh, q, p);
  c.rhs = std::pow(R, p) * sphere_area(mesh.dim(), R);
  c.holds = c.lhs >= c.rhs * (1.0 - mesh_tol);
  c.slack = c.rhs / c.lhs;
  return c;
}

double check_lemma3(const SurfaceMesh& mesh) {
  const int n = mesh.dim();
  std::vector<std::vector<Vec3>> grads;
  for (int i = 0; i < n; ++i) {
    grads.push_back(tangential_gradient(mesh, coordinate_field(mesh.vertices(), i)));
  }
  double worst = 0.0;
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += grads[i][f].squaredNorm();
    worst = std::max(worst, std::abs(s - (n - 1)));
  }
  return worst;
}

PowerSum power_sum(std::span<const double> y, double gamma) {
  if (!(gamma >= 1.0)) throw std::invalid_argument("power_sum: gamma must be >= 1");
  PowerSum r;
  double total = 0.0;
  for (double v : y) {
    if (!(v >= 0.0)) throw std::invalid_argument("power_sum: negative entry");
    total += v;
    r.rhs += std::pow(v, gamma);
  }
  r.lhs = std::pow(total, gamma);
  const double tol = 1e-12 * std::max(1.0, r.lhs);
  r.holds = r.lhs >= r.rhs - tol;
  r.equality = std::abs(r.lhs - r.rhs) <= tol;
  return r;
}

bool power_sum_holds(std::span<const double> y, double gamma) {
  return power_sum(y, gamma).holds;
}

bool BoundReport::all_hold() const {
  if (!errors.empty()) return false;
  for (const Verdict* v : {&closed, &steklov, &lemma1}) {
    if (v->checked && !v->holds) return false;
  }
  return true;
}

bool report_consistent(const BoundReport& r) {
  auto same = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
  };
  if (r.vol_Omega > 0.0 &&
      std::abs(ball_volume(r.n, r.R) - r.vol_Omega) > 1e-10 * r.vol_Omega) {
    return false;
  }
  if (!same(r.closed_rhs, closed_bound_rhs(r.n, r.p, r.R, r.vol_M))) return false;
  if (!same(r.steklov_rhs, steklov_bound_rhs(r.n, r.p, r.R))) return false;
  if (r.closed.checked) {
    if (!r.lambda_estimate) return false;
    if (r.closed.holds != (*r.lambda_estimate <= r.closed_rhs * (1.0 + r.slack))) return false;
    if (!same(r.closed.ratio, *r.lambda_estimate / r.closed_rhs)) return false;
  }
  if (r.steklov.checked) {
    if (!r.mu_estimate) return false;
    if (r.steklov.holds != (*r.mu_estimate <= r.steklov_rhs * (1.0 + r.slack))) return false;
    if (!same(r.steklov.ratio, *r.mu_estimate / r.steklov_rhs)) return false;
  }
  if (r.lemma1.checked) {
    if (r.lemma1.holds != (r.lemma1_lhs >= r.lemma1_rhs * (1.0 - r.lemma_tol))) return false;
    if (!same(r.lemma1.ratio, r.lemma1_rhs / r.lemma1_lhs)) return false;
  }
  return true;
}

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

template <typename F>
void stage(BoundReport& report, const char* name, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report.errors.push_back(std::string(name) + ": " + e.what());
  }
}

}  // namespace

BoundReport verify_meshes(const std::string& descriptor,
                          const SurfaceMesh& surface, const VolumeMesh* volume,
                          double p, const VerifyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  check_p_range(p);

  BoundReport r;
  r.shape = descriptor;
  r.timestamp = utc_now();
  r.n = surface.dim();
  r.p = p;
  r.slack = opts.slack;
  r.lemma_tol = opts.lemma_tol;
  r.surface_facets = surface.num_facets();
  r.volume_cells = volume ? volume->num_cells() : 0;

  r.vol_M = surface_measure(surface);
  r.vol_Omega = enclosed_volume(surface);
  r.R = equal_volume_radius(r.vol_Omega, r.n);
  r.closed_rhs = closed_bound_rhs(r.n, p, r.R, r.vol_M);
  r.steklov_rhs = steklov_bound_rhs(r.n, p, r.R);
  r.lemma3_max_deviation = check_lemma3(surface);

  stage(r, "pcenter", [&] {
    const PCenterResult pc = p_center(surface, volume, p, opts.pcenter_tol);
    r.pcenter.assign(pc.t.data(), pc.t.data() + r.n);
    r.pcenter_in_closure = pc.in_closure;
    r.pcenter_residual = pc.relative_residual();
    r.pcenter_f_value = pc.f_value;

    const Lemma1Check l1 = check_lemma1(surface, pc.t, p, r.R, opts.lemma_tol);
    r.lemma1_lhs = l1.lhs;
    r.lemma1_rhs = l1.rhs;
    r.lemma1 = {true, l1.holds, l1.slack};
  });

  if (opts.closed) {
    stage(r, "closed", [&] {
      const EigenEstimate e = minimize_closed(surface, p, opts.solver);
      r.lambda_estimate = e.value;
      r.lambda_converged = e.converged;
      r.lambda_iterations = e.iterations;
      r.lambda_constraint_residual = e.constraint_residual;
      r.closed = {true, e.value <= r.closed_rhs * (1.0 + opts.slack),
                  e.value / r.closed_rhs};
    });
  }
  if (opts.steklov) {
    if (!volume) {
      r.errors.push_back("steklov: no volume mesh available");
    } else {
      stage(r, "steklov", [&] {
        const SteklovEstimate e = minimize_steklov(*volume, p, opts.solver);
        r.mu_estimate = e.value;
        r.mu_converged = e.converged;
        r.mu_iterations = e.iterations;
        r.mu_constraint_residual = e.constraint_residual;
        r.steklov = {true, e.value <= r.steklov_rhs * (1.0 + opts.slack),
                     e.value / r.steklov_rhs};
      });
    }
  }

  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

BoundReport verify_shape(const ShapeSpec& spec, double p,
                         const VerifyOptions& opts) {
  check_p_range(p);
  if (opts.steklov) {
    const MeshPair meshes = generate(spec);
    return verify_meshes(spec.describe(), meshes.surface, &meshes.volume, p, opts);
  }
  const SurfaceMesh surface = generate_surface(spec);
  return verify_meshes(spec.describe(), surface, nullptr, p, opts);
}

}  // namespace plap
