// SPDX-License-Identifier: Apache-2.0
#include "plap/sweep.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "plap/pcenter.hpp"
#include "plap/report.hpp"
#include "plap/spectral.hpp"

namespace plap {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

Vec3 point_from(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) {
    throw ConfigError("points must be arrays of 2 or 3 numbers");
  }
  Vec3 x = Vec3::Zero();
  for (std::size_t i = 0; i < j.size(); ++i) x[i] = j[i].get<double>();
  return x;
}

}  // namespace

std::string ShapeSource::describe() const {
  return spec ? spec->describe() : "mesh(" + mesh_path.string() + ")";
}

void SweepConfig::validate() const {
  if (shapes.empty()) throw ConfigError("shape list is empty");
  if (p_values.empty()) throw ConfigError("p list is empty");
  for (double p : p_values) {
    try {
      check_p_range(p);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
}

ShapeSpec shape_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("shape entries must be objects");
  const std::string kind = get_or<std::string>(j, "kind", "");
  const int refine = get_or(j, "refine", 4);
  ShapeSpec s;
  if (kind == "sphere" || kind == "circle") {
    s = ShapeSpec::sphere(get_or(j, "dim", kind == "circle" ? 2 : 3),
                          get_or(j, "radius", 1.0), refine);
  } else if (kind == "ellipsoid" || kind == "ellipse") {
    s = ShapeSpec::ellipsoid(get_or<std::vector<double>>(j, "semiaxes", {}), refine);
  } else if (kind == "perturbed_sphere" || kind == "star") {
    s = ShapeSpec::perturbed_sphere(get_or(j, "dim", kind == "star" ? 2 : 3),
                                    get_or(j, "amplitude", 0.1),
                                    get_or(j, "frequency", 3), refine);
    s.radius = get_or(j, "radius", 1.0);
  } else if (kind == "square") {
    s = ShapeSpec::square(get_or(j, "side", 2.0), refine);
  } else if (kind == "polygon") {
    std::vector<Vec3> corners;
    for (const auto& v : j.value("vertices", json::array())) corners.push_back(point_from(v));
    s = ShapeSpec::polygon(std::move(corners), refine);
  } else {
    throw ConfigError("unknown shape kind '" + kind + "'");
  }
  s.layers = get_or(j, "layers", 0);
  if (j.contains("center")) s.center = point_from(j["center"]);
  return s;
}

SweepConfig parse_sweep_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SweepConfig c;
  if (!j.contains("shapes") || !j["shapes"].is_array()) {
    throw ConfigError("config needs a 'shapes' array");
  }
  for (const auto& sj : j["shapes"]) {
    ShapeSource src;
    if (sj.is_object() && sj.contains("mesh")) {
      src.mesh_path = sj["mesh"].get<std::string>();
      src.layers = get_or(sj, "layers", 8);
    } else {
      src.spec = shape_from_json(sj);
    }
    c.shapes.push_back(std::move(src));
  }
  c.p_values = get_or<std::vector<double>>(j, "p", {});
  const json solver = j.value("solver", json::object());
  SolverOptions& so = c.options.solver;
  so.max_iters = get_or(solver, "max_iters", so.max_iters);
  so.eps_start = get_or(solver, "eps_start", so.eps_start);
  so.eps_final = get_or(solver, "eps_final", so.eps_final);
  so.eps_factor = get_or(solver, "eps_factor", so.eps_factor);
  so.stall_tol = get_or(solver, "stall_tol", so.stall_tol);
  so.stall_window = get_or(solver, "stall_window", so.stall_window);
  so.precond_refresh = get_or(solver, "precond_refresh", so.precond_refresh);
  c.options.slack = get_or(solver, "slack", c.options.slack);
  c.options.lemma_tol = get_or(solver, "lemma_tol", c.options.lemma_tol);
  c.options.pcenter_tol = get_or(solver, "pcenter_tol", c.options.pcenter_tol);
  c.options.closed = get_or(solver, "closed", true);
  c.options.steklov = get_or(solver, "steklov", true);
  const json output = j.value("output", json::object());
  c.json_out = get_or<std::string>(output, "json", "");
  c.csv_out = get_or<std::string>(output, "csv", "");
  c.parallelism = get_or(j, "parallelism", 1);
  c.validate();
  return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  SweepConfig c = parse_sweep_config(j);
  // Relative mesh paths are taken relative to the config file.
  for (ShapeSource& s : c.shapes) {
    if (!s.spec && s.mesh_path.is_relative()) s.mesh_path = path.parent_path() / s.mesh_path;
  }
  return c;
}

BoundReport run_item(const ShapeSource& shape, double p, const VerifyOptions& opts) {
  try {
    if (shape.spec) return verify_shape(*shape.spec, p, opts);
    const SurfaceMesh surface = load_off(shape.mesh_path);
    std::optional<VolumeMesh> volume;
    std::string volume_error;
    if (opts.steklov) {
      try {
        volume = layered_volume(surface, centroid(surface), shape.layers);
      } catch (const MeshError& e) {
        volume_error = e.what();
      }
    }
    BoundReport r = verify_meshes(shape.describe(), surface,
                                  volume ? &*volume : nullptr, p, opts);
    if (!volume_error.empty()) {
      r.errors.push_back("volume mesh: " + volume_error);
    }
    return r;
  } catch (const std::exception& e) {
    BoundReport r;
    r.shape = shape.describe();
    r.p = p;
    r.errors.push_back(e.what());
    return r;
  }
}

std::vector<BoundReport> run_sweep(const SweepConfig& config, std::ostream* progress) {
  config.validate();
  const std::size_t np = config.p_values.size();
  const std::size_t total = config.shapes.size() * np;
  std::vector<BoundReport> reports(total);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const ShapeSource& shape = config.shapes[i / np];
      const double p = config.p_values[i % np];
      reports[i] = run_item(shape, p, config.options);
      if (progress) {
        std::lock_guard lock(log_mutex);
        *progress << "[" << i + 1 << "/" << total << "] " << reports[i].shape
                  << " p=" << p << (reports[i].all_hold() ? " ok" : " FAILED") << '\n';
      }
    }
  };

  const int threads = std::min<int>(config.parallelism, static_cast<int>(total));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return reports;
}

void write_outputs(const SweepConfig& config, const std::vector<BoundReport>& reports) {
  if (!config.json_out.empty()) {
    std::ofstream out(config.json_out);
    if (!out) throw ConfigError("cannot write " + config.json_out.string());
    out << to_json(std::span<const BoundReport>(reports)).dump(2) << '\n';
  }
  if (!config.csv_out.empty()) {
    std::ofstream out(config.csv_out);
    if (!out) throw ConfigError("cannot write " + config.csv_out.string());
    write_csv(out, reports);
  }
}

}  // namespace plap
