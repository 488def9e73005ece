// SPDX-License-Identifier: Apache-2.0
// plapbound: verify p-Laplacian eigenvalue upper bounds on meshes.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plap/bounds.hpp"
#include "plap/report.hpp"
#include "plap/shapes.hpp"
#include "plap/spectral.hpp"
#include "plap/sweep.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct VerifyFlags {
  std::string shape;
  std::string mesh;
  double radius = 1.0;
  std::vector<double> semiaxes;
  double amplitude = 0.15;
  int frequency = 3;
  int dim = 0;
  int refine = 4;
  int layers = 0;
  double p = 2.0;
  double slack = 0.05;
  bool closed_only = false;
  bool steklov_only = false;
  std::string out;
};

struct SweepFlags {
  std::string config;
  int parallelism = 0;
  std::string out;
  std::string csv;
};

std::string format_ratio(const plap::Verdict& v) {
  if (!v.checked) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f%s", v.ratio, v.holds ? "" : "!");
  return buf;
}

std::string verdict_line(const plap::BoundReport& r) {
  std::string line = r.all_hold() ? "HOLDS " : "VIOLATED ";
  char buf[64];
  std::snprintf(buf, sizeof buf, " p=%g R=%.6g", r.p, r.R);
  line += r.shape + buf;
  line += " closed=" + format_ratio(r.closed);
  line += " steklov=" + format_ratio(r.steklov);
  line += " lemma1=" + format_ratio(r.lemma1);
  for (const auto& e : r.errors) line += " [error: " + e + "]";
  return line;
}

nlohmann::json shape_json(const VerifyFlags& f) {
  nlohmann::json j = {{"kind", f.shape}, {"refine", f.refine}, {"layers", f.layers},
                      {"radius", f.radius}, {"amplitude", f.amplitude},
                      {"frequency", f.frequency}};
  if (f.dim) j["dim"] = f.dim;
  if (!f.semiaxes.empty()) j["semiaxes"] = f.semiaxes;
  if (f.shape == "square") j["side"] = 2.0 * f.radius;
  return j;
}

int cmd_verify(const VerifyFlags& f) {
  if (f.closed_only && f.steklov_only) {
    throw plap::ConfigError("--closed-only and --steklov-only are exclusive");
  }
  if (f.shape.empty() == f.mesh.empty()) {
    throw plap::ConfigError("give exactly one of --shape or --mesh");
  }
  try {
    plap::check_p_range(f.p);
  } catch (const std::invalid_argument& e) {
    throw plap::ConfigError(e.what());
  }

  plap::VerifyOptions opts;
  opts.slack = f.slack;
  opts.closed = !f.steklov_only;
  opts.steklov = !f.closed_only;

  plap::ShapeSource source;
  if (!f.mesh.empty()) {
    source.mesh_path = f.mesh;
    if (f.layers > 0) source.layers = f.layers;
  } else {
    source.spec = plap::shape_from_json(shape_json(f));
  }

  // Malformed inputs surface here rather than inside the report.
  if (source.spec) {
    (void)plap::generate_surface(*source.spec);
  } else {
    (void)plap::load_off(source.mesh_path);
  }

  const plap::BoundReport report = plap::run_item(source, f.p, opts);
  if (!f.out.empty()) {
    std::ofstream out(f.out);
    if (!out) throw plap::ConfigError("cannot write " + f.out);
    out << plap::to_json(report).dump(2) << '\n';
  }
  std::cout << verdict_line(report) << '\n';
  if (!report.errors.empty()) return kExitConfig;
  return report.all_hold() ? 0 : kExitViolation;
}

int cmd_sweep(const SweepFlags& f) {
  plap::SweepConfig config = plap::load_sweep_config(f.config);
  if (f.parallelism != 0) config.parallelism = f.parallelism;
  if (!f.out.empty()) config.json_out = f.out;
  if (!f.csv.empty()) config.csv_out = f.csv;
  config.validate();

  const auto reports = plap::run_sweep(config, &std::cerr);
  plap::write_outputs(config, reports);
  bool all = true;
  for (const auto& r : reports) {
    std::cout << verdict_line(r) << '\n';
    all = all && r.all_hold();
  }
  return all ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of first-eigenvalue upper bounds for the p-Laplacian"};
  app.require_subcommand(1);

  VerifyFlags vf;
  CLI::App* verify = app.add_subcommand("verify", "Verify the bounds for one shape and p");
  verify->add_option("--shape", vf.shape,
                     "sphere|circle|ellipsoid|ellipse|perturbed_sphere|star|square");
  verify->add_option("--mesh", vf.mesh, "Closed triangle mesh in OFF format");
  verify->add_option("--radius", vf.radius, "Sphere radius; half side for squares");
  verify->add_option("--semiaxes", vf.semiaxes, "Ellipsoid semiaxes a,b[,c]")->delimiter(',');
  verify->add_option("--amplitude", vf.amplitude, "Perturbation amplitude");
  verify->add_option("--frequency", vf.frequency, "Perturbation frequency");
  verify->add_option("--dim", vf.dim, "Ambient dimension (2 or 3)");
  verify->add_option("--p", vf.p, "Exponent p in [1.1, 10]")->required();
  verify->add_option("--refine", vf.refine, "Mesh refinement level");
  verify->add_option("--layers", vf.layers, "Radial layers of the volume mesh");
  verify->add_option("--slack", vf.slack, "Relative slack on the bounds");
  verify->add_flag("--closed-only", vf.closed_only, "Skip the Steklov problem");
  verify->add_flag("--steklov-only", vf.steklov_only, "Skip the closed problem");
  verify->add_option("--out", vf.out, "Write the JSON report here");

  SweepFlags sf;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a shape x p sweep from a JSON config");
  sweep->add_option("--config", sf.config, "Sweep configuration")->required();
  sweep->add_option("--parallelism", sf.parallelism, "Worker count (overrides config)");
  sweep->add_option("--out", sf.out, "JSON report list (overrides config)");
  sweep->add_option("--csv", sf.csv, "CSV report table (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*verify) return cmd_verify(vf);
    return cmd_sweep(sf);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
