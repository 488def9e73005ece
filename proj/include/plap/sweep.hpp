// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "plap/bounds.hpp"
#include "plap/shapes.hpp"

namespace plap {

/// Malformed configuration or flags; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sweep item is either a generated shape or an OFF file.
struct ShapeSource {
  std::optional<ShapeSpec> spec;
  std::filesystem::path mesh_path;
  int layers = 8;  // volume layers for OFF input

  std::string describe() const;
};

struct SweepConfig {
  std::vector<ShapeSource> shapes;
  std::vector<double> p_values;
  VerifyOptions options;
  std::filesystem::path json_out;
  std::filesystem::path csv_out;
  int parallelism = 1;

  /// Throws ConfigError unless shapes and p values are nonempty, every p
  /// lies in the supported range and parallelism >= 1.
  void validate() const;
};

ShapeSpec shape_from_json(const nlohmann::json& j);
SweepConfig parse_sweep_config(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Runs one verification; mesh and shape errors are recorded in the report.
BoundReport run_item(const ShapeSource& shape, double p, const VerifyOptions& opts);

/// Runs shapes x p_values on a pool of `parallelism` workers. Reports come
/// back in input order (shape-major). Progress lines go to `progress`.
std::vector<BoundReport> run_sweep(const SweepConfig& config,
                                   std::ostream* progress = nullptr);

/// Writes the JSON list and CSV named in the config (when set).
void write_outputs(const SweepConfig& config,
                   const std::vector<BoundReport>& reports);

}  // namespace plap
