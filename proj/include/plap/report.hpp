// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "plap/bounds.hpp"

namespace plap {

nlohmann::json to_json(const BoundReport& report);
BoundReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(std::span<const BoundReport> reports);

/// Flat CSV: one row per report, scalar fields only (no timestamps or
/// timings, so reruns of the same sweep are byte-identical).
std::string csv_header();
std::string csv_row(const BoundReport& report);
void write_csv(std::ostream& out, std::span<const BoundReport> reports);

}  // namespace plap
