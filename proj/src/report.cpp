// SPDX-License-Identifier: Apache-2.0
#include "plap/report.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace plap {

namespace {

using nlohmann::json;

json verdict_json(const Verdict& v) {
  return {{"checked", v.checked}, {"holds", v.holds}, {"ratio", v.ratio}};
}

Verdict verdict_from(const json& j) {
  return {j.at("checked").get<bool>(), j.at("holds").get<bool>(),
          j.at("ratio").get<double>()};
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : ""; }

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

json to_json(const BoundReport& r) {
  json j;
  j["shape"] = r.shape;
  j["n"] = r.n;
  j["p"] = r.p;
  j["R"] = r.R;
  j["vol_M"] = r.vol_M;
  j["vol_Omega"] = r.vol_Omega;
  j["lambda_estimate"] = r.lambda_estimate ? json(*r.lambda_estimate) : json(nullptr);
  j["mu_estimate"] = r.mu_estimate ? json(*r.mu_estimate) : json(nullptr);
  j["closed_rhs"] = r.closed_rhs;
  j["steklov_rhs"] = r.steklov_rhs;
  j["lemma1_lhs"] = r.lemma1_lhs;
  j["lemma1_rhs"] = r.lemma1_rhs;
  j["lemma3_max_deviation"] = r.lemma3_max_deviation;
  j["pcenter"] = {{"t", r.pcenter},
                  {"in_closure", r.pcenter_in_closure},
                  {"relative_residual", r.pcenter_residual},
                  {"f_value", r.pcenter_f_value}};
  j["slack"] = r.slack;
  j["lemma_tol"] = r.lemma_tol;
  j["verdicts"] = {{"closed", verdict_json(r.closed)},
                   {"steklov", verdict_json(r.steklov)},
                   {"lemma1", verdict_json(r.lemma1)},
                   {"all_hold", r.all_hold()}};
  j["solver"] = {{"lambda_converged", r.lambda_converged},
                 {"lambda_iterations", r.lambda_iterations},
                 {"lambda_constraint_residual", r.lambda_constraint_residual},
                 {"mu_converged", r.mu_converged},
                 {"mu_iterations", r.mu_iterations},
                 {"mu_constraint_residual", r.mu_constraint_residual},
                 {"surface_facets", r.surface_facets},
                 {"volume_cells", r.volume_cells}};
  j["timestamp"] = r.timestamp;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["errors"] = r.errors;
  return j;
}

BoundReport report_from_json(const json& j) {
  BoundReport r;
  r.shape = j.at("shape").get<std::string>();
  r.n = j.at("n").get<int>();
  r.p = j.at("p").get<double>();
  r.R = j.at("R").get<double>();
  r.vol_M = j.at("vol_M").get<double>();
  r.vol_Omega = j.at("vol_Omega").get<double>();
  if (!j.at("lambda_estimate").is_null()) r.lambda_estimate = j["lambda_estimate"].get<double>();
  if (!j.at("mu_estimate").is_null()) r.mu_estimate = j["mu_estimate"].get<double>();
  r.closed_rhs = j.at("closed_rhs").get<double>();
  r.steklov_rhs = j.at("steklov_rhs").get<double>();
  r.lemma1_lhs = j.at("lemma1_lhs").get<double>();
  r.lemma1_rhs = j.at("lemma1_rhs").get<double>();
  r.lemma3_max_deviation = j.at("lemma3_max_deviation").get<double>();
  const json& pc = j.at("pcenter");
  r.pcenter = pc.at("t").get<std::vector<double>>();
  r.pcenter_in_closure = pc.at("in_closure").get<bool>();
  r.pcenter_residual = pc.at("relative_residual").get<double>();
  r.pcenter_f_value = pc.at("f_value").get<double>();
  r.slack = j.at("slack").get<double>();
  r.lemma_tol = j.at("lemma_tol").get<double>();
  const json& v = j.at("verdicts");
  r.closed = verdict_from(v.at("closed"));
  r.steklov = verdict_from(v.at("steklov"));
  r.lemma1 = verdict_from(v.at("lemma1"));
  const json& s = j.at("solver");
  r.lambda_converged = s.at("lambda_converged").get<bool>();
  r.lambda_iterations = s.at("lambda_iterations").get<int>();
  r.lambda_constraint_residual = s.at("lambda_constraint_residual").get<double>();
  r.mu_converged = s.at("mu_converged").get<bool>();
  r.mu_iterations = s.at("mu_iterations").get<int>();
  r.mu_constraint_residual = s.at("mu_constraint_residual").get<double>();
  r.surface_facets = s.at("surface_facets").get<std::size_t>();
  r.volume_cells = s.at("volume_cells").get<std::size_t>();
  r.timestamp = j.at("timestamp").get<std::string>();
  r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  r.errors = j.at("errors").get<std::vector<std::string>>();
  return r;
}

json to_json(std::span<const BoundReport> reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

std::string csv_header() {
  return "shape,n,p,R,vol_M,vol_Omega,lambda_estimate,mu_estimate,closed_rhs,"
         "steklov_rhs,closed_ratio,closed_holds,steklov_ratio,steklov_holds,"
         "lemma1_lhs,lemma1_rhs,lemma1_ratio,lemma1_holds,lemma3_max_deviation,"
         "pcenter_x,pcenter_y,pcenter_z,pcenter_in_closure,pcenter_residual,"
         "lambda_converged,mu_converged,all_hold,errors";
}

std::string csv_row(const BoundReport& r) {
  auto flag = [](const Verdict& v) -> std::string {
    return v.checked ? (v.holds ? "1" : "0") : "";
  };
  auto ratio = [](const Verdict& v) { return v.checked ? num(v.ratio) : std::string(); };
  auto coord = [&](std::size_t i) {
    return i < r.pcenter.size() ? num(r.pcenter[i]) : std::string();
  };
  std::string errors;
  for (std::size_t i = 0; i < r.errors.size(); ++i) {
    errors += (i ? "; " : "") + r.errors[i];
  }
  std::ostringstream os;
  os << quoted(r.shape) << ',' << r.n << ',' << num(r.p) << ',' << num(r.R) << ','
     << num(r.vol_M) << ',' << num(r.vol_Omega) << ',' << opt_num(r.lambda_estimate)
     << ',' << opt_num(r.mu_estimate) << ',' << num(r.closed_rhs) << ','
     << num(r.steklov_rhs) << ',' << ratio(r.closed) << ',' << flag(r.closed) << ','
     << ratio(r.steklov) << ',' << flag(r.steklov) << ',' << num(r.lemma1_lhs) << ','
     << num(r.lemma1_rhs) << ',' << ratio(r.lemma1) << ',' << flag(r.lemma1) << ','
     << num(r.lemma3_max_deviation) << ',' << coord(0) << ',' << coord(1) << ','
     << coord(2) << ',' << (r.pcenter_in_closure ? 1 : 0) << ','
     << num(r.pcenter_residual) << ',' << (r.lambda_converged ? 1 : 0) << ','
     << (r.mu_converged ? 1 : 0) << ',' << (r.all_hold() ? 1 : 0) << ','
     << quoted(errors);
  return os.str();
}

void write_csv(std::ostream& out, std::span<const BoundReport> reports) {
  out << csv_header() << '\n';
  for (const auto& r : reports) out << csv_row(r) << '\n';
}

}  // namespace plap
