#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "transwave/model.hpp"
#include "transwave/solver.hpp"

namespace transwave {

struct AnalysisConfig {
  double fit_t0 = 5.0;
  double fit_t1 = 35.0;
  double fit_floor = 1e-8;
  // scheme tolerance constant K in K (dt + h + d_rho) E(0)
  double tol_K = 1.0;
  std::size_t certify_samples = 2001;
  double mu1_floor = 1e-6;
};

struct OutputConfig {
  std::string trajectory = "trajectory.csv";
  std::string report = "report.json";
  // directory for per-time snapshot CSVs, used when snapshot_stride > 0
  std::string snapshots = "snapshots";
};

struct RunConfig {
  ProblemSpec spec;
  SolverConfig solver;
  AnalysisConfig analysis;
  OutputConfig output;
};

// Throws malformed_spec with the offending key on any schema problem.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Normalized form with every default spelled out; parse_config(to_json(c))
// reproduces c exactly.
nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const ProblemSpec& spec);

// Replace the numeric leaf at a dotted path (e.g. "weights.beta"). Throws
// usage_error when the path does not name an existing number.
void set_path(nlohmann::json& j, const std::string& dotted, double value);

}  // namespace transwave
