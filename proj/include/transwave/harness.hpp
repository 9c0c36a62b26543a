#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "transwave/config.hpp"
#include "transwave/diagnostics.hpp"
#include "transwave/lyapunov.hpp"
#include "transwave/model.hpp"
#include "transwave/solver.hpp"

namespace transwave {

struct RunReport {
  nlohmann::json config;  // normalized echo
  Certificate certificate;
  std::optional<ConstantSet> constants;
  std::optional<DecayFit> fit;
  std::string fit_error;
  std::optional<Equivalence> equivalence;
  std::optional<AlphaPrediction> prediction;
  std::string lyapunov_error;
  std::optional<double> max_res_dissipation;
  std::optional<double> max_res_J;
  double tol_scheme = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::string kernels;
  bool exploratory = false;
};

struct SimulationResult {
  RunReport report;
  Trajectory trajectory;
};

Certificate certify_config(const RunConfig& cfg);

// certify -> find_constants -> run -> residuals -> fit_decay -> predict_alpha.
// Throws hypothesis_violation when the certificate fails without override;
// the certificate is still available through certify_config.
SimulationResult simulate(const RunConfig& cfg);

nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const RunReport& r);

void write_trajectory_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

// field_diff is sup_t |(u,v)_aug - (u,v)_hist| / sup_t |(u,v)_aug| with L2 in
// space; the pointwise variants divide by the norm at the same t instead, which
// grows with any small difference in decay rate once the fields have decayed.
struct CompareReport {
  double field_diff = 0.0;
  double field_diff_pointwise = 0.0;
  double energy_diff = 0.0;
  double energy_diff_pointwise = 0.0;
  double dt = 0.0;
  double h = 0.0;
  std::size_t n_rho = 0;
};

CompareReport compare_backends(const RunConfig& cfg);
nlohmann::json to_json(const CompareReport& r);

struct ConvergenceLevel {
  double h = 0.0;
  double dt = 0.0;
  std::size_t n_rho = 0;
  double error = 0.0;
};

struct OrderEstimate {
  bool defined = false;
  double order = 0.0;               // least-squares slope of log error against log h
  std::vector<double> pairwise;     // log(e_k / e_{k+1}) / log(h_k / h_{k+1})
};

// Flags the order undefined when all h coincide or an error is not positive.
OrderEstimate observed_order(const std::vector<double>& h, const std::vector<double>& err);

struct ConvergenceReport {
  std::string reference;  // "exact" or "self"
  std::vector<ConvergenceLevel> levels;
  OrderEstimate estimate;
};

// True for a = b, mu1 = mu2 = 0, zero velocities and v0 = u0 on the middle
// segment: the displacement is then the d'Alembert solution on [0, L3].
bool has_exact_solution(const ProblemSpec& spec);
double exact_displacement(const ProblemSpec& spec, double x, double t);

// Halves h, dt and d_rho per level; levels < 3 is a usage error.
ConvergenceReport convergence_study(const RunConfig& cfg, std::size_t levels);
nlohmann::json to_json(const ConvergenceReport& r);

struct SweepRow {
  double value = 0.0;
  bool certified = false;
  std::string status;  // "ok", "uncertified" or an error code
  double alpha_hat = 0.0;
  double r_squared = 0.0;
  double max_res_dissipation = 0.0;
  double max_res_J = 0.0;
};

// Runs concurrently; row k always belongs to values[k].
std::vector<SweepRow> sweep(const nlohmann::json& base, const std::string& axis, const std::vector<double>& values,
                            bool exploratory, std::size_t threads = 0);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace transwave
