#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "transwave/diagnostics.hpp"
#include "transwave/discretization.hpp"
#include "transwave/model.hpp"

namespace transwave {

enum class Backend { augmented, history };

const char* to_string(Backend b);
Backend parse_backend(const std::string& name);

struct SolverConfig {
  double h = 0.005;
  std::size_t n_rho = 64;
  double cfl = 0.9;
  // bypasses compute_dt when set
  std::optional<double> dt;
  Backend backend = Backend::augmented;
  double T_final = 40.0;
  std::size_t record_stride = 1;
  // 0 disables snapshots
  std::size_t snapshot_stride = 0;
  bool override_certificate = false;
};

// min(cfl h_min / sqrt(max(a, b)), d_rho tau_min / (1 + max|tau'|))
double compute_dt(const DomainGeometry& geom, const Grids& grids, const DelaySpec& delay, double cfl);

// dt actually used by run: the forced value, or T / ceil(T / compute_dt).
double resolve_dt(const ProblemSpec& spec, const Grids& grids, const SolverConfig& cfg);

// Interior update of both fields from level n (cur) and n-1 (prev) into
// next; boundary nodes of Omega are set to zero, interface nodes are left for
// apply_transmission. Throws instability (with `step`) on non-finite or
// runaway values.
void step_wave(const StateSnapshot& cur, const std::vector<double>& u_prev, const std::vector<double>& v_prev,
               const SpatialGrid& grid, const DomainGeometry& geom, const Coefficients& c, double dt,
               const std::vector<double>& delayed_trace, std::vector<double>& u_next, std::vector<double>& v_next,
               std::size_t step = 0);

// Sets the shared interface values from second-order one-sided flux balance.
// Throws resolution_error when a segment has fewer than three nodes.
void apply_transmission(std::vector<double>& u, std::vector<double>& v, const SpatialGrid& grid,
                        const DomainGeometry& geom);

// One upwind step of tau z_t + (1 - tau' rho) z_rho = 0 for rows 1.. using
// the current row 0 as inflow. Throws hypothesis_violation if the speed is
// not positive.
void step_z_transport(StateSnapshot& state, const RhoGrid& rho, double tau, double dtau, double dt,
                      std::size_t step = 0);

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  std::vector<StateSnapshot> snapshots;
  StateSnapshot final_state;
  Grids grids;
  double dt = 0.0;
  std::size_t steps = 0;
  Backend backend = Backend::augmented;
  bool certified = false;
};

// Called once per time level after its diagnostics are taken.
using StepObserver = std::function<void(std::size_t step, const StateSnapshot& state)>;

// Integrates to T_final. Diagnostics are recorded every record_stride steps
// and at T_final; residuals are attached when the stride is 1. Throws
// hypothesis_violation when certification fails without the override.
Trajectory run(const ProblemSpec& spec, const SolverConfig& cfg, const LyapunovWeights* weights = nullptr,
               const StepObserver& observer = {});

}  // namespace transwave
