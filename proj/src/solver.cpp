#include "transwave/solver.hpp"

#include <algorithm>
#include <cmath>

#include "transwave/error.hpp"
#include "transwave/simd/kernels.hpp"

namespace transwave {

namespace {

// magnitude past which a field is treated as blown up
constexpr double kRunaway = 1e100;

void require_bounded(const std::vector<double>& x, std::size_t step, const char* what) {
  if (!simd::active_kernels().all_bounded(x.data(), x.size(), kRunaway)) {
    throw Error(ErrorCode::instability, std::string("non-finite or runaway values in ") + what, step);
  }
}

void second_difference(const double* u, double* out, std::size_t n, double inv_h2) {
  for (std::size_t i = 0; i < n; ++i) out[i] = ((u[i - 1] - 2.0 * u[i]) + u[i + 1]) * inv_h2;
}

}  // namespace

const char* to_string(Backend b) { return b == Backend::augmented ? "augmented" : "history"; }

Backend parse_backend(const std::string& name) {
  if (name == "augmented") return Backend::augmented;
  if (name == "history") return Backend::history;
  throw Error(ErrorCode::usage_error, "unknown backend '" + name + "'");
}

double compute_dt(const DomainGeometry& geom, const Grids& grids, const DelaySpec& delay, double cfl) {
  const double wave = cfl * grids.space.h_min / std::sqrt(std::max(geom.a, geom.b));
  const double tau_min = std::min(delay.tau0, delay_min(delay.tau).value);
  const double transport = grids.rho.d_rho * tau_min / (1.0 + delay_max_abs_slope(delay.tau).value);
  return std::min(wave, transport);
}

double resolve_dt(const ProblemSpec& spec, const Grids& grids, const SolverConfig& cfg) {
  if (cfg.dt) return *cfg.dt;
  const double bound = compute_dt(spec.geometry, grids, spec.delay, cfg.cfl);
  return cfg.T_final / std::ceil(cfg.T_final / bound);
}

void step_wave(const StateSnapshot& cur, const std::vector<double>& u_prev, const std::vector<double>& v_prev,
               const SpatialGrid& grid, const DomainGeometry& geom, const Coefficients& c, double dt,
               const std::vector<double>& trace, std::vector<double>& u_next, std::vector<double>& v_next,
               std::size_t step) {
  const auto& k = simd::active_kernels();
  const double dt2 = dt * dt;
  const double gamma = 0.5 * c.mu1 * dt;
  u_next.resize(cur.u.size());
  v_next.resize(cur.v.size());

  for (const Segment* s : {&grid.left, &grid.right}) {
    const std::size_t i0 = s->offset + 1;
    const simd::LeapfrogCoeffs lc{dt2 * geom.a / (s->h * s->h), dt2 * c.mu2, 1.0 - gamma, 1.0 + gamma};
    k.leapfrog(cur.u.data() + i0, u_prev.data() + i0, trace.data() + i0, u_next.data() + i0, s->cells - 1, lc);
  }
  u_next.front() = 0.0;
  u_next.back() = 0.0;

  const Segment& m = grid.middle;
  const simd::LeapfrogCoeffs mc{dt2 * geom.b / (m.h * m.h), 0.0, 1.0, 1.0};
  k.leapfrog(cur.v.data() + 1, v_prev.data() + 1, nullptr, v_next.data() + 1, m.cells - 1, mc);

  require_bounded(u_next, step, "u");
  require_bounded(v_next, step, "v");
}

void apply_transmission(std::vector<double>& u, std::vector<double>& v, const SpatialGrid& grid,
                        const DomainGeometry& geom) {
  if (grid.left.nodes() < 3 || grid.middle.nodes() < 3 || grid.right.nodes() < 3) {
    throw Error(ErrorCode::resolution_error, "transmission closure needs three nodes per segment");
  }
  const double a = geom.a;
  const double b = geom.b;

  // x = L1: left end of u, first node of v
  {
    const std::size_t N = grid.left_interface();
    const double ka = a / grid.left.h;
    const double kb = b / grid.middle.h;
    const double w = (ka * (4.0 * u[N - 1] - u[N - 2]) / 3.0 + kb * (4.0 * v[1] - v[2]) / 3.0) / (ka + kb);
    u[N] = w;
    v.front() = w;
  }
  // x = L2: last node of v, first node of the right u segment
  {
    const std::size_t r = grid.right_interface();
    const std::size_t M = v.size() - 1;
    const double ka = a / grid.right.h;
    const double kb = b / grid.middle.h;
    const double w = (ka * (4.0 * u[r + 1] - u[r + 2]) / 3.0 + kb * (4.0 * v[M - 1] - v[M - 2]) / 3.0) / (ka + kb);
    u[r] = w;
    v.back() = w;
  }
}

void step_z_transport(StateSnapshot& st, const RhoGrid& rho, double tau, double dtau, double dt, std::size_t step) {
  const auto& k = simd::active_kernels();
  const std::size_t n = st.u.size();
  // descending so that row j-1 still holds the old level when row j is updated
  for (std::size_t j = rho.size() - 1; j >= 1; --j) {
    const double speed = (1.0 - dtau * rho.nodes[j]) / tau;
    if (!(speed > 0.0)) {
      throw Error(ErrorCode::hypothesis_violation, "transport speed (1 - tau' rho) / tau is not positive", step);
    }
    k.upwind_row(st.z_row(j), st.z_row(j - 1), n, speed * dt / rho.d_rho);
  }
  if (!k.all_bounded(st.z.data(), st.z.size(), kRunaway)) {
    throw Error(ErrorCode::instability, "non-finite or runaway values in z", step);
  }
}

Trajectory run(const ProblemSpec& spec, const SolverConfig& cfg, const LyapunovWeights* weights,
               const StepObserver& observer) {
  if (!(cfg.T_final > 0.0) || !std::isfinite(cfg.T_final)) throw Error(ErrorCode::malformed_spec, "T_final must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw Error(ErrorCode::malformed_spec, "cfl must lie in (0, 1]");
  if (cfg.record_stride == 0) throw Error(ErrorCode::malformed_spec, "record_stride must be at least 1");
  if (cfg.dt && !(*cfg.dt > 0.0)) throw Error(ErrorCode::malformed_spec, "forced dt must be positive");

  const auto sampling = uniform_sampling(cfg.T_final, 2001);
  const Certificate cert = certify(spec, sampling);
  if (!cert.passed() && !cfg.override_certificate) {
    throw Error(ErrorCode::hypothesis_violation, "certificate failed and no override was given");
  }

  Trajectory out;
  out.backend = cfg.backend;
  out.certified = cert.passed();
  out.grids = build_grid(spec.geometry, cfg.h, cfg.n_rho);
  const Grids& grids = out.grids;
  const SpatialGrid& grid = grids.space;
  const double dt = resolve_dt(spec, grids, cfg);
  out.dt = dt;
  const double ratio = cfg.T_final / dt;
  const auto steps = static_cast<std::size_t>(std::abs(ratio - std::round(ratio)) < 1e-9 * ratio ? std::round(ratio)
                                                                                              : std::ceil(ratio));
  out.steps = steps;

  const DomainGeometry& geom = spec.geometry;
  StateSnapshot st = initialize_state(spec, grids);
  const DiagnosticsEvaluator diag(spec, grids);
  const std::size_t n_omega = grid.n_omega();
  const std::size_t n_mid = grid.n_mid();
  const std::size_t nr = grids.rho.size();

  std::vector<double> u_prev(n_omega), v_prev(n_mid), u_next(n_omega), v_next(n_mid), trace(n_omega);

  std::optional<HistoryBuffer> hist;
  const double tau_at_0 = evaluate(spec.delay.tau, 0.0).value;
  if (cfg.backend == Backend::history) {
    hist.emplace(dt, std::max(spec.delay.tau1, delay_max(spec.delay.tau).value));
    const auto m = static_cast<long>(std::ceil(tau_at_0 / dt)) + 1;
    for (long k = m; k >= 1; --k) {
      const double s = -static_cast<double>(k) * dt;
      std::vector<double> field(n_omega);
      for (std::size_t i = 0; i < n_omega; ++i) field[i] = evaluate_history(spec.initial, grid.x_omega[i], s);
      hist->push(s, std::move(field));
    }
  }

  auto delayed_trace = [&](double t, const Coefficients& c) {
    if (hist) {
      hist->interpolate(t - c.tau, trace);
    } else {
      const double* row = st.z_row(nr - 1);
      std::copy(row, row + n_omega, trace.begin());
    }
  };

  // Taylor bootstrap of level -1
  {
    const Coefficients c0 = evaluate_coefficients(spec, 0.0);
    delayed_trace(0.0, c0);
    std::vector<double> d2(std::max(n_omega, n_mid));
    const double dt2 = 0.5 * dt * dt;
    for (const Segment* s : {&grid.left, &grid.right}) {
      const std::size_t i0 = s->offset + 1;
      const std::size_t cnt = s->cells - 1;
      second_difference(st.u.data() + i0, d2.data(), cnt, 1.0 / (s->h * s->h));
      for (std::size_t k = 0; k < cnt; ++k) {
        const std::size_t i = i0 + k;
        u_prev[i] = st.u[i] - dt * st.ut[i] + dt2 * (geom.a * d2[k] - c0.mu1 * st.ut[i] - c0.mu2 * trace[i]);
      }
    }
    u_prev.front() = 0.0;
    u_prev.back() = 0.0;
    const Segment& m = grid.middle;
    second_difference(st.v.data() + 1, d2.data(), m.cells - 1, 1.0 / (m.h * m.h));
    for (std::size_t k = 0; k + 1 < m.cells; ++k) {
      const std::size_t i = k + 1;
      v_prev[i] = st.v[i] - dt * st.vt[i] + dt2 * geom.b * d2[k];
    }
    apply_transmission(u_prev, v_prev, grid, geom);
  }

  const double inv_2dt = 0.5 / dt;
  for (std::size_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    st.t = t;
    const Coefficients c = evaluate_coefficients(spec, t);

    delayed_trace(t, c);
    step_wave(st, u_prev, v_prev, grid, geom, c, dt, trace, u_next, v_next, n);
    apply_transmission(u_next, v_next, grid, geom);
    if (n >= 1) {
      for (std::size_t i = 0; i < n_omega; ++i) st.ut[i] = (u_next[i] - u_prev[i]) * inv_2dt;
      for (std::size_t i = 0; i < n_mid; ++i) st.vt[i] = (v_next[i] - v_prev[i]) * inv_2dt;
    }

    if (hist) {
      hist->push(t, st.ut);
      for (std::size_t j = 0; j < nr; ++j) {
        hist->interpolate(t - c.tau * grids.rho.nodes[j], trace);
        std::copy(trace.begin(), trace.end(), st.z_row(j));
      }
    } else {
      std::copy(st.ut.begin(), st.ut.end(), st.z_row(0));
    }

    if (n % cfg.record_stride == 0 || n == steps) out.records.push_back(diag.evaluate(st, c, weights));
    if (cfg.snapshot_stride > 0 && n % cfg.snapshot_stride == 0) out.snapshots.push_back(st);
    if (observer) observer(n, st);
    if (n == steps) break;

    if (!hist) step_z_transport(st, grids.rho, c.tau, c.dtau, dt, n);
    std::swap(u_prev, st.u);
    std::swap(st.u, u_next);
    std::swap(v_prev, st.v);
    std::swap(st.v, v_next);
  }

  if (cfg.record_stride == 1) attach_residuals(out.records, spec);
  out.final_state = std::move(st);
  return out;
}

}  // namespace transwave
