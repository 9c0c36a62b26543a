#include "transwave/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "transwave/error.hpp"
#include "transwave/simd/kernels.hpp"

namespace transwave {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// Piecewise-linear reading of a final state at arbitrary x.
double sample_segment(const Segment& s, const double* f, double x) {
  const double pos = (x - s.x0) / s.h;
  auto k = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(s.cells - 1)));
  const double w = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
  return f[k] + w * (f[k + 1] - f[k]);
}

double sample_displacement(const Trajectory& tr, double x) {
  const SpatialGrid& g = tr.grids.space;
  const StateSnapshot& st = tr.final_state;
  if (x <= g.left.x1) return sample_segment(g.left, st.u.data(), x);
  if (x < g.right.x0) return sample_segment(g.middle, st.v.data(), x);
  return sample_segment(g.right, st.u.data() + g.right.offset, x);
}

template <class F>
double l2_error(const Trajectory& tr, F&& reference) {
  const SpatialGrid& g = tr.grids.space;
  const StateSnapshot& st = tr.final_state;
  double acc = 0.0;
  auto add = [&](const Segment& s, const double* f) {
    for (std::size_t i = 0; i < s.nodes(); ++i) {
      const double w = (i == 0 || i == s.cells) ? 0.5 * s.h : s.h;
      const double e = f[i] - reference(s.node(i));
      acc += w * e * e;
    }
  };
  add(g.left, st.u.data());
  add(g.middle, st.v.data());
  add(g.right, st.u.data() + g.right.offset);
  return std::sqrt(acc);
}

SolverConfig level_config(const SolverConfig& base, std::size_t k) {
  SolverConfig s = base;
  const double f = std::ldexp(1.0, static_cast<int>(k));
  s.h = base.h / f;
  s.n_rho = (base.n_rho - 1) * static_cast<std::size_t>(f) + 1;
  if (base.dt) s.dt = *base.dt / f;
  s.record_stride = std::numeric_limits<std::size_t>::max() / 2;
  s.snapshot_stride = 0;
  return s;
}

}  // namespace

Certificate certify_config(const RunConfig& cfg) {
  const auto ts = uniform_sampling(cfg.solver.T_final, std::max<std::size_t>(cfg.analysis.certify_samples, 2));
  return certify(cfg.spec, ts, cfg.analysis.mu1_floor);
}

SimulationResult simulate(const RunConfig& cfg) {
  SimulationResult out;
  RunReport& rep = out.report;
  rep.config = to_json(cfg);
  rep.certificate = certify_config(cfg);
  rep.exploratory = !rep.certificate.passed();
  if (!rep.certificate.passed() && !cfg.solver.override_certificate) {
    throw Error(ErrorCode::hypothesis_violation, "certificate failed; rerun with the override to explore");
  }
  rep.constants = find_constants(cfg.spec);
  rep.kernels = std::string(simd::to_string(simd::active_kernels().isa));

  SolverConfig sc = cfg.solver;
  sc.override_certificate = true;  // already gated above
  LyapunovWeights lw;
  if (rep.constants) lw = rep.constants->weights();
  out.trajectory = run(cfg.spec, sc, rep.constants ? &lw : nullptr);
  const Trajectory& tr = out.trajectory;
  rep.dt = tr.dt;
  rep.steps = tr.steps;

  const auto& rec = tr.records;
  const double E0 = rec.empty() ? 0.0 : rec.front().E;
  rep.tol_scheme = tol_scheme(cfg.analysis.tol_K, tr.dt, cfg.solver.h, tr.grids.rho.d_rho, E0);
  if (cfg.solver.record_stride == 1 && rec.size() >= 2) {
    rep.max_res_dissipation = check_dissipation(rec, cfg.spec).max;
    rep.max_res_J = check_J_inequality(rec, cfg.spec).max;
  }
  try {
    rep.fit = fit_decay(rec, cfg.analysis.fit_t0, cfg.analysis.fit_t1, cfg.analysis.fit_floor);
  } catch (const Error& e) {
    rep.fit_error = e.what();
  }
  if (rep.constants) {
    try {
      rep.equivalence = empirical_equivalence(rec);
      rep.prediction = predict_alpha(rec, *rep.equivalence);
    } catch (const Error& e) {
      rep.lyapunov_error = e.what();
    }
  }
  return out;
}

json to_json(const Certificate& c) {
  json v = json::array();
  for (const auto& x : c.sampled_violations) {
    v.push_back({{"hypothesis", x.hypothesis}, {"t", std::isinf(x.t) ? json("inf") : number_or_null(x.t)},
                 {"residual", number_or_null(x.residual)}});
  }
  return {{"passed", c.passed()},
          {"geometry_ok", c.geometry_ok},
          {"h1_ok", c.h1_ok},
          {"h2_ok", c.h2_ok},
          {"delay_ok", c.delay_ok},
          {"xi_ok", c.xi_ok},
          {"geometric_lhs", c.geometric_lhs},
          {"geometric_rhs", c.geometric_rhs},
          {"xi_interval", c.xi_interval.empty() ? json(nullptr) : json::array({c.xi_interval.lo, c.xi_interval.hi})},
          {"xi_bar", c.xi_bar},
          {"mu1_inf", c.mu1_inf},
          {"mu1_below_floor", c.mu1_below_floor},
          {"violations", v}};
}

json to_json(const RunReport& r) {
  json j;
  j["config"] = r.config;
  j["certificate"] = to_json(r.certificate);
  j["exploratory"] = r.exploratory;
  j["run"] = {{"dt", r.dt}, {"steps", r.steps}, {"kernels", r.kernels}};
  j["residuals"] = {{"max_dissipation", r.max_res_dissipation ? number_or_null(*r.max_res_dissipation) : json(nullptr)},
                    {"max_J", r.max_res_J ? number_or_null(*r.max_res_J) : json(nullptr)},
                    {"tol_scheme", r.tol_scheme}};
  if (r.fit) {
    j["decay"] = {{"alpha_hat", r.fit->alpha_hat}, {"c_hat", r.fit->c_hat}, {"r_squared", r.fit->r_squared},
                  {"window", {r.fit->t_start, r.fit->t_end}}, {"points", r.fit->points}};
  } else {
    j["decay"] = {{"error", r.fit_error}};
  }
  json ly;
  if (r.constants) {
    const ConstantSet& c = *r.constants;
    ly["feasible"] = true;
    ly["constants"] = {{"N", c.N},       {"N1", c.N1},       {"N2", c.N2}, {"N3", c.N3}, {"eps1", c.eps1},
                       {"eps2", c.eps2}, {"xi_bar", c.xi_bar}, {"K", c.K}, {"c1", c.c1}, {"M", c.M}};
  } else {
    ly["feasible"] = false;
  }
  if (r.equivalence) ly["gamma"] = {r.equivalence->gamma1, r.equivalence->gamma2};
  if (r.prediction) {
    ly["eta2"] = r.prediction->eta2;
    ly["alpha_pred"] = r.prediction->alpha_pred;
  }
  if (!r.lyapunov_error.empty()) ly["error"] = r.lyapunov_error;
  j["lyapunov"] = ly;
  return j;
}

void write_trajectory_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
  os << "t,E1,E2,Edelay,E,I1,I2,I3,J,L,res_dissipation,res_J\n";
  os.precision(17);
  for (const auto& r : records) {
    os << r.t << ',' << r.E1 << ',' << r.E2 << ',' << r.Edelay << ',' << r.E << ',' << r.I1 << ',' << r.I2 << ','
       << r.I3 << ',' << r.J << ',' << r.L << ',' << r.res_dissipation << ',' << r.res_J << '\n';
  }
}

namespace {

// 0/0 is a perfect match
double relative(double diff, double norm) {
  if (norm > 0.0) return diff / norm;
  return diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

CompareReport compare_backends(const RunConfig& cfg) {
  SolverConfig sc = cfg.solver;
  sc.record_stride = 1;
  sc.snapshot_stride = 0;
  sc.override_certificate = true;

  std::vector<std::vector<double>> fields;
  sc.backend = Backend::augmented;
  const Trajectory aug = run(cfg.spec, sc, nullptr, [&](std::size_t, const StateSnapshot& st) {
    std::vector<double> f(st.u);
    f.insert(f.end(), st.v.begin(), st.v.end());
    fields.push_back(std::move(f));
  });

  std::vector<double> w;
  {
    const DiagnosticsEvaluator ev(cfg.spec, aug.grids);
    w = ev.weights_omega();
    w.insert(w.end(), ev.weights_mid().begin(), ev.weights_mid().end());
  }

  CompareReport rep;
  rep.dt = aug.dt;
  rep.h = cfg.solver.h;
  rep.n_rho = cfg.solver.n_rho;
  sc.backend = Backend::history;
  double sup_diff = 0.0, sup_norm = 0.0;
  const Trajectory hist = run(cfg.spec, sc, nullptr, [&](std::size_t n, const StateSnapshot& st) {
    const std::vector<double>& a = fields[n];
    const std::size_t nu = st.u.size();
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double b = i < nu ? st.u[i] : st.v[i - nu];
      diff += w[i] * (a[i] - b) * (a[i] - b);
      norm += w[i] * a[i] * a[i];
    }
    sup_diff = std::max(sup_diff, std::sqrt(diff));
    sup_norm = std::max(sup_norm, std::sqrt(norm));
    if (norm > 0.0) rep.field_diff_pointwise = std::max(rep.field_diff_pointwise, std::sqrt(diff / norm));
    else if (diff > 0.0) rep.field_diff_pointwise = std::numeric_limits<double>::infinity();
  });
  rep.field_diff = relative(sup_diff, sup_norm);

  double sup_ediff = 0.0, sup_e = 0.0;
  for (std::size_t k = 0; k < aug.records.size(); ++k) {
    const double ea = aug.records[k].E;
    const double eh = hist.records[k].E;
    sup_ediff = std::max(sup_ediff, std::abs(ea - eh));
    sup_e = std::max(sup_e, ea);
    if (ea > 0.0) rep.energy_diff_pointwise = std::max(rep.energy_diff_pointwise, std::abs(ea - eh) / ea);
    else if (eh != 0.0) rep.energy_diff_pointwise = std::numeric_limits<double>::infinity();
  }
  rep.energy_diff = relative(sup_ediff, sup_e);
  return rep;
}

json to_json(const CompareReport& r) {
  return {{"field_diff", number_or_null(r.field_diff)},
          {"field_diff_pointwise", number_or_null(r.field_diff_pointwise)},
          {"energy_diff", number_or_null(r.energy_diff)},
          {"energy_diff_pointwise", number_or_null(r.energy_diff_pointwise)},
          {"dt", r.dt},
          {"h", r.h},
          {"n_rho", r.n_rho}};
}

OrderEstimate observed_order(const std::vector<double>& h, const std::vector<double>& err) {
  OrderEstimate est;
  if (h.size() != err.size() || h.size() < 2) return est;
  for (double e : err) {
    if (!(e > 0.0)) return est;
  }
  const bool distinct = std::any_of(h.begin(), h.end(), [&](double x) { return x != h.front(); });
  if (!distinct) return est;

  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const double lh = std::log(h[k] / h[k + 1]);
    est.pairwise.push_back(lh != 0.0 ? std::log(err[k] / err[k + 1]) / lh : kNaN);
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    mx += std::log(h[k]) / n;
    my += std::log(err[k]) / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    sxx += (std::log(h[k]) - mx) * (std::log(h[k]) - mx);
    sxy += (std::log(h[k]) - mx) * (std::log(err[k]) - my);
  }
  est.order = sxy / sxx;
  est.defined = true;
  return est;
}

bool has_exact_solution(const ProblemSpec& spec) {
  const DomainGeometry& g = spec.geometry;
  if (g.a != g.b) return false;
  const auto* m1 = std::get_if<Mu1Constant>(&spec.weights.mu1);
  const auto* m2 = std::get_if<Mu2Constant>(&spec.weights.mu2);
  if (!m1 || m1->value != 0.0 || !m2 || m2->value != 0.0) return false;
  if (!is_zero(spec.initial.u1) || !is_zero(spec.initial.v1)) return false;
  // v0 must be the restriction of u0; compare on a fine sampling of ]L1, L2[
  for (int k = 0; k <= 1000; ++k) {
    const double x = g.L1 + (g.L2 - g.L1) * k / 1000.0;
    if (evaluate(spec.initial.u0, x) != evaluate(spec.initial.v0, x)) return false;
  }
  return true;
}

double exact_displacement(const ProblemSpec& spec, double x, double t) {
  const double L = spec.geometry.L3;
  const double c = std::sqrt(spec.geometry.a);
  auto odd_periodic = [&](double y) {
    double r = std::fmod(y, 2.0 * L);
    if (r < 0.0) r += 2.0 * L;
    return r <= L ? evaluate(spec.initial.u0, r) : -evaluate(spec.initial.u0, 2.0 * L - r);
  };
  return 0.5 * (odd_periodic(x - c * t) + odd_periodic(x + c * t));
}

ConvergenceReport convergence_study(const RunConfig& cfg, std::size_t levels) {
  if (levels < 3) throw Error(ErrorCode::usage_error, "convergence needs at least 3 levels");
  ConvergenceReport rep;
  const bool exact = has_exact_solution(cfg.spec);
  rep.reference = exact ? "exact" : "self";

  // fixed Courant number across levels: halve the base dt rather than recomputing it, and
  // snap it to T / steps so every level ends exactly at T
  SolverConfig base = cfg.solver;
  const double dt0 = resolve_dt(cfg.spec, build_grid(cfg.spec.geometry, base.h, base.n_rho), base);
  base.dt = base.T_final / std::ceil(base.T_final / dt0 - 1e-9);

  std::vector<Trajectory> runs;
  for (std::size_t k = 0; k < levels; ++k) runs.push_back(run(cfg.spec, level_config(base, k)));

  std::optional<Trajectory> ref;
  if (!exact) ref = run(cfg.spec, level_config(base, levels + 1));

  std::vector<double> hs, errs;
  for (std::size_t k = 0; k < levels; ++k) {
    const Trajectory& tr = runs[k];
    const double T = static_cast<double>(tr.steps) * tr.dt;
    const double err = exact ? l2_error(tr, [&](double x) { return exact_displacement(cfg.spec, x, T); })
                             : l2_error(tr, [&](double x) { return sample_displacement(*ref, x); });
    const SolverConfig lc = level_config(base, k);
    rep.levels.push_back(ConvergenceLevel{lc.h, tr.dt, lc.n_rho, err});
    hs.push_back(lc.h);
    errs.push_back(err);
  }
  rep.estimate = observed_order(hs, errs);
  return rep;
}

json to_json(const ConvergenceReport& r) {
  json lv = json::array();
  for (const auto& l : r.levels) lv.push_back({{"h", l.h}, {"dt", l.dt}, {"n_rho", l.n_rho}, {"error", l.error}});
  json pw = json::array();
  for (double p : r.estimate.pairwise) pw.push_back(number_or_null(p));
  return {{"reference", r.reference},
          {"levels", lv},
          {"order_defined", r.estimate.defined},
          {"order", r.estimate.defined ? json(r.estimate.order) : json(nullptr)},
          {"pairwise", pw}};
}

std::vector<SweepRow> sweep(const json& base, const std::string& axis, const std::vector<double>& values,
                            bool exploratory, std::size_t threads) {
  if (values.empty()) throw Error(ErrorCode::usage_error, "sweep needs at least one value");
  // fail fast on a bad axis before spawning anything
  {
    json probe = base;
    set_path(probe, axis, values.front());
  }
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      SweepRow& row = rows[k];
      row.value = values[k];
      row.alpha_hat = row.r_squared = row.max_res_dissipation = row.max_res_J = kNaN;
      try {
        json j = base;
        set_path(j, axis, values[k]);
        RunConfig cfg = parse_config(j);
        if (exploratory) cfg.solver.override_certificate = true;
        row.certified = certify_config(cfg).passed();
        if (!row.certified && !cfg.solver.override_certificate) {
          row.status = "uncertified";
          continue;
        }
        const SimulationResult res = simulate(cfg);
        row.status = row.certified ? "ok" : "exploratory";
        if (res.report.fit) {
          row.alpha_hat = res.report.fit->alpha_hat;
          row.r_squared = res.report.fit->r_squared;
        }
        if (res.report.max_res_dissipation) row.max_res_dissipation = *res.report.max_res_dissipation;
        if (res.report.max_res_J) row.max_res_J = *res.report.max_res_J;
      } catch (const Error& e) {
        row.status = to_string(e.code());
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, values.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "value,certified,status,alpha_hat,r_squared,max_res_dissipation,max_res_J\n";
  os.precision(17);
  for (const auto& r : rows) {
    os << r.value << ',' << (r.certified ? 1 : 0) << ',' << r.status << ',' << r.alpha_hat << ',' << r.r_squared
       << ',' << r.max_res_dissipation << ',' << r.max_res_J << '\n';
  }
}

}  // namespace transwave
