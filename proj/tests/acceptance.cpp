// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "transwave/error.hpp"
#include "transwave/harness.hpp"

using namespace transwave;
using nlohmann::json;
using transwave::testing::fixture;

namespace {

// every threshold of the gate
constexpr double kConservationDrift = 1e-3;
constexpr double kConservationSeconds = 30.0;
constexpr double kReferenceSeconds = 60.0;
constexpr double kResidualShrink = 1.7;
constexpr double kFitT0 = 5.0;
constexpr double kFitT1 = 35.0;
constexpr double kMinRSquared = 0.98;
constexpr double kPredictionSlack = 1.1;
constexpr double kBackendDiff = 5e-2;
constexpr int kRandomGeometries = 1000;
constexpr int kPoincareFields = 100;
constexpr double kPoincareSineTol = 0.01;
constexpr double kExactOrder = 1.8;
constexpr double kSelfOrder = 1.0;
constexpr std::size_t kConvergenceLevels = 4;
constexpr double kScale = 10.0;
constexpr double kEnergyScaleTol = 1e-10;
constexpr double kInvariantTol = 1e-6;

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// run a criterion; any exception is a failure with its message
void criterion(const char* id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("threw: ") + e.what());
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  json j;
  in >> j;
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

RunConfig reference_config() {
  RunConfig c = load_config(fixture("reference.json"));
  c.analysis.fit_t0 = kFitT0;
  c.analysis.fit_t1 = kFitT1;
  return c;
}

}  // namespace

int main() {
  criterion("RC-1", [] {
    const RunConfig c = load_config(fixture("conservation.json"));
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory tr = run(c.spec, c.solver);
    const double secs = seconds_since(t0);
    const double E0 = tr.records.front().E, ET = tr.records.back().E;
    const double drift = std::abs(ET - E0) / E0;
    report("RC-1", drift <= kConservationDrift && secs <= kConservationSeconds,
           fmt("undamped |E(T)-E(0)|/E(0) = %.3e (<= %.0e), T = %.1f, runtime %.2f s (<= %.0f s)", drift,
               kConservationDrift, tr.records.back().t, secs, kConservationSeconds));
  });

  // the reference run feeds RC-2 through RC-6
  const RunConfig ref = reference_config();
  std::optional<SimulationResult> sim;
  double ref_seconds = 0.0;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    sim = simulate(ref);
    ref_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    for (const char* id : {"RC-2", "RC-3", "RC-4", "RC-5", "RC-6"}) report(id, false, std::string("reference run threw: ") + e.what());
  }

  if (sim) {
    const RunReport& r = sim->report;
    const auto& recs = sim->trajectory.records;

    criterion("RC-2", [&] {
      double worst = -std::numeric_limits<double>::infinity();
      double t_worst = 0.0;
      for (std::size_t n = 0; n + 1 < recs.size(); ++n) {
        const double inc = recs[n + 1].E - recs[n].E;
        if (inc > worst) {
          worst = inc;
          t_worst = recs[n].t;
        }
      }
      report("RC-2", worst <= r.tol_scheme && ref_seconds <= kReferenceSeconds,
             fmt("max E(n+1)-E(n) = %.3e at t = %.3f (<= tol_scheme %.3e), runtime %.2f s (<= %.0f s)", worst,
                 t_worst, r.tol_scheme, ref_seconds, kReferenceSeconds));
    });

    criterion("RC-3", [&] {
      if (!r.max_res_dissipation) throw Error(ErrorCode::usage_error, "no dissipation residual");
      const double r0 = *r.max_res_dissipation;
      // halve h, dt and d_rho together
      RunConfig fine = ref;
      fine.solver.h = ref.solver.h / 2.0;
      fine.solver.dt = r.dt / 2.0;
      fine.solver.n_rho = (ref.solver.n_rho - 1) * 2 + 1;
      fine.solver.record_stride = 1;
      const SimulationResult fr = simulate(fine);
      const double r1 = *fr.report.max_res_dissipation;
      const double shrink = r0 / r1;
      const bool bounded = r0 <= r.tol_scheme;
      const bool shrinks = r0 > 0.0 && r1 > 0.0 && shrink >= kResidualShrink;
      report("RC-3", bounded && shrinks,
             fmt("max residual %.3e (<= tol_scheme %.3e: %s); halved resolution %.3e, ratio %.3f (>= %.1f: %s)", r0,
                 r.tol_scheme, bounded ? "yes" : "no", r1, shrink, kResidualShrink, shrinks ? "yes" : "no"));
    });

    criterion("RC-4", [&] {
      if (!r.fit) throw Error(ErrorCode::usage_error, "decay fit failed: " + r.fit_error);
      report("RC-4", r.fit->alpha_hat > 0.0 && r.fit->r_squared >= kMinRSquared,
             fmt("alpha_hat = %.4f (> 0), r^2 = %.5f (>= %.2f) over [%.1f, %.1f]", r.fit->alpha_hat,
                 r.fit->r_squared, kMinRSquared, r.fit->t_start, r.fit->t_end));
    });

    criterion("RC-5", [&] {
      const bool feasible = r.constants.has_value();
      const bool have = r.equivalence && r.prediction && r.fit;
      const double g1 = r.equivalence ? r.equivalence->gamma1 : 0.0;
      const double ap = r.prediction ? r.prediction->alpha_pred : 0.0;
      const double ah = r.fit ? r.fit->alpha_hat : 0.0;
      report("RC-5", feasible && have && g1 > 0.0 && ap > 0.0 && ap <= kPredictionSlack * ah,
             fmt("constants %s, gamma1 = %.4g (> 0), alpha_pred = %.4g in (0, %.1f * alpha_hat = %.4g]",
                 feasible ? "feasible" : "infeasible", g1, ap, kPredictionSlack, kPredictionSlack * ah));
    });

    criterion("RC-6", [&] {
      if (!r.max_res_J) throw Error(ErrorCode::usage_error, "no J residual");
      report("RC-6", *r.max_res_J <= r.tol_scheme,
             fmt("max J residual %.3e (<= tol_scheme %.3e)", *r.max_res_J, r.tol_scheme));
    });
  }

  criterion("RC-7", [&] {
    RunConfig coarse = ref;
    coarse.solver.h = 0.01;
    coarse.solver.n_rho = 32;
    RunConfig fine = ref;
    fine.solver.h = 0.005;
    fine.solver.n_rho = 63;
    const CompareReport a = compare_backends(coarse), b = compare_backends(fine);
    report("RC-7", a.field_diff <= kBackendDiff && b.field_diff < a.field_diff,
           fmt("field difference %.3e at h = 0.01, n_rho = 32 (<= %.0e); %.3e at h = 0.005, n_rho = 63 (strictly "
               "smaller)",
               a.field_diff, kBackendDiff, b.field_diff));
  });

  criterion("RC-8", [] {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> len(0.1, 5.0), coef(0.1, 10.0);
    int mismatches = 0, feasible = 0, drawn = 0;
    const ProblemSpec base = transwave::testing::reference_spec();
    while (drawn < kRandomGeometries) {
      double x[3] = {len(rng), len(rng), len(rng)};
      std::sort(x, x + 3);
      if (x[0] == x[1] || x[1] == x[2]) continue;
      ++drawn;
      ProblemSpec s = base;
      s.geometry = DomainGeometry{x[0], x[1], x[2], coef(rng), coef(rng)};
      const bool f = find_constants(s).has_value();
      feasible += f;
      if (f != validate_geometry(s.geometry).ok) ++mismatches;
    }
    report("RC-8", mismatches == 0,
           fmt("%d mismatches over %d random geometries (%d feasible)", mismatches, drawn, feasible));
  });

  criterion("RC-9", [] {
    const json table = read_json(fixture("certificate_table.json"));
    const json base = read_json(fixture("reference.json"));
    int errors = 0;
    std::string wrong;
    for (const auto& row : table) {
      json j = base;
      for (const auto& [path, value] : row.at("set").items()) {
        std::string ptr = "/" + path;
        std::replace(ptr.begin(), ptr.end(), '.', '/');
        j[json::json_pointer(ptr)] = value;
      }
      const Certificate c = certify_config(parse_config(j));
      const json& e = row.at("expect");
      const bool ok = c.geometry_ok == e.at("geometry_ok").get<bool>() && c.h1_ok == e.at("h1_ok").get<bool>() &&
                      c.h2_ok == e.at("h2_ok").get<bool>() && c.delay_ok == e.at("delay_ok").get<bool>() &&
                      c.xi_ok == e.at("xi_ok").get<bool>();
      if (!ok) {
        ++errors;
        wrong += " " + row.at("name").get<std::string>();
      }
    }
    report("RC-9", errors == 0 && table.size() == 8,
           fmt("%d classification errors over %zu specs%s", errors, table.size(), wrong.c_str()));
  });

  criterion("RC-10", [] {
    const DomainGeometry geom{1.0, 1.2, 3.0, 1.0, 1.0};
    const Grids g = build_grid(geom, 0.005, 2);
    const auto& sp = g.space;
    std::mt19937_64 rng(10);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_int_distribution<int> modes(1, 6);
    int bad = 0;
    double worst = 0.0, bound = 0.0;
    for (int k = 0; k < kPoincareFields; ++k) {
      std::vector<double> u(sp.n_omega());
      if (k % 2 == 0) {
        for (double& x : u) x = n(rng);
      } else {
        const int K = modes(rng);
        std::vector<double> amp(K);
        for (double& a : amp) a = n(rng);
        const double ramp = n(rng);
        for (std::size_t i = 0; i < u.size(); ++i) {
          const double x = sp.x_omega[i];
          double val = ramp * (x <= geom.L1 ? x : geom.L3 - x);
          for (int j = 0; j < K; ++j) val += amp[j] * std::sin((j + 1) * std::numbers::pi * x / geom.L3);
          u[i] = val;
        }
      }
      u.front() = u.back() = 0.0;
      const auto p = check_poincare(u, sp, geom);
      bound = p.bound;
      worst = std::max(worst, p.ratio);
      if (!p.ok || p.ratio > p.bound) ++bad;
    }
    std::vector<double> u(sp.n_omega(), 0.0);
    for (std::size_t i = 0; i <= sp.left_interface(); ++i) u[i] = std::sin(std::numbers::pi * sp.x_omega[i] / geom.L1);
    const auto p = check_poincare(u, sp, geom);
    const double expected = geom.L1 * geom.L1 / (std::numbers::pi * std::numbers::pi);
    const double dev = std::abs(p.ratio - expected) / expected;
    report("RC-10", bad == 0 && p.ok && dev <= kPoincareSineTol,
           fmt("%d of %d random fields above c1^2 = %.3f (worst ratio %.3f); sine ratio %.5f vs %.5f (%.2e rel, <= "
               "%.0e)",
               bad, kPoincareFields, bound, worst, p.ratio, expected, dev, kPoincareSineTol));
  });

  criterion("RC-11", [] {
    const ConvergenceReport ex = convergence_study(load_config(fixture("convergence_exact.json")), kConvergenceLevels);
    const ConvergenceReport da =
        convergence_study(load_config(fixture("convergence_damped.json")), kConvergenceLevels);
    const bool ok = ex.reference == "exact" && ex.estimate.defined && ex.estimate.order >= kExactOrder &&
                    da.estimate.defined && da.estimate.order >= kSelfOrder;
    report("RC-11", ok,
           fmt("undamped order %.3f against the %s solution (>= %.1f); damped self-convergence order %.3f (>= %.1f)",
               ex.estimate.order, ex.reference.c_str(), kExactOrder, da.estimate.order, kSelfOrder));
  });

  criterion("RC-12", [&] {
    json base = read_json(fixture("reference.json"));
    json scaled = base;
    scaled["initial"]["u0"]["params"]["amplitude"] = kScale * base["initial"]["u0"]["params"]["amplitude"].get<double>();
    const SimulationResult a = simulate(parse_config(base)), b = simulate(parse_config(scaled));
    const auto& ra = a.trajectory.records;
    const auto& rb = b.trajectory.records;
    if (ra.size() != rb.size()) throw Error(ErrorCode::usage_error, "record streams differ in length");
    if (!a.report.fit || !b.report.fit || !a.report.equivalence || !b.report.equivalence)
      throw Error(ErrorCode::usage_error, "fit or equivalence missing");
    double e_dev = 0.0;
    for (std::size_t k = 0; k < ra.size(); ++k) e_dev = std::max(e_dev, rel(rb[k].E, kScale * kScale * ra[k].E));
    const double a_dev = rel(a.report.fit->alpha_hat, b.report.fit->alpha_hat);
    const double g1_dev = rel(a.report.equivalence->gamma1, b.report.equivalence->gamma1);
    const double g2_dev = rel(a.report.equivalence->gamma2, b.report.equivalence->gamma2);
    report("RC-12", e_dev <= kEnergyScaleTol && std::max({a_dev, g1_dev, g2_dev}) <= kInvariantTol,
           fmt("s = %.0f: max rel dev of E vs s^2 E = %.2e (<= %.0e); alpha_hat %.2e, gamma1 %.2e, gamma2 %.2e "
               "(<= %.0e)",
               kScale, e_dev, kEnergyScaleTol, a_dev, g1_dev, g2_dev, kInvariantTol));
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
