#include "transwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "transwave/error.hpp"
#include "transwave/simd/kernels.hpp"

namespace transwave {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void trapezoid(const Segment& s, std::vector<double>& w) {
  for (std::size_t i = 0; i < s.nodes(); ++i) {
    w.push_back((i == 0 || i == s.cells) ? 0.5 * s.h : s.h);
  }
}

// centered inside the segment, second-order one-sided at its ends
void segment_gradient(const double* u, double* ux, const Segment& s) {
  const std::size_t n = s.cells;
  const double inv_2h = 0.5 / s.h;
  ux[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv_2h;
  simd::active_kernels().centered_diff(u + 1, ux + 1, n - 1, inv_2h);
  ux[n] = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) * inv_2h;
}

void require_stream(std::span<const DiagnosticsRecord> r) {
  if (r.size() < 2) throw Error(ErrorCode::stream_error, "at least two consecutive records are required");
  const double dt = r[1].t - r[0].t;
  if (!(dt > 0.0)) throw Error(ErrorCode::stream_error, "records must advance in time");
  for (std::size_t k = 1; k < r.size(); ++k) {
    const double step = r[k].t - r[k - 1].t;
    if (std::abs(step - dt) > 1e-6 * dt) throw Error(ErrorCode::stream_error, "records are not consecutive steps");
  }
}

ResidualStream finish(std::vector<double> res, std::span<const DiagnosticsRecord> r) {
  ResidualStream out;
  out.max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < res.size(); ++k) {
    if (res[k] > out.max) {
      out.max = res[k];
      out.t_at_max = r[k].t;
    }
  }
  out.residual = std::move(res);
  return out;
}

}  // namespace

double multiplier_q(const DomainGeometry& g, double x) {
  if (x <= g.L1) return x - 0.5 * g.L1;
  if (x < g.L2) return (g.L2 - g.L3 - g.L1) / (2.0 * (g.L2 - g.L1)) * (x - g.L1) + 0.5 * g.L1;
  return x - 0.5 * (g.L2 + g.L3);
}

double poincare_constant(const DomainGeometry& g) { return std::max(g.L1, g.L3 - g.L2); }

double multiplier_bound(const DomainGeometry& g) { return std::max(0.5 * g.L1, 0.5 * (g.L3 - g.L2)); }

DiagnosticsEvaluator::DiagnosticsEvaluator(const ProblemSpec& spec, const Grids& grids)
    : grids_(&grids), geom_(spec.geometry), xi_bar_(resolve_xi_bar(spec)) {
  const SpatialGrid& s = grids.space;
  trapezoid(s.left, w_omega_);
  trapezoid(s.right, w_omega_);
  trapezoid(s.middle, w_mid_);
  const std::size_t nr = grids.rho.size();
  for (std::size_t j = 0; j < nr; ++j) {
    w_rho_.push_back((j == 0 || j + 1 == nr) ? 0.5 * grids.rho.d_rho : grids.rho.d_rho);
  }
  // the middle branch of q is linear, so both interface values are the
  // limits from the elastic side as well
  for (double x : s.x_omega) q_omega_.push_back(multiplier_q(geom_, x));
  for (std::size_t i = 0; i < s.n_mid(); ++i) {
    const double x = s.x_mid[i];
    q_mid_.push_back((geom_.L2 - geom_.L3 - geom_.L1) / (2.0 * (geom_.L2 - geom_.L1)) * (x - geom_.L1) +
                     0.5 * geom_.L1);
  }
  scratch_omega_.resize(s.n_omega());
  scratch_mid_.resize(s.n_mid());
  scratch_prod_.resize(std::max(s.n_omega(), s.n_mid()));
}

void DiagnosticsEvaluator::gradient_omega(const std::vector<double>& u, std::vector<double>& ux) const {
  const SpatialGrid& s = grids_->space;
  ux.resize(u.size());
  segment_gradient(u.data(), ux.data(), s.left);
  segment_gradient(u.data() + s.right.offset, ux.data() + s.right.offset, s.right);
}

void DiagnosticsEvaluator::gradient_mid(const std::vector<double>& v, std::vector<double>& vx) const {
  vx.resize(v.size());
  segment_gradient(v.data(), vx.data(), grids_->space.middle);
}

EnergyRecord DiagnosticsEvaluator::energy(const StateSnapshot& st, const Coefficients& c) const {
  const DiagnosticsRecord r = evaluate(st, c, nullptr);
  return EnergyRecord{r.t, r.E1, r.E2, r.Edelay, r.E};
}

DiagnosticsRecord DiagnosticsEvaluator::evaluate(const StateSnapshot& st, const Coefficients& c,
                                                 const LyapunovWeights* lw) const {
  const auto& k = simd::active_kernels();
  const std::size_t n = st.u.size();
  const std::size_t m = st.v.size();
  const double* w = w_omega_.data();
  const double* wm = w_mid_.data();

  gradient_omega(st.u, scratch_omega_);
  gradient_mid(st.v, scratch_mid_);
  const double* ux = scratch_omega_.data();
  const double* vx = scratch_mid_.data();

  DiagnosticsRecord r;
  r.t = st.t;
  r.coeff = c;
  r.ut_sq = k.weighted_dot(w, st.ut.data(), st.ut.data(), n);
  r.E1 = 0.5 * (r.ut_sq + geom_.a * k.weighted_dot(w, ux, ux, n));
  r.E2 = 0.5 * (k.weighted_dot(wm, st.vt.data(), st.vt.data(), m) + geom_.b * k.weighted_dot(wm, vx, vx, m));

  const std::size_t nr = w_rho_.size();
  double reservoir = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < nr; ++j) {
    const double* row = st.z_row(j);
    const double sj = k.weighted_dot(w, row, row, n);
    reservoir += w_rho_[j] * sj;
    weighted += w_rho_[j] * std::exp(-2.0 * c.tau * grids_->rho.nodes[j]) * sj;
    if (j + 1 == nr) r.z1_sq = sj;
  }
  r.Edelay = 0.5 * c.xi * c.tau * reservoir;
  r.E = r.E1 + r.E2 + r.Edelay;

  r.I1 = k.weighted_dot(w, st.u.data(), st.ut.data(), n) + k.weighted_dot(wm, st.v.data(), st.vt.data(), m);
  double* prod = scratch_prod_.data();
  for (std::size_t i = 0; i < n; ++i) prod[i] = q_omega_[i] * ux[i];
  r.I2 = -k.weighted_dot(w, prod, st.ut.data(), n);
  for (std::size_t i = 0; i < m; ++i) prod[i] = q_mid_[i] * vx[i];
  r.I3 = -k.weighted_dot(wm, prod, st.vt.data(), m);
  r.J = xi_bar_ * c.tau * weighted;
  r.L = lw ? lw->N * r.E + lw->N1 * r.I1 + lw->N2 * r.I2 + lw->N3 * r.I3 + r.J : kNaN;
  r.res_dissipation = kNaN;
  r.res_J = kNaN;
  return r;
}

EnergyRecord compute_energy(const StateSnapshot& state, const ProblemSpec& spec, const Grids& grids) {
  return DiagnosticsEvaluator(spec, grids).energy(state, evaluate_coefficients(spec, state.t));
}

LyapunovRecord compute_lyapunov(const StateSnapshot& state, const ProblemSpec& spec, const Grids& grids,
                                const LyapunovWeights& weights) {
  const auto r = DiagnosticsEvaluator(spec, grids).evaluate(state, evaluate_coefficients(spec, state.t), &weights);
  return LyapunovRecord{r.t, r.I1, r.I2, r.I3, r.J, r.L};
}

ResidualStream check_dissipation(std::span<const DiagnosticsRecord> r, const ProblemSpec& spec) {
  require_stream(r);
  const double xb = resolve_xi_bar(spec);
  const double beta = spec.weights.beta;
  const double root = std::sqrt(1.0 - spec.delay.d);
  const double cu = 1.0 - 0.5 * xb - 0.5 * beta / root;
  std::vector<double> res(r.size() - 1);
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    const Coefficients& c = r[k].coeff;
    const double rhs = -c.mu1 * cu * r[k].ut_sq - c.mu1 * (0.5 * xb * (1.0 - c.dtau) - 0.5 * beta * root) * r[k].z1_sq;
    res[k] = (r[k + 1].E - r[k].E) / (r[k + 1].t - r[k].t) - rhs;
  }
  return finish(std::move(res), r);
}

ResidualStream check_J_inequality(std::span<const DiagnosticsRecord> r, const ProblemSpec& spec) {
  require_stream(r);
  const double xb = resolve_xi_bar(spec);
  std::vector<double> res(r.size() - 1);
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    const double rhs = -2.0 * r[k].J + xb * r[k].ut_sq;
    res[k] = (r[k + 1].J - r[k].J) / (r[k + 1].t - r[k].t) - rhs;
  }
  return finish(std::move(res), r);
}

void attach_residuals(std::vector<DiagnosticsRecord>& records, const ProblemSpec& spec) {
  if (records.size() < 2) return;
  const auto diss = check_dissipation(records, spec);
  const auto jr = check_J_inequality(records, spec);
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    records[k].res_dissipation = diss.residual[k];
    records[k].res_J = jr.residual[k];
  }
  records.back().res_dissipation = 0.0;
  records.back().res_J = 0.0;
}

double tol_scheme(double K, double dt, double h, double d_rho, double E0) { return K * (dt + h + d_rho) * E0; }

PoincareCheck check_poincare(const std::vector<double>& u, const SpatialGrid& grid, const DomainGeometry& geom) {
  double num = 0.0;
  double den = 0.0;
  for (const Segment* s : {&grid.left, &grid.right}) {
    const double* p = u.data() + s->offset;
    for (std::size_t i = 0; i < s->nodes(); ++i) {
      const double wi = (i == 0 || i == s->cells) ? 0.5 * s->h : s->h;
      num += wi * p[i] * p[i];
    }
    for (std::size_t i = 0; i < s->cells; ++i) {
      const double g = (p[i + 1] - p[i]) / s->h;
      den += s->h * g * g;
    }
  }
  PoincareCheck out;
  const double c1 = poincare_constant(geom);
  out.bound = c1 * c1;
  if (num == 0.0) return out;
  out.ratio = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
  out.ok = out.ratio <= out.bound;
  return out;
}

FunctionalBounds check_functional_bounds(const DiagnosticsRecord& r, const ProblemSpec& spec) {
  const DomainGeometry& g = spec.geometry;
  const double c1 = poincare_constant(g);
  const double M = multiplier_bound(g);
  const double slack = 1e-12 * std::max(1.0, r.E);
  FunctionalBounds out;
  out.I1_ok = std::abs(r.I1) <= std::max(1.0, c1 * c1 / g.a) * 2.0 * r.E1 + std::max(1.0, 1.0 / g.b) * 2.0 * r.E2 + slack;
  out.I2_ok = std::abs(r.I2) <= M * std::max(1.0, 1.0 / g.a) * 2.0 * r.E1 + slack;
  out.J_ok = r.coeff.mu1 > 0.0 ? r.J <= 2.0 / r.coeff.mu1 * r.Edelay * (1.0 + 1e-12) + slack : true;
  return out;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> E, double t_start, double t_end,
                   double floor) {
  if (t.size() != E.size() || t.empty()) throw Error(ErrorCode::insufficient_data, "empty energy stream");
  const double E0 = E[0];
  double n = 0.0, sx = 0.0, sy = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_start || t[k] > t_end) continue;
    if (!(E[k] > floor * E0) || !(E[k] > 0.0)) continue;
    pts.emplace_back(t[k], std::log(E[k]));
  }
  if (pts.size() < 2) throw Error(ErrorCode::insufficient_data, "decay window has fewer than two usable points");
  for (const auto& [x, y] : pts) {
    n += 1.0;
    sx += x;
    sy += y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::insufficient_data, "decay window spans a single instant");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : pts) {
    const double e = y - (intercept + slope * x);
    ss_res += e * e;
  }
  DecayFit fit;
  fit.alpha_hat = -slope;
  fit.c_hat = std::exp(intercept) / E0;
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.t_start = pts.front().first;
  fit.t_end = pts.back().first;
  fit.points = pts.size();
  return fit;
}

DecayFit fit_decay(std::span<const DiagnosticsRecord> records, double t_start, double t_end, double floor) {
  std::vector<double> t, E;
  t.reserve(records.size());
  E.reserve(records.size());
  for (const auto& r : records) {
    t.push_back(r.t);
    E.push_back(r.E);
  }
  return fit_decay(t, E, t_start, t_end, floor);
}

}  // namespace transwave
