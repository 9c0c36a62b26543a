#include "transwave/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "transwave/error.hpp"
#include "transwave/simd/kernels.hpp"

namespace transwave {

double Segment::node(std::size_t i) const {
  if (i == cells) return x1;
  return x0 + static_cast<double>(i) * h;
}

namespace {

Segment make_segment(double x0, double x1, double target_h) {
  Segment s;
  s.x0 = x0;
  s.x1 = x1;
  // guard against 0.2 / 0.1 rounding up to a spurious extra cell
  s.cells = static_cast<std::size_t>(std::ceil((x1 - x0) / target_h - 1e-9));
  s.h = (x1 - x0) / static_cast<double>(s.cells);
  return s;
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Grids build_grid(const DomainGeometry& geom, double target_h, std::size_t n_rho) {
  require_ordered(geom);
  if (!(target_h > 0.0) || !std::isfinite(target_h)) throw Error(ErrorCode::resolution_error, "target_h must be positive");
  const double shortest = std::min({geom.L1, geom.L2 - geom.L1, geom.L3 - geom.L2});
  if (target_h >= shortest) throw Error(ErrorCode::resolution_error, "target_h must be below the shortest segment");
  if (n_rho < 2) throw Error(ErrorCode::resolution_error, "n_rho must be at least 2");

  Grids g;
  SpatialGrid& s = g.space;
  s.left = make_segment(0.0, geom.L1, target_h);
  s.middle = make_segment(geom.L1, geom.L2, target_h);
  s.right = make_segment(geom.L2, geom.L3, target_h);
  s.left.offset = 0;
  s.right.offset = s.left.nodes();
  s.middle.offset = 0;

  for (std::size_t i = 0; i < s.left.nodes(); ++i) s.x_omega.push_back(s.left.node(i));
  for (std::size_t i = 0; i < s.right.nodes(); ++i) s.x_omega.push_back(s.right.node(i));
  for (std::size_t i = 0; i < s.middle.nodes(); ++i) s.x_mid.push_back(s.middle.node(i));
  s.h_min = std::min({s.left.h, s.middle.h, s.right.h});
  s.h_max = std::max({s.left.h, s.middle.h, s.right.h});

  g.rho.d_rho = 1.0 / static_cast<double>(n_rho - 1);
  for (std::size_t j = 0; j < n_rho; ++j) {
    g.rho.nodes.push_back(j + 1 == n_rho ? 1.0 : static_cast<double>(j) * g.rho.d_rho);
  }
  return g;
}

StateSnapshot initialize_state(const ProblemSpec& spec, const Grids& grids) {
  const DomainGeometry& geom = spec.geometry;
  const InitialData& init = spec.initial;
  const SpatialGrid& s = grids.space;

  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::inconsistent_initial_data, what);
  };
  check(close(evaluate(init.u0, 0.0), 0.0) && close(evaluate(init.u0, geom.L3), 0.0),
        "u0 must vanish at x = 0 and x = L3");
  for (double x : {geom.L1, geom.L2}) {
    check(close(evaluate(init.u0, x), evaluate(init.v0, x)), "u0 and v0 disagree at an interface");
    check(close(evaluate(init.u1, x), evaluate(init.v1, x)), "u1 and v1 disagree at an interface");
  }

  StateSnapshot st;
  const std::size_t n = s.n_omega();
  const std::size_t m = s.n_mid();
  st.u.resize(n);
  st.ut.resize(n);
  st.v.resize(m);
  st.vt.resize(m);
  for (std::size_t i = 0; i < n; ++i) {
    st.u[i] = evaluate(init.u0, s.x_omega[i]);
    st.ut[i] = evaluate(init.u1, s.x_omega[i]);
    check(close(evaluate_history(init, s.x_omega[i], 0.0), st.ut[i]), "history f0(x, 0) must equal u1(x)");
  }
  for (std::size_t i = 0; i < m; ++i) {
    st.v[i] = evaluate(init.v0, s.x_mid[i]);
    st.vt[i] = evaluate(init.v1, s.x_mid[i]);
  }
  st.u.front() = 0.0;
  st.u.back() = 0.0;
  st.v.front() = st.u[s.left_interface()];
  st.v.back() = st.u[s.right_interface()];
  st.vt.front() = st.ut[s.left_interface()];
  st.vt.back() = st.ut[s.right_interface()];

  const double tau0 = evaluate(spec.delay.tau, 0.0).value;
  const std::size_t nr = grids.rho.size();
  st.z.resize(n * nr);
  std::copy(st.ut.begin(), st.ut.end(), st.z_row(0));
  for (std::size_t j = 1; j < nr; ++j) {
    double* row = st.z_row(j);
    const double sj = -tau0 * grids.rho.nodes[j];
    for (std::size_t i = 0; i < n; ++i) row[i] = evaluate_history(init, s.x_omega[i], sj);
  }
  return st;
}

HistoryBuffer::HistoryBuffer(double dt, double tau1) : dt_(dt), tau1_(tau1) {
  if (!(dt > 0.0)) throw Error(ErrorCode::domain_error, "history spacing must be positive");
}

void HistoryBuffer::push(double t, std::vector<double> field) {
  if (!entries_.empty()) {
    const double expected = entries_.back().t + dt_;
    if (!(t > entries_.back().t) || std::abs(t - expected) > 1e-6 * dt_) {
      throw Error(ErrorCode::ordering_error, "history timestamps must advance by exactly dt");
    }
  }
  entries_.push_back(Entry{t, std::move(field)});
  const double horizon = t - tau1_ - 2.0 * dt_ - 1e-9 * dt_;
  while (entries_.size() > 2 && entries_.front().t < horizon) entries_.pop_front();
}

void HistoryBuffer::interpolate(double query, std::vector<double>& out) const {
  if (entries_.empty()) throw Error(ErrorCode::history_underflow, "history is empty");
  const double slack = 1e-9 * dt_;
  if (query < entries_.front().t - slack || query > entries_.back().t + slack) {
    throw Error(ErrorCode::history_underflow, "delayed time outside the stored history span");
  }
  if (query >= entries_.back().t) {
    out = entries_.back().field;
    return;
  }
  if (query <= entries_.front().t) {
    out = entries_.front().field;
    return;
  }
  // entries are uniformly spaced; locate the bracket directly then correct
  auto k = static_cast<std::size_t>((query - entries_.front().t) / dt_);
  k = std::min(k, entries_.size() - 2);
  while (k > 0 && entries_[k].t > query) --k;
  while (k + 2 < entries_.size() && entries_[k + 1].t <= query) ++k;
  const Entry& a = entries_[k];
  const Entry& b = entries_[k + 1];
  if (query == a.t) {
    out = a.field;
    return;
  }
  const double w = (query - a.t) / (b.t - a.t);
  out.resize(a.field.size());
  simd::active_kernels().lerp(a.field.data(), b.field.data(), out.data(), out.size(), w);
}

void write_snapshot_csv(std::ostream& os, const StateSnapshot& state, const SpatialGrid& grid) {
  os << "x,segment,displacement,velocity\n";
  os.precision(17);
  for (std::size_t i = 0; i < grid.left.nodes(); ++i) {
    os << grid.x_omega[i] << ",0," << state.u[i] << ',' << state.ut[i] << '\n';
  }
  for (std::size_t i = 0; i < grid.middle.nodes(); ++i) {
    os << grid.x_mid[i] << ",1," << state.v[i] << ',' << state.vt[i] << '\n';
  }
  for (std::size_t i = grid.right.offset; i < grid.n_omega(); ++i) {
    os << grid.x_omega[i] << ",2," << state.u[i] << ',' << state.ut[i] << '\n';
  }
}

}  // namespace transwave
