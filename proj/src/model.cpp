#include "transwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "transwave/error.hpp"

namespace transwave {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Rounding allowance for pointwise checks, relative to the magnitude of the
// compared quantities.
constexpr double kSlack = 64.0 * std::numeric_limits<double>::epsilon();

bool exceeds(double lhs, double rhs) {
  return lhs - rhs > kSlack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::malformed_spec, std::string("non-finite ") + what);
}

class ViolationLog {
 public:
  void add(std::string id, double t, double residual) {
    log_.push_back(Violation{std::move(id), t, residual});
  }

  bool has(const std::string& id) const {
    return std::any_of(log_.begin(), log_.end(), [&](const Violation& v) { return v.hypothesis == id; });
  }

  // Only the first sampled violation of each hypothesis is kept, plus the
  // worst sampled residual replaces it when larger.
  void add_sampled(const std::string& id, double t, double residual) {
    for (auto& v : log_) {
      if (v.hypothesis == id) {
        if (residual > v.residual) {
          v.t = t;
          v.residual = residual;
        }
        return;
      }
    }
    add(id, t, residual);
  }

  bool any_with_prefix(const std::string& prefix) const {
    return std::any_of(log_.begin(), log_.end(),
                       [&](const Violation& v) { return v.hypothesis.rfind(prefix, 0) == 0; });
  }

  std::vector<Violation> take() { return std::move(log_); }

 private:
  std::vector<Violation> log_;
};

}  // namespace

void require_ordered(const DomainGeometry& g) {
  for (double v : {g.L1, g.L2, g.L3, g.a, g.b}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_geometry, "non-finite geometry parameter");
  }
  if (!(0.0 < g.L1 && g.L1 < g.L2 && g.L2 < g.L3)) {
    throw Error(ErrorCode::invalid_geometry, "lengths must satisfy 0 < L1 < L2 < L3");
  }
  if (!(g.a > 0.0 && g.b > 0.0)) throw Error(ErrorCode::invalid_geometry, "wave coefficients must be positive");
}

GeometryCheck validate_geometry(const DomainGeometry& g) {
  require_ordered(g);
  const double lhs = std::max(1.0, g.a / g.b);
  const double rhs = (g.L1 + g.L3 - g.L2) / (2.0 * (g.L2 - g.L1));
  return GeometryCheck{lhs < rhs, lhs, rhs};
}

OpenInterval admissible_xi_interval(double beta, double d) {
  if (!(d < 1.0)) throw Error(ErrorCode::invalid_delay_bound, "delay slope bound d must be < 1");
  if (!(beta >= 0.0) || !(d >= 0.0)) {
    throw Error(ErrorCode::invalid_delay_bound, "beta and d must be non-negative");
  }
  const double r = beta / std::sqrt(1.0 - d);
  return OpenInterval{r, 2.0 - r};
}

double evaluate_history(const InitialData& init, double x, double s) {
  if (const auto* sep = std::get_if<HistorySeparable>(&init.f0)) {
    return evaluate(sep->space, x) * evaluate(sep->time, s);
  }
  return evaluate(init.u1, x);
}

double resolve_xi_bar(const ProblemSpec& spec) {
  if (spec.xi_bar) return *spec.xi_bar;
  // the admissible window is symmetric about 1
  return 1.0;
}

Coefficients evaluate_coefficients(const ProblemSpec& spec, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::domain_error, "coefficients requested at negative time");
  const Sample m1 = evaluate(spec.weights.mu1, t);
  const Sample m2 = evaluate(spec.weights.mu2, spec.weights.mu1, t);
  const Sample tau = evaluate(spec.delay.tau, t);
  return Coefficients{m1.value, m1.derivative, m2.value, m2.derivative,
                      tau.value, tau.derivative, resolve_xi_bar(spec) * m1.value};
}

std::vector<double> uniform_sampling(double horizon, std::size_t count) {
  std::vector<double> ts;
  if (count <= 1) return {0.0};
  ts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ts.push_back(horizon * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return ts;
}

Certificate certify(const ProblemSpec& spec, std::span<const double> sampling, double mu1_floor) {
  Certificate cert;
  const auto geo = validate_geometry(spec.geometry);
  cert.geometry_ok = geo.ok;
  cert.geometric_lhs = geo.lhs;
  cert.geometric_rhs = geo.rhs;

  const WeightSpec& w = spec.weights;
  const DelaySpec& dl = spec.delay;
  require_finite(w.M1, "M1");
  require_finite(w.M2, "M2");
  require_finite(w.beta, "beta");
  require_finite(dl.tau0, "tau0");
  require_finite(dl.tau1, "tau1");
  require_finite(dl.d, "d");

  ViolationLog log;
  double horizon = 0.0;

  for (double t : sampling) {
    if (!std::isfinite(t) || t < 0.0) throw Error(ErrorCode::malformed_spec, "sampling times must be finite and >= 0");
    horizon = std::max(horizon, t);
    const Sample m1 = evaluate(w.mu1, t);
    const Sample m2 = evaluate(w.mu2, w.mu1, t);
    const Sample tau = evaluate(dl.tau, t);
    for (double v : {m1.value, m1.derivative, m2.value, m2.derivative, tau.value, tau.derivative}) {
      require_finite(v, "coefficient value");
    }

    if (!(m1.value > 0.0)) log.add_sampled("H1.positive", t, -m1.value);
    if (exceeds(m1.derivative, 0.0)) log.add_sampled("H1.nonincreasing", t, m1.derivative);
    if (m1.value > 0.0) {
      const double rate = std::abs(m1.derivative / m1.value);
      if (exceeds(rate, w.M1)) log.add_sampled("H1.log_rate", t, rate - w.M1);
    }
    if (exceeds(std::abs(m2.value), w.beta * m1.value)) {
      log.add_sampled("H2.bound", t, std::abs(m2.value) - w.beta * m1.value);
    }
    if (exceeds(std::abs(m2.derivative), w.M2 * m1.value)) {
      log.add_sampled("H2.derivative", t, std::abs(m2.derivative) - w.M2 * m1.value);
    }
    if (exceeds(dl.tau0, tau.value)) log.add_sampled("delay.lower", t, dl.tau0 - tau.value);
    if (exceeds(tau.value, dl.tau1)) log.add_sampled("delay.upper", t, tau.value - dl.tau1);
    if (exceeds(tau.derivative, dl.d)) log.add_sampled("delay.slope", t, tau.derivative - dl.d);
  }

  // Closed-form extrema over t >= 0; reported only when sampling missed them.
  auto analytic = [&](const std::string& id, const Extremum& sup, double bound, auto pointwise) {
    if (log.has(id) || !exceeds(sup.value, bound)) return;
    const double residual = std::isfinite(sup.at) ? pointwise(sup.at) : sup.value - bound;
    log.add(id, sup.at, residual);
  };

  {
    const double m0 = evaluate(w.mu1, 0.0).value;
    const bool positive = std::visit([](const auto& f) {
      using F = std::decay_t<decltype(f)>;
      if constexpr (std::is_same_v<F, Mu1Constant>) return f.value > 0.0;
      else return f.scale > 0.0;
    }, w.mu1);
    if (!positive && !log.has("H1.positive")) log.add("H1.positive", 0.0, -m0);
  }
  analytic("H1.nonincreasing", mu1_max_derivative(w.mu1), 0.0,
           [&](double t) { return evaluate(w.mu1, t).derivative; });
  analytic("H1.log_rate", mu1_max_log_rate(w.mu1), w.M1, [&](double t) {
    const Sample m = evaluate(w.mu1, t);
    return std::abs(m.derivative / m.value) - w.M1;
  });
  analytic("H2.bound", mu2_max_ratio(w.mu2, w.mu1), w.beta, [&](double t) {
    return std::abs(evaluate(w.mu2, w.mu1, t).value) - w.beta * evaluate(w.mu1, t).value;
  });
  analytic("H2.derivative", mu2_max_derivative_ratio(w.mu2, w.mu1), w.M2, [&](double t) {
    return std::abs(evaluate(w.mu2, w.mu1, t).derivative) - w.M2 * evaluate(w.mu1, t).value;
  });
  {
    const Extremum lo = delay_min(dl.tau);
    if (!log.has("delay.lower") && exceeds(dl.tau0, lo.value)) log.add("delay.lower", lo.at, dl.tau0 - lo.value);
  }
  analytic("delay.upper", delay_max(dl.tau), dl.tau1, [&](double t) { return evaluate(dl.tau, t).value - dl.tau1; });
  analytic("delay.slope", delay_max_slope(dl.tau), dl.d, [&](double t) { return evaluate(dl.tau, t).derivative - dl.d; });

  // Declared constants.
  if (!(w.M1 > 0.0)) log.add("H1.M1", kNaN, -w.M1);
  if (!(w.M2 > 0.0)) log.add("H2.M2", kNaN, -w.M2);
  if (!(dl.tau0 > 0.0)) log.add("delay.tau0", kNaN, -dl.tau0);
  if (dl.tau0 > dl.tau1) log.add("delay.order", kNaN, dl.tau0 - dl.tau1);
  if (!(dl.d < 1.0)) log.add("delay.d", kNaN, dl.d - 1.0);
  if (!(w.beta >= 0.0)) log.add("H2.beta", kNaN, -w.beta);

  cert.xi_bar = resolve_xi_bar(spec);
  if (dl.d < 1.0 && w.beta >= 0.0 && dl.d >= 0.0) {
    cert.xi_interval = admissible_xi_interval(w.beta, dl.d);
    const double root = std::sqrt(1.0 - dl.d);
    if (!(w.beta < root)) log.add("H2.beta", kNaN, w.beta - root);
  } else {
    cert.xi_interval = OpenInterval{0.0, 0.0};
    if (dl.d < 0.0) log.add("delay.d", kNaN, -dl.d);
  }
  cert.xi_ok = cert.xi_interval.contains(cert.xi_bar);

  const Extremum inf = mu1_min(w.mu1, horizon);
  cert.mu1_inf = inf.value;
  cert.mu1_below_floor = inf.value < mu1_floor;

  cert.h1_ok = !log.any_with_prefix("H1.");
  cert.h2_ok = !log.any_with_prefix("H2.");
  cert.delay_ok = !log.any_with_prefix("delay.");
  cert.sampled_violations = log.take();
  return cert;
}

}  // namespace transwave
