#include "transwave/functions.hpp"

#include <cmath>
#include <numbers>

namespace transwave {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double pi = std::numbers::pi;

// sin(omega t) with omega < 0 is -sin(|omega| t); fold the sign into the amplitude.
struct Oscillation {
  double amplitude;
  double omega;
};

Oscillation normalize(double amplitude, double omega) {
  return omega < 0.0 ? Oscillation{-amplitude, -omega} : Oscillation{amplitude, omega};
}

// log-derivative mu1'/mu1, constant for both supported families
double mu1_log_rate(const Mu1Family& mu1) {
  return std::visit(overloaded{[](const Mu1Constant&) { return 0.0; },
                               [](const Mu1Exponential& e) { return -e.rate; }},
                    mu1);
}

double mu1_infimum(const Mu1Family& mu1) {
  return std::visit(overloaded{[](const Mu1Constant& c) { return c.value; },
                               [](const Mu1Exponential& e) {
                                 if (e.scale <= 0.0) return e.rate <= 0.0 ? -kInfinity : e.scale;
                                 return e.rate > 0.0 ? 0.0 : e.scale;
                               }},
                    mu1);
}

}  // namespace

Sample evaluate(const Mu1Family& mu1, double t) {
  return std::visit(overloaded{[](const Mu1Constant& c) { return Sample{c.value, 0.0}; },
                               [t](const Mu1Exponential& e) {
                                 const double v = e.scale * std::exp(-e.rate * t);
                                 return Sample{v, -e.rate * v};
                               }},
                    mu1);
}

Sample evaluate(const Mu2Family& mu2, const Mu1Family& mu1, double t) {
  const Sample m = evaluate(mu1, t);
  return std::visit(
      overloaded{[](const Mu2Constant& c) { return Sample{c.value, 0.0}; },
                 [&](const Mu2Scaled& s) { return Sample{s.factor * m.value, s.factor * m.derivative}; },
                 [&](const Mu2Modulated& s) {
                   const double sn = std::sin(s.omega * t);
                   const double cs = std::cos(s.omega * t);
                   return Sample{s.factor * m.value * sn,
                                 s.factor * (m.derivative * sn + m.value * s.omega * cs)};
                 }},
      mu2);
}

Sample evaluate(const DelayFamily& tau, double t) {
  return std::visit(overloaded{[](const DelayConstant& c) { return Sample{c.value, 0.0}; },
                               [t](const DelaySinusoid& s) {
                                 return Sample{s.offset + s.amplitude * std::sin(s.omega * t),
                                               s.amplitude * s.omega * std::cos(s.omega * t)};
                               }},
                    tau);
}

Extremum delay_max(const DelayFamily& tau) {
  return std::visit(overloaded{[](const DelayConstant& c) { return Extremum{c.value, 0.0}; },
                               [](const DelaySinusoid& s) {
                                 const auto o = normalize(s.amplitude, s.omega);
                                 if (o.amplitude == 0.0 || o.omega == 0.0) return Extremum{s.offset, 0.0};
                                 const double at = (o.amplitude > 0.0 ? 0.5 : 1.5) * pi / o.omega;
                                 return Extremum{s.offset + std::abs(o.amplitude), at};
                               }},
                    tau);
}

Extremum delay_min(const DelayFamily& tau) {
  return std::visit(overloaded{[](const DelayConstant& c) { return Extremum{c.value, 0.0}; },
                               [](const DelaySinusoid& s) {
                                 const auto o = normalize(s.amplitude, s.omega);
                                 if (o.amplitude == 0.0 || o.omega == 0.0) return Extremum{s.offset, 0.0};
                                 const double at = (o.amplitude > 0.0 ? 1.5 : 0.5) * pi / o.omega;
                                 return Extremum{s.offset - std::abs(o.amplitude), at};
                               }},
                    tau);
}

Extremum delay_max_slope(const DelayFamily& tau) {
  return std::visit(overloaded{[](const DelayConstant&) { return Extremum{0.0, 0.0}; },
                               [](const DelaySinusoid& s) {
                                 const auto o = normalize(s.amplitude, s.omega);
                                 if (o.amplitude == 0.0 || o.omega == 0.0) return Extremum{0.0, 0.0};
                                 const double at = o.amplitude > 0.0 ? 0.0 : pi / o.omega;
                                 return Extremum{std::abs(o.amplitude) * o.omega, at};
                               }},
                    tau);
}

Extremum delay_max_abs_slope(const DelayFamily& tau) {
  return std::visit(overloaded{[](const DelayConstant&) { return Extremum{0.0, 0.0}; },
                               [](const DelaySinusoid& s) {
                                 return Extremum{std::abs(s.amplitude * s.omega), 0.0};
                               }},
                    tau);
}

Extremum mu1_max_derivative(const Mu1Family& mu1) {
  return std::visit(overloaded{[](const Mu1Constant&) { return Extremum{0.0, 0.0}; },
                               [](const Mu1Exponential& e) {
                                 const double at_zero = -e.rate * e.scale;
                                 if (e.rate > 0.0) {
                                   // derivative relaxes monotonically towards 0
                                   return at_zero > 0.0 ? Extremum{at_zero, 0.0} : Extremum{0.0, kInfinity};
                                 }
                                 if (e.rate < 0.0 && at_zero > 0.0) return Extremum{kInfinity, kInfinity};
                                 return Extremum{at_zero, 0.0};
                               }},
                    mu1);
}

Extremum mu1_max_log_rate(const Mu1Family& mu1) {
  return Extremum{std::abs(mu1_log_rate(mu1)), 0.0};
}

Extremum mu1_min(const Mu1Family& mu1, double horizon) {
  const double a = evaluate(mu1, 0.0).value;
  const double b = evaluate(mu1, horizon).value;
  return b < a ? Extremum{b, horizon} : Extremum{a, 0.0};
}

Extremum mu2_max_ratio(const Mu2Family& mu2, const Mu1Family& mu1) {
  return std::visit(overloaded{[&](const Mu2Constant& c) {
                                 if (c.value == 0.0) return Extremum{0.0, 0.0};
                                 const double inf = mu1_infimum(mu1);
                                 // a decaying mu1 has infimum 0, approached as t -> infinity
                                 if (inf <= 0.0) return Extremum{kInfinity, kInfinity};
                                 return Extremum{std::abs(c.value) / inf, 0.0};
                               },
                               [](const Mu2Scaled& s) { return Extremum{std::abs(s.factor), 0.0}; },
                               [](const Mu2Modulated& s) {
                                 const auto o = normalize(s.factor, s.omega);
                                 if (o.amplitude == 0.0 || o.omega == 0.0) return Extremum{0.0, 0.0};
                                 return Extremum{std::abs(o.amplitude), 0.5 * pi / o.omega};
                               }},
                    mu2);
}

Extremum mu2_max_derivative_ratio(const Mu2Family& mu2, const Mu1Family& mu1) {
  const double g = mu1_log_rate(mu1);
  return std::visit(overloaded{[](const Mu2Constant&) { return Extremum{0.0, 0.0}; },
                               [g](const Mu2Scaled& s) { return Extremum{std::abs(s.factor * g), 0.0}; },
                               [g](const Mu2Modulated& s) {
                                 const auto o = normalize(s.factor, s.omega);
                                 if (o.amplitude == 0.0 || o.omega == 0.0) return Extremum{0.0, 0.0};
                                 // f (g sin(wt) + w cos(wt)) = f R cos(wt - phi)
                                 const double phi = std::atan2(g, o.omega);
                                 double theta = std::fmod(phi, pi);
                                 if (theta < 0.0) theta += pi;
                                 return Extremum{std::abs(o.amplitude) * std::hypot(g, o.omega), theta / o.omega};
                               }},
                    mu2);
}

double evaluate(const SpaceFunction& f, double x) {
  return std::visit(overloaded{[](const SpaceZero&) { return 0.0; },
                               [](const SpaceConstant& c) { return c.value; },
                               [x](const SpaceBump& b) {
                                 const double s = (x - b.center) / b.width;
                                 if (std::abs(s) >= 0.5) return 0.0;
                                 const double c = std::cos(pi * s);
                                 return b.amplitude * c * c * c * c;
                               },
                               [x](const SpaceSine& s) {
                                 return s.amplitude * std::sin(s.wavenumber * x + s.phase);
                               },
                               [x](const SpaceLinear& l) { return l.slope * x + l.intercept; }},
                    f);
}

bool is_zero(const SpaceFunction& f) {
  return std::visit(overloaded{[](const SpaceZero&) { return true; },
                               [](const SpaceConstant& c) { return c.value == 0.0; },
                               [](const SpaceBump& b) { return b.amplitude == 0.0; },
                               [](const SpaceSine& s) { return s.amplitude == 0.0; },
                               [](const SpaceLinear& l) { return l.slope == 0.0 && l.intercept == 0.0; }},
                    f);
}

double evaluate(const TimeProfile& p, double s) {
  return std::visit(overloaded{[](const ProfileConstant& c) { return c.value; },
                               [s](const ProfileCosine& c) { return std::cos(c.omega * s); },
                               [s](const ProfileExponential& e) { return std::exp(e.rate * s); }},
                    p);
}

std::string family_name(const Mu1Family& f) {
  return std::holds_alternative<Mu1Constant>(f) ? "constant" : "exponential";
}

std::string family_name(const Mu2Family& f) {
  return std::visit(overloaded{[](const Mu2Constant&) { return "constant"; },
                               [](const Mu2Scaled&) { return "scaled"; },
                               [](const Mu2Modulated&) { return "modulated"; }},
                    f);
}

std::string family_name(const DelayFamily& f) {
  return std::holds_alternative<DelayConstant>(f) ? "constant" : "sinusoid";
}

std::string family_name(const SpaceFunction& f) {
  return std::visit(overloaded{[](const SpaceZero&) { return "zero"; },
                               [](const SpaceConstant&) { return "constant"; },
                               [](const SpaceBump&) { return "bump"; },
                               [](const SpaceSine&) { return "sine"; },
                               [](const SpaceLinear&) { return "linear"; }},
                    f);
}

std::string family_name(const TimeProfile& f) {
  return std::visit(overloaded{[](const ProfileConstant&) { return "constant"; },
                               [](const ProfileCosine&) { return "cosine"; },
                               [](const ProfileExponential&) { return "exponential"; }},
                    f);
}

std::string family_name(const HistoryFunction& f) {
  return std::holds_alternative<HistoryFromVelocity>(f) ? "initial_velocity" : "separable";
}

}  // namespace transwave
