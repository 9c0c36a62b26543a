#pragma once

// Closed-form coefficient and initial-data families. Everything here has
// analytic derivatives and analytic extrema so hypothesis checks never rely
// on finite differences.

#include <limits>
#include <string>
#include <variant>

namespace transwave {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Sample {
  double value;
  double derivative;
};

// Supremum of some quantity over t >= 0 together with a time attaining it
// (kInfinity when the supremum is only approached as t -> infinity).
struct Extremum {
  double value;
  double at;
};

// --- frictional weight mu1 -------------------------------------------------

struct Mu1Constant {
  double value = 1.0;
};

// scale * exp(-rate * t)
struct Mu1Exponential {
  double scale = 1.0;
  double rate = 0.0;
};

using Mu1Family = std::variant<Mu1Constant, Mu1Exponential>;

Sample evaluate(const Mu1Family& mu1, double t);

// --- delayed weight mu2 ----------------------------------------------------

struct Mu2Constant {
  double value = 0.0;
};

// factor * mu1(t)
struct Mu2Scaled {
  double factor = 0.0;
};

// factor * mu1(t) * sin(omega * t)
struct Mu2Modulated {
  double factor = 0.0;
  double omega = 1.0;
};

using Mu2Family = std::variant<Mu2Constant, Mu2Scaled, Mu2Modulated>;

Sample evaluate(const Mu2Family& mu2, const Mu1Family& mu1, double t);

// --- delay tau -------------------------------------------------------------

struct DelayConstant {
  double value = 0.5;
};

// offset + amplitude * sin(omega * t)
struct DelaySinusoid {
  double offset = 0.5;
  double amplitude = 0.0;
  double omega = 1.0;
};

using DelayFamily = std::variant<DelayConstant, DelaySinusoid>;

Sample evaluate(const DelayFamily& tau, double t);

// --- analytic extrema over t >= 0 ------------------------------------------

Extremum delay_max(const DelayFamily& tau);
Extremum delay_min(const DelayFamily& tau);
Extremum delay_max_slope(const DelayFamily& tau);
Extremum delay_max_abs_slope(const DelayFamily& tau);

// sup of mu1'(t), sup |mu1'/mu1|, inf mu1 on [0, horizon]
Extremum mu1_max_derivative(const Mu1Family& mu1);
Extremum mu1_max_log_rate(const Mu1Family& mu1);
Extremum mu1_min(const Mu1Family& mu1, double horizon);

// sup |mu2| / mu1 and sup |mu2'| / mu1
Extremum mu2_max_ratio(const Mu2Family& mu2, const Mu1Family& mu1);
Extremum mu2_max_derivative_ratio(const Mu2Family& mu2, const Mu1Family& mu1);

// --- spatial profiles ------------------------------------------------------

struct SpaceZero {};

struct SpaceConstant {
  double value = 0.0;
};

// amplitude * cos^4(pi (x - center) / width) on |x - center| < width / 2, zero
// outside; C^3 with compact support.
struct SpaceBump {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
};

// amplitude * sin(wavenumber * x + phase)
struct SpaceSine {
  double amplitude = 1.0;
  double wavenumber = 1.0;
  double phase = 0.0;
};

struct SpaceLinear {
  double slope = 0.0;
  double intercept = 0.0;
};

using SpaceFunction = std::variant<SpaceZero, SpaceConstant, SpaceBump, SpaceSine, SpaceLinear>;

double evaluate(const SpaceFunction& f, double x);
bool is_zero(const SpaceFunction& f);

// --- initial velocity history f0(x, s), s in [-tau(0), 0] -------------------

struct ProfileConstant {
  double value = 1.0;
};

struct ProfileCosine {
  double omega = 1.0;
};

// exp(rate * s)
struct ProfileExponential {
  double rate = 0.0;
};

using TimeProfile = std::variant<ProfileConstant, ProfileCosine, ProfileExponential>;

double evaluate(const TimeProfile& p, double s);

// f0(x, s) = u1(x)
struct HistoryFromVelocity {};

// f0(x, s) = space(x) * time(s)
struct HistorySeparable {
  SpaceFunction space;
  TimeProfile time;
};

using HistoryFunction = std::variant<HistoryFromVelocity, HistorySeparable>;

// Family tags used in configuration files and reports.
std::string family_name(const Mu1Family& f);
std::string family_name(const Mu2Family& f);
std::string family_name(const DelayFamily& f);
std::string family_name(const SpaceFunction& f);
std::string family_name(const TimeProfile& f);
std::string family_name(const HistoryFunction& f);

}  // namespace transwave
