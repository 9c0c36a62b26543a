#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transwave/functions.hpp"

namespace transwave {

// Three-segment bar: damped u on ]0,L1[ and ]L2,L3[, elastic v on ]L1,L2[.
struct DomainGeometry {
  double L1 = 1.0;
  double L2 = 2.0;
  double L3 = 3.0;
  double a = 1.0;
  double b = 1.0;

  double damped_length() const { return L1 + (L3 - L2); }
};

// Throws invalid_geometry unless 0 < L1 < L2 < L3 and a, b > 0 (all finite).
void require_ordered(const DomainGeometry& geom);

struct GeometryCheck {
  bool ok;
  double lhs;  // max{1, a/b}
  double rhs;  // (L1 + L3 - L2) / (2 (L2 - L1))
};

GeometryCheck validate_geometry(const DomainGeometry& geom);

struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo < hi); }
  bool contains(double x) const { return lo < x && x < hi; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

// (beta / sqrt(1-d), 2 - beta / sqrt(1-d)); throws invalid_delay_bound for d >= 1.
OpenInterval admissible_xi_interval(double beta, double d);

struct WeightSpec {
  Mu1Family mu1 = Mu1Constant{1.0};
  Mu2Family mu2 = Mu2Constant{0.0};
  double M1 = 1.0;
  double M2 = 1.0;
  double beta = 0.0;
};

struct DelaySpec {
  DelayFamily tau = DelayConstant{0.5};
  double tau0 = 0.5;
  double tau1 = 0.5;
  double d = 0.0;
};

struct InitialData {
  SpaceFunction u0 = SpaceZero{};
  SpaceFunction u1 = SpaceZero{};
  SpaceFunction v0 = SpaceZero{};
  SpaceFunction v1 = SpaceZero{};
  HistoryFunction f0 = HistoryFromVelocity{};
};

double evaluate_history(const InitialData& init, double x, double s);

struct ProblemSpec {
  DomainGeometry geometry;
  WeightSpec weights;
  DelaySpec delay;
  InitialData initial;
  // Defaults to the midpoint of the admissible window (always 1).
  std::optional<double> xi_bar;
};

double resolve_xi_bar(const ProblemSpec& spec);

struct Coefficients {
  double mu1;
  double dmu1;
  double mu2;
  double dmu2;
  double tau;
  double dtau;
  double xi;
};

// Throws domain_error for t < 0.
Coefficients evaluate_coefficients(const ProblemSpec& spec, double t);

struct Violation {
  std::string hypothesis;
  // infinity when only approached asymptotically, NaN for declared constants
  double t;
  double residual;
};

struct Certificate {
  bool geometry_ok = false;
  bool h1_ok = false;
  bool h2_ok = false;
  bool delay_ok = false;
  bool xi_ok = false;
  double geometric_lhs = 0.0;
  double geometric_rhs = 0.0;
  OpenInterval xi_interval;
  double xi_bar = 1.0;
  std::vector<Violation> sampled_violations;
  // inf of mu1 over the sampled horizon and whether it dropped below the floor
  double mu1_inf = 0.0;
  bool mu1_below_floor = false;

  bool passed() const { return geometry_ok && h1_ok && h2_ok && delay_ok && xi_ok; }
};

// Checks every hypothesis pointwise on `sampling` and against the closed-form
// extrema of the supported families. Throws malformed_spec for non-finite
// parameters or sampling times.
Certificate certify(const ProblemSpec& spec, std::span<const double> sampling, double mu1_floor = 1e-6);

std::vector<double> uniform_sampling(double horizon, std::size_t count);

}  // namespace transwave
