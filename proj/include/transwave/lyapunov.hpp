#pragma once

#include <optional>
#include <span>

#include "transwave/diagnostics.hpp"
#include "transwave/model.hpp"

namespace transwave {

struct ConstantSet {
  double N = 0.0;
  double N1 = 0.0;
  double N2 = 0.0;
  double N3 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double xi_bar = 1.0;
  // dissipation margin: E' <= -K (int ut^2 + int z(.,1)^2)
  double K = 0.0;
  double c1 = 0.0;
  double M = 0.0;

  LyapunovWeights weights() const { return LyapunovWeights{N, N1, N2, N3}; }
};

// Deterministic midpoint construction. Returns nullopt when the window for
// N1 is empty or the dissipation margin K is not positive.
std::optional<ConstantSet> find_constants(const DomainGeometry& geom, double mu1_at_0, double beta, double d,
                                          double xi_bar, double c1, double M);

// Convenience overload reading everything from the spec.
std::optional<ConstantSet> find_constants(const ProblemSpec& spec);

struct Equivalence {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

// min and max of L/E over the records with E > 0. Throws
// equivalence_violation when E = 0 while L != 0, or when gamma1 <= 0.
Equivalence empirical_equivalence(std::span<const DiagnosticsRecord> records);

struct AlphaPrediction {
  double eta2 = 0.0;
  double alpha_pred = 0.0;
};

// eta2 = min over consecutive records of -(dL/dt)/E, clipped at 0;
// alpha_pred = eta2 / gamma2. Throws insufficient_data below 10 records.
AlphaPrediction predict_alpha(std::span<const DiagnosticsRecord> records, const Equivalence& eq);

}  // namespace transwave
