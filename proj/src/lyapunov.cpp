#include "transwave/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "transwave/error.hpp"

namespace transwave {

std::optional<ConstantSet> find_constants(const DomainGeometry& geom, double mu1_at_0, double beta, double d,
                                          double xi_bar, double c1, double M) {
  const double m = std::max(1.0, geom.a / geom.b);
  // N1 must lie in (N2/2, R N3) with N2 > m N3
  const double R = (geom.L1 + geom.L3 - geom.L2) / (4.0 * (geom.L2 - geom.L1));
  if (!(0.5 * m < R)) return std::nullopt;
  if (!(mu1_at_0 > 0.0) || !(d < 1.0)) return std::nullopt;

  ConstantSet s;
  s.N3 = 1.0;
  s.N2 = 0.5 * (m + 2.0 * R);
  s.N1 = 0.5 * (0.5 * s.N2 + R);
  s.xi_bar = xi_bar;
  s.c1 = c1;
  s.M = M;

  // each epsilon takes half of the gap a (N1 - N2/2), then half again for strictness
  const double gap = geom.a * (s.N1 - 0.5 * s.N2);
  const double mu2 = mu1_at_0 * mu1_at_0;
  s.eps1 = 0.5 * (0.5 * gap / (mu2 * c1 * c1 * s.N1));
  s.eps2 = 0.5 * (0.5 * gap / (M * M * mu2 * s.N2));

  const double root = std::sqrt(1.0 - d);
  s.K = mu1_at_0 * std::min(1.0 - 0.5 * xi_bar - 0.5 * beta / root, 0.5 * xi_bar * (1.0 - d) - 0.5 * beta * root);
  if (!(s.K > 0.0)) return std::nullopt;

  const double need_ut = ((1.0 + 0.5 / s.eps1) * s.N1 + (0.5 + 0.5 / s.eps2) * s.N2 + xi_bar) / s.K;
  const double need_z = (beta * beta * 0.5 / s.eps1 * s.N1 + beta * beta * 0.5 / s.eps2 * s.N2) / s.K;
  s.N = 2.0 * std::max(need_ut, need_z);
  return s;
}

std::optional<ConstantSet> find_constants(const ProblemSpec& spec) {
  const DomainGeometry& g = spec.geometry;
  return find_constants(g, evaluate(spec.weights.mu1, 0.0).value, spec.weights.beta, spec.delay.d,
                        resolve_xi_bar(spec), poincare_constant(g), multiplier_bound(g));
}

Equivalence empirical_equivalence(std::span<const DiagnosticsRecord> records) {
  Equivalence eq{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  bool any = false;
  for (const auto& r : records) {
    if (r.E == 0.0) {
      if (r.L != 0.0) throw Error(ErrorCode::equivalence_violation, "L is nonzero on a zero-energy record");
      continue;
    }
    const double ratio = r.L / r.E;
    eq.gamma1 = std::min(eq.gamma1, ratio);
    eq.gamma2 = std::max(eq.gamma2, ratio);
    any = true;
  }
  if (!any) throw Error(ErrorCode::insufficient_data, "no record with positive energy");
  if (!(eq.gamma1 > 0.0)) throw Error(ErrorCode::equivalence_violation, "L / E is not bounded away from zero");
  return eq;
}

AlphaPrediction predict_alpha(std::span<const DiagnosticsRecord> records, const Equivalence& eq) {
  if (records.size() < 10) throw Error(ErrorCode::insufficient_data, "at least 10 records are needed");
  double eta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    const auto& a = records[k];
    const auto& b = records[k + 1];
    if (!(a.E > 0.0)) continue;
    const double rate = -(b.L - a.L) / (b.t - a.t);
    eta = std::min(eta, rate / a.E);
  }
  if (!std::isfinite(eta)) throw Error(ErrorCode::insufficient_data, "no record with positive energy");
  AlphaPrediction p;
  p.eta2 = std::max(0.0, eta);
  p.alpha_pred = p.eta2 / eq.gamma2;
  return p;
}

}  // namespace transwave
