#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "transwave/discretization.hpp"
#include "transwave/model.hpp"

namespace transwave {

struct EnergyRecord {
  double t = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
  double Edelay = 0.0;
  double E = 0.0;
};

// Weights of the Lyapunov combination L = N E + N1 I1 + N2 I2 + N3 I3 + J.
struct LyapunovWeights {
  double N = 0.0;
  double N1 = 0.0;
  double N2 = 0.0;
  double N3 = 0.0;
};

struct LyapunovRecord {
  double t = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
  double J = 0.0;
  double L = 0.0;
};

// One time level of the trajectory. ut_sq and z1_sq are the integrals of
// ut^2 and z(., 1)^2 over Omega; the residuals are filled in once the next
// level is known and stay NaN otherwise.
struct DiagnosticsRecord {
  double t = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
  double Edelay = 0.0;
  double E = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
  double J = 0.0;
  double L = 0.0;
  double ut_sq = 0.0;
  double z1_sq = 0.0;
  Coefficients coeff{};
  double res_dissipation = 0.0;
  double res_J = 0.0;
};

// Multiplier with |q| <= max{L1/2, (L3-L2)/2}, continuous at L1 and L2.
double multiplier_q(const DomainGeometry& geom, double x);

// Poincare constant max{L1, L3 - L2} and the bound M on |q|.
double poincare_constant(const DomainGeometry& geom);
double multiplier_bound(const DomainGeometry& geom);

// Quadrature weights and multiplier samples for one grid, reused every step.
class DiagnosticsEvaluator {
 public:
  DiagnosticsEvaluator(const ProblemSpec& spec, const Grids& grids);

  EnergyRecord energy(const StateSnapshot& state, const Coefficients& c) const;

  // L is assembled only when weights are given, NaN otherwise.
  DiagnosticsRecord evaluate(const StateSnapshot& state, const Coefficients& c,
                             const LyapunovWeights* weights) const;

  // gradient on Omega (left then right) and on the middle segment
  void gradient_omega(const std::vector<double>& u, std::vector<double>& ux) const;
  void gradient_mid(const std::vector<double>& v, std::vector<double>& vx) const;

  const std::vector<double>& weights_omega() const { return w_omega_; }
  const std::vector<double>& weights_mid() const { return w_mid_; }
  const std::vector<double>& weights_rho() const { return w_rho_; }

 private:
  const Grids* grids_;
  DomainGeometry geom_;
  double xi_bar_;
  std::vector<double> w_omega_;
  std::vector<double> w_mid_;
  std::vector<double> w_rho_;
  std::vector<double> q_omega_;
  std::vector<double> q_mid_;
  mutable std::vector<double> scratch_omega_;
  mutable std::vector<double> scratch_mid_;
  mutable std::vector<double> scratch_prod_;
};

EnergyRecord compute_energy(const StateSnapshot& state, const ProblemSpec& spec, const Grids& grids);
LyapunovRecord compute_lyapunov(const StateSnapshot& state, const ProblemSpec& spec, const Grids& grids,
                                const LyapunovWeights& weights);

struct ResidualStream {
  std::vector<double> residual;  // residual[k] belongs to the step from record k to k+1
  double max = 0.0;
  double t_at_max = 0.0;
};

// r_n = (E_{n+1} - E_n)/dt - RHS(t_n). Throws stream_error unless the records
// are at least two and uniformly spaced.
ResidualStream check_dissipation(std::span<const DiagnosticsRecord> records, const ProblemSpec& spec);

// r_n = (J_{n+1} - J_n)/dt - (-2 J_n + xi_bar * int ut^2)
ResidualStream check_J_inequality(std::span<const DiagnosticsRecord> records, const ProblemSpec& spec);

// Writes both residual streams into the records (last record keeps 0).
void attach_residuals(std::vector<DiagnosticsRecord>& records, const ProblemSpec& spec);

// K (dt + h + d_rho) E(0)
double tol_scheme(double K, double dt, double h, double d_rho, double E0);

struct PoincareCheck {
  bool ok = true;
  double ratio = 0.0;  // int u^2 / int ux^2 over Omega, 0 when u vanishes
  double bound = 0.0;  // c1^2
};

// Gradients are taken cellwise here so the discrete inequality holds for
// every admissible nodal field, not only smooth ones.
PoincareCheck check_poincare(const std::vector<double>& u, const SpatialGrid& grid, const DomainGeometry& geom);

// Pointwise bounds relating the correctors to the energy.
struct FunctionalBounds {
  bool I1_ok = true;
  bool I2_ok = true;
  bool J_ok = true;
};

FunctionalBounds check_functional_bounds(const DiagnosticsRecord& r, const ProblemSpec& spec);

struct DecayFit {
  double alpha_hat = 0.0;
  double c_hat = 0.0;
  double r_squared = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t points = 0;
};

// Least squares of ln E over records in [t_start, t_end] with E > floor E(0),
// E(0) being the first entry. Throws insufficient_data with fewer than two
// usable points. The model is E(t) ~ c_hat E(0) exp(-alpha_hat t).
DecayFit fit_decay(std::span<const double> t, std::span<const double> E, double t_start, double t_end,
                   double floor = 1e-8);
DecayFit fit_decay(std::span<const DiagnosticsRecord> records, double t_start, double t_end, double floor = 1e-8);

}  // namespace transwave
