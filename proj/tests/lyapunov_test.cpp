#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"
#include "transwave/error.hpp"
#include "transwave/lyapunov.hpp"

using namespace transwave;
using transwave::testing::reference_spec;

namespace {

// Direct substitution of a constant set into the inequalities it must satisfy.
void check_invariants(const ConstantSet& c, const DomainGeometry& g, double mu1_0, double beta) {
  const double m = std::max(1.0, g.a / g.b);
  CHECK(c.N1 + (g.L2 - g.L3 - g.L1) / (4.0 * (g.L2 - g.L1)) * c.N3 < 0.0);
  CHECK(c.N2 > m * c.N3);
  CHECK(c.N1 > c.N2 / 2.0);
  CHECK(mu1_0 * mu1_0 * c.c1 * c.c1 * c.eps1 * c.N1 + c.M * c.M * mu1_0 * mu1_0 * c.eps2 * c.N2 <
        g.a * (c.N1 - c.N2 / 2.0));
  const double ut = c.K * c.N - (1.0 + 0.5 / c.eps1) * c.N1 - (0.5 + 0.5 / c.eps2) * c.N2 - c.xi_bar;
  const double z = c.K * c.N - beta * beta * (0.5 / c.eps1 * c.N1 + 0.5 / c.eps2 * c.N2);
  CHECK(ut > 0.0);
  CHECK(z > 0.0);
}

}  // namespace

TEST_CASE("find_constants on the reference geometry") {
  const ProblemSpec s = reference_spec();
  const auto c = find_constants(s);
  REQUIRE(c.has_value());
  CHECK(c->N3 == 1.0);
  CHECK(c->K > 0.0);
  CHECK(c->c1 == doctest::Approx(1.8));
  CHECK(c->M == doctest::Approx(0.9));
  check_invariants(*c, s.geometry, 1.0, 0.3);
}

TEST_CASE("find_constants is infeasible at ratio one") {
  CHECK_FALSE(find_constants({1.0, 2.0, 3.0, 1.0, 1.0}, 1.0, 0.3, 0.0, 1.0, 1.0, 0.5).has_value());
}

TEST_CASE("find_constants is feasible exactly when the geometry condition holds") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> len(0.1, 5.0), coef(0.1, 10.0), mu(0.05, 3.0), beta(0.0, 0.9);
  int feasible = 0;
  for (int k = 0; k < 2000; ++k) {
    double x[3] = {len(rng), len(rng), len(rng)};
    std::sort(x, x + 3);
    if (x[0] == x[1] || x[1] == x[2]) continue;
    const DomainGeometry g{x[0], x[1], x[2], coef(rng), coef(rng)};
    const double m0 = mu(rng), b = beta(rng);
    const auto c = find_constants(g, m0, b, 0.0, 1.0, poincare_constant(g), multiplier_bound(g));
    CHECK(c.has_value() == validate_geometry(g).ok);
    if (c) {
      ++feasible;
      check_invariants(*c, g, m0, b);
    }
  }
  CHECK(feasible > 50);
}

TEST_CASE("find_constants without a dissipation margin") {
  // xi_bar past the admissible window (upper end 1.7) leaves K < 0
  const DomainGeometry g{1.0, 1.2, 3.0, 1.0, 1.0};
  CHECK_FALSE(find_constants(g, 1.0, 0.3, 0.0, 1.75, 1.8, 0.9).has_value());
  CHECK_FALSE(find_constants(g, 1.0, 0.3, 0.0, 0.25, 1.8, 0.9).has_value());
  CHECK(find_constants(g, 1.0, 0.3, 0.0, 1.65, 1.8, 0.9).has_value());
}

TEST_CASE("empirical_equivalence") {
  std::vector<DiagnosticsRecord> rs(5);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    rs[k].t = 0.1 * k;
    rs[k].E = 1.0 + k;
    rs[k].L = 7.0 * rs[k].E;
  }
  auto eq = empirical_equivalence(rs);
  CHECK(eq.gamma1 == doctest::Approx(7.0));
  CHECK(eq.gamma2 == doctest::Approx(7.0));

  rs[2].L = 9.0 * rs[2].E;
  eq = empirical_equivalence(rs);
  CHECK(eq.gamma1 == doctest::Approx(7.0));
  CHECK(eq.gamma2 == doctest::Approx(9.0));

  rs[3].E = 0.0;
  CHECK_THROWS_AS(empirical_equivalence(rs), Error);

  std::vector<DiagnosticsRecord> zero(4);
  CHECK_THROWS_AS(empirical_equivalence(zero), Error);
}

TEST_CASE("predict_alpha on a synthetic stream") {
  const double alpha = 0.2, gamma = 5.0, dt = 1e-3;
  std::vector<DiagnosticsRecord> rs(200);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    rs[k].t = dt * k;
    rs[k].L = 3.0 * std::exp(-alpha * rs[k].t);
    rs[k].E = rs[k].L / gamma;
  }
  const auto eq = empirical_equivalence(rs);
  const auto p = predict_alpha(rs, eq);
  CHECK(p.eta2 == doctest::Approx(alpha * gamma).epsilon(alpha * dt));
  CHECK(p.alpha_pred == doctest::Approx(alpha * gamma / eq.gamma2).epsilon(alpha * dt));

  std::vector<DiagnosticsRecord> short_stream(rs.begin(), rs.begin() + 5);
  CHECK_THROWS_AS(predict_alpha(short_stream, eq), Error);
  std::vector<DiagnosticsRecord> zero(20);
  CHECK_THROWS_AS(predict_alpha(zero, eq), Error);
}
