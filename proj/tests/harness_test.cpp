#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "transwave/error.hpp"
#include "transwave/harness.hpp"

using namespace transwave;
using nlohmann::json;
using transwave::testing::fixture;

namespace {

json quick_json() {
  std::ifstream in(fixture("quick.json"));
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("observed_order") {
  SUBCASE("exact power law") {
    const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> e;
    for (double x : h) e.push_back(3.0 * x * x);
    const auto est = observed_order(h, e);
    REQUIRE(est.defined);
    CHECK(est.order == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(est.pairwise.size() == 3);
    for (double p : est.pairwise) CHECK(p == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("identical resolutions") {
    CHECK_FALSE(observed_order({0.1, 0.1, 0.1}, {1.0, 0.5, 0.25}).defined);
  }
  SUBCASE("zero error") { CHECK_FALSE(observed_order({0.1, 0.05, 0.025}, {1.0, 0.0, 0.25}).defined); }
}

TEST_CASE("exact solution") {
  const RunConfig c = load_config(fixture("convergence_exact.json"));
  REQUIRE(has_exact_solution(c.spec));
  CHECK_FALSE(has_exact_solution(load_config(fixture("reference.json")).spec));

  const double L = c.spec.geometry.L3;
  for (double x : {0.0, 0.7, 1.5, 2.9}) CHECK(exact_displacement(c.spec, x, 0.0) == doctest::Approx(std::sin(std::numbers::pi * x / 3.0)));
  // a standing mode: sin(k x) cos(k t)
  const double k = std::numbers::pi / 3.0;
  for (double t : {0.3, 1.7, 4.8}) {
    for (double x : {0.4, 1.1, 2.5}) {
      CHECK(exact_displacement(c.spec, x, t) == doctest::Approx(std::sin(k * x) * std::cos(k * t)).epsilon(1e-12));
    }
  }
  CHECK(exact_displacement(c.spec, L, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("simulate report") {
  const RunConfig c = load_config(fixture("quick.json"));
  const SimulationResult res = simulate(c);
  const json j = to_json(res.report);
  for (const char* key : {"config", "certificate", "exploratory", "run", "residuals", "decay", "lyapunov"}) {
    CAPTURE(key);
    CHECK(j.contains(key));
  }
  CHECK_FALSE(res.report.exploratory);
  CHECK(res.report.certificate.passed());
  REQUIRE(res.report.fit.has_value());
  CHECK(res.report.fit->alpha_hat > 0.0);
  CHECK(res.report.constants.has_value());
  CHECK(res.report.steps == res.trajectory.steps);

  std::ostringstream os;
  write_trajectory_csv(os, res.trajectory.records);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,E1,E2,Edelay,E,", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == res.trajectory.records.size() + 1);
}

TEST_CASE("simulate gate") {
  RunConfig c = load_config(fixture("failing_certificate.json"));
  c.solver.T_final = 1.0;
  c.solver.h = 0.02;
  c.solver.n_rho = 17;
  try {
    simulate(c);
    FAIL("expected hypothesis_violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hypothesis_violation);
  }
  c.solver.override_certificate = true;
  const auto res = simulate(c);
  CHECK(res.report.exploratory);
  CHECK(to_json(res.report)["exploratory"] == true);
}

TEST_CASE("compare on zero data") {
  RunConfig c = load_config(fixture("quick.json"));
  c.spec.initial = InitialData{};
  c.solver.T_final = 1.0;
  const auto r = compare_backends(c);
  CHECK(r.field_diff == 0.0);
  CHECK(r.energy_diff == 0.0);
  CHECK(r.field_diff_pointwise == 0.0);
}

TEST_CASE("convergence needs three levels") {
  CHECK_THROWS_AS(convergence_study(load_config(fixture("quick.json")), 2), Error);
}

TEST_CASE("sweep over beta") {
  json base = quick_json();
  base["delay"]["d"] = 0.19;
  // mu2 <= beta mu1 for every beta in the sweep
  base["weights"]["mu2"] = {{"family", "scaled"}, {"params", {{"factor", 0.05}}}};
  base["delay"]["tau"] = {{"family", "sinusoid"}, {"params", {{"offset", 0.5}, {"amplitude", 0.1}, {"omega", 1.0}}}};
  base["delay"]["tau0"] = 0.4;
  base["delay"]["tau1"] = 0.6;
  const std::vector<double> betas{0.1, 0.3, 0.5};
  const auto rows = sweep(base, "weights.beta", betas, false, 3);
  REQUIRE(rows.size() == 3);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CAPTURE(k);
    CHECK(rows[k].value == betas[k]);
    CHECK(rows[k].certified);
    CHECK(rows[k].status == "ok");
    CHECK(std::isfinite(rows[k].alpha_hat));
    CHECK(rows[k].alpha_hat > 0.0);
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  CHECK(os.str().rfind("value,certified,status,", 0) == 0);
}

TEST_CASE("sweep outside the hypotheses") {
  const json base = quick_json();
  auto rows = sweep(base, "geometry.L2", {2.0}, false, 1);
  CHECK(rows[0].status == "uncertified");
  CHECK_FALSE(rows[0].certified);
  CHECK(std::isnan(rows[0].alpha_hat));

  rows = sweep(base, "geometry.L2", {2.0}, true, 1);
  CHECK(rows[0].status == "exploratory");
  CHECK_FALSE(rows[0].certified);

  CHECK_THROWS_AS(sweep(base, "geometry.L9", {1.0}, false), Error);
  CHECK_THROWS_AS(sweep(base, "geometry.L2", {}, false), Error);
}
