#include <doctest.h>

#include <fstream>

#include "support.hpp"
#include "transwave/config.hpp"
#include "transwave/error.hpp"

using namespace transwave;
using nlohmann::json;
using transwave::testing::fixture;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  json j;
  in >> j;
  return j;
}

ErrorCode code_of(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected parse failure");
  return ErrorCode::usage_error;
}

}  // namespace

TEST_CASE("reference fixture") {
  const RunConfig c = load_config(fixture("reference.json"));
  CHECK(c.spec.geometry.L1 == 1.0);
  CHECK(c.spec.geometry.L2 == 1.2);
  CHECK(c.spec.geometry.L3 == 3.0);
  CHECK(c.spec.weights.beta == 0.3);
  CHECK(std::get<Mu2Constant>(c.spec.weights.mu2).value == 0.3);
  CHECK(std::get<DelayConstant>(c.spec.delay.tau).value == 0.5);
  CHECK(c.solver.h == 0.005);
  CHECK(c.solver.n_rho == 64);
  CHECK(c.solver.cfl == 0.9);
  CHECK(c.solver.T_final == 40.0);
  CHECK(c.analysis.tol_K == 1.5);
  // v data defaults to the u data
  CHECK(std::holds_alternative<SpaceBump>(c.spec.initial.v0));
}

TEST_CASE("normalized echo round-trips") {
  for (const char* name : {"reference.json", "conservation.json", "convergence_exact.json", "unstable_dt.json"}) {
    const RunConfig c = load_config(fixture(name));
    const json once = to_json(c);
    const json twice = to_json(parse_config(once));
    CHECK(once == twice);
  }
}

TEST_CASE("schema errors") {
  const json ref = read_json(fixture("reference.json"));

  json j = ref;
  j["geometry"]["L4"] = 1.0;
  CHECK(code_of(j) == ErrorCode::malformed_spec);

  j = ref;
  j["weights"].erase("beta");
  CHECK(code_of(j) == ErrorCode::malformed_spec);

  j = ref;
  j["delay"]["tau"]["family"] = "cubic";
  CHECK(code_of(j) == ErrorCode::malformed_spec);

  j = ref;
  j["geometry"]["L1"] = "one";
  CHECK(code_of(j) == ErrorCode::malformed_spec);

  j = ref;
  j["solver"]["backend"] = "spectral";
  CHECK(code_of(j) == ErrorCode::malformed_spec);

  CHECK_THROWS_AS(load_config(fixture("does_not_exist.json")), Error);
}

TEST_CASE("set_path") {
  json j = read_json(fixture("reference.json"));
  set_path(j, "weights.beta", 0.5);
  CHECK(j["weights"]["beta"] == 0.5);
  set_path(j, "geometry.L2", 1.5);
  CHECK(parse_config(j).spec.geometry.L2 == 1.5);
  CHECK_THROWS_AS(set_path(j, "weights.gamma", 1.0), Error);
  CHECK_THROWS_AS(set_path(j, "weights.mu1", 1.0), Error);
  CHECK_THROWS_AS(set_path(j, "geometry.L1.x", 1.0), Error);
}
