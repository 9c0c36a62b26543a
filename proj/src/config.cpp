#include "transwave/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "transwave/error.hpp"

namespace transwave {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::malformed_spec, where + ": " + what);
}

// Object reader that rejects unknown keys once all lookups are done.
class Obj {
 public:
  Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(where_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  double num(const std::string& key) {
    if (!has(key)) fail(where_, "missing '" + key + "'");
    return number_at(key);
  }

  double num(const std::string& key, double fallback) { return has(key) ? number_at(key) : fallback; }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) fail(where_, "'" + key + "' must be an integer");
    const auto x = v.get<long long>();
    if (x < 0) fail(where_, "'" + key + "' must be non-negative");
    return static_cast<std::size_t>(x);
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) fail(where_, "'" + key + "' must be a boolean");
    return j_.at(key).get<bool>();
  }

  std::string str(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_string()) fail(where_, "'" + key + "' must be a string");
    return j_.at(key).get<std::string>();
  }

  const json& sub(const std::string& key) {
    if (!has(key)) fail(where_, "missing '" + key + "'");
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void done() const {
    for (const auto& [k, _] : j_.items()) {
      if (!seen_.count(k)) fail(where_, "unknown key '" + k + "'");
    }
  }

 private:
  double number_at(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_number()) fail(where_, "'" + key + "' must be a number");
    return v.get<double>();
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

struct Tagged {
  std::string family;
  json params;
};

Tagged tagged(const json& j, const std::string& where) {
  Obj o(j, where);
  if (!o.has("family")) fail(where, "missing 'family'");
  const json& fam = j.at("family");
  if (!fam.is_string()) fail(where, "'family' must be a string");
  json params = o.has("params") ? j.at("params") : json::object();
  o.done();
  return Tagged{fam.get<std::string>(), params};
}

Mu1Family parse_mu1(const json& j, const std::string& where) {
  const Tagged t = tagged(j, where);
  Obj p(t.params, where + ".params");
  Mu1Family out;
  if (t.family == "constant") {
    out = Mu1Constant{p.num("value")};
  } else if (t.family == "exponential") {
    out = Mu1Exponential{p.num("scale"), p.num("rate")};
  } else {
    fail(where, "unknown family '" + t.family + "'");
  }
  p.done();
  return out;
}

Mu2Family parse_mu2(const json& j, const std::string& where, double beta) {
  const Tagged t = tagged(j, where);
  Obj p(t.params, where + ".params");
  Mu2Family out;
  if (t.family == "constant") {
    out = Mu2Constant{p.num("value")};
  } else if (t.family == "scaled") {
    out = Mu2Scaled{p.num("factor", beta)};
  } else if (t.family == "modulated") {
    out = Mu2Modulated{p.num("factor", beta), p.num("omega", 1.0)};
  } else {
    fail(where, "unknown family '" + t.family + "'");
  }
  p.done();
  return out;
}

DelayFamily parse_tau(const json& j, const std::string& where) {
  const Tagged t = tagged(j, where);
  Obj p(t.params, where + ".params");
  DelayFamily out;
  if (t.family == "constant") {
    out = DelayConstant{p.num("value")};
  } else if (t.family == "sinusoid") {
    out = DelaySinusoid{p.num("offset"), p.num("amplitude"), p.num("omega")};
  } else {
    fail(where, "unknown family '" + t.family + "'");
  }
  p.done();
  return out;
}

SpaceFunction parse_space(const json& j, const std::string& where) {
  const Tagged t = tagged(j, where);
  Obj p(t.params, where + ".params");
  SpaceFunction out;
  if (t.family == "zero") {
    out = SpaceZero{};
  } else if (t.family == "constant") {
    out = SpaceConstant{p.num("value")};
  } else if (t.family == "bump") {
    out = SpaceBump{p.num("center"), p.num("width"), p.num("amplitude", 1.0)};
    if (!(std::get<SpaceBump>(out).width > 0.0)) fail(where, "bump width must be positive");
  } else if (t.family == "sine") {
    out = SpaceSine{p.num("amplitude", 1.0), p.num("wavenumber"), p.num("phase", 0.0)};
  } else if (t.family == "linear") {
    out = SpaceLinear{p.num("slope"), p.num("intercept", 0.0)};
  } else {
    fail(where, "unknown family '" + t.family + "'");
  }
  p.done();
  return out;
}

TimeProfile parse_profile(const json& j, const std::string& where) {
  const Tagged t = tagged(j, where);
  Obj p(t.params, where + ".params");
  TimeProfile out;
  if (t.family == "constant") {
    out = ProfileConstant{p.num("value", 1.0)};
  } else if (t.family == "cosine") {
    out = ProfileCosine{p.num("omega")};
  } else if (t.family == "exponential") {
    out = ProfileExponential{p.num("rate")};
  } else {
    fail(where, "unknown family '" + t.family + "'");
  }
  p.done();
  return out;
}

HistoryFunction parse_history(const json& j, const std::string& where) {
  const Tagged t = tagged(j, where);
  Obj p(t.params, where + ".params");
  HistoryFunction out;
  if (t.family == "initial_velocity") {
    out = HistoryFromVelocity{};
  } else if (t.family == "separable") {
    out = HistorySeparable{parse_space(p.sub("space"), p.path("space")), parse_profile(p.sub("time"), p.path("time"))};
  } else {
    fail(where, "unknown family '" + t.family + "'");
  }
  p.done();
  return out;
}

json family(const std::string& name, json params) { return json{{"family", name}, {"params", std::move(params)}}; }

json to_json(const Mu1Family& f) {
  return std::visit(overloaded{[](const Mu1Constant& c) { return family("constant", {{"value", c.value}}); },
                               [](const Mu1Exponential& e) {
                                 return family("exponential", {{"scale", e.scale}, {"rate", e.rate}});
                               }},
                    f);
}

json to_json(const Mu2Family& f) {
  return std::visit(
      overloaded{[](const Mu2Constant& c) { return family("constant", {{"value", c.value}}); },
                 [](const Mu2Scaled& s) { return family("scaled", {{"factor", s.factor}}); },
                 [](const Mu2Modulated& s) { return family("modulated", {{"factor", s.factor}, {"omega", s.omega}}); }},
      f);
}

json to_json(const DelayFamily& f) {
  return std::visit(overloaded{[](const DelayConstant& c) { return family("constant", {{"value", c.value}}); },
                               [](const DelaySinusoid& s) {
                                 return family("sinusoid",
                                               {{"offset", s.offset}, {"amplitude", s.amplitude}, {"omega", s.omega}});
                               }},
                    f);
}

json to_json(const SpaceFunction& f) {
  return std::visit(
      overloaded{[](const SpaceZero&) { return family("zero", json::object()); },
                 [](const SpaceConstant& c) { return family("constant", {{"value", c.value}}); },
                 [](const SpaceBump& b) {
                   return family("bump", {{"center", b.center}, {"width", b.width}, {"amplitude", b.amplitude}});
                 },
                 [](const SpaceSine& s) {
                   return family("sine", {{"amplitude", s.amplitude}, {"wavenumber", s.wavenumber}, {"phase", s.phase}});
                 },
                 [](const SpaceLinear& l) { return family("linear", {{"slope", l.slope}, {"intercept", l.intercept}}); }},
      f);
}

json to_json(const TimeProfile& f) {
  return std::visit(overloaded{[](const ProfileConstant& c) { return family("constant", {{"value", c.value}}); },
                               [](const ProfileCosine& c) { return family("cosine", {{"omega", c.omega}}); },
                               [](const ProfileExponential& e) { return family("exponential", {{"rate", e.rate}}); }},
                    f);
}

json to_json(const HistoryFunction& f) {
  return std::visit(overloaded{[](const HistoryFromVelocity&) { return family("initial_velocity", json::object()); },
                               [](const HistorySeparable& s) {
                                 return family("separable", {{"space", to_json(s.space)}, {"time", to_json(s.time)}});
                               }},
                    f);
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  Obj root(j, "config");

  {
    Obj g(root.sub("geometry"), "geometry");
    c.spec.geometry = DomainGeometry{g.num("L1"), g.num("L2"), g.num("L3"), g.num("a"), g.num("b")};
    g.done();
  }
  {
    Obj w(root.sub("weights"), "weights");
    WeightSpec& ws = c.spec.weights;
    ws.M1 = w.num("M1");
    ws.M2 = w.num("M2");
    ws.beta = w.num("beta");
    ws.mu1 = parse_mu1(w.sub("mu1"), "weights.mu1");
    ws.mu2 = parse_mu2(w.sub("mu2"), "weights.mu2", ws.beta);
    w.done();
  }
  {
    Obj d(root.sub("delay"), "delay");
    DelaySpec& ds = c.spec.delay;
    ds.tau = parse_tau(d.sub("tau"), "delay.tau");
    ds.tau0 = d.num("tau0");
    ds.tau1 = d.num("tau1");
    ds.d = d.num("d");
    d.done();
  }
  if (root.has("xi_bar")) c.spec.xi_bar = root.num("xi_bar");
  if (root.has("initial")) {
    Obj in(j.at("initial"), "initial");
    InitialData& id = c.spec.initial;
    if (in.has("u0")) id.u0 = parse_space(j.at("initial").at("u0"), "initial.u0");
    if (in.has("u1")) id.u1 = parse_space(j.at("initial").at("u1"), "initial.u1");
    id.v0 = in.has("v0") ? parse_space(j.at("initial").at("v0"), "initial.v0") : id.u0;
    id.v1 = in.has("v1") ? parse_space(j.at("initial").at("v1"), "initial.v1") : id.u1;
    if (in.has("f0")) id.f0 = parse_history(j.at("initial").at("f0"), "initial.f0");
    in.done();
  }
  if (root.has("solver")) {
    Obj s(j.at("solver"), "solver");
    SolverConfig& sc = c.solver;
    sc.h = s.num("h", sc.h);
    sc.n_rho = s.count("n_rho", sc.n_rho);
    sc.cfl = s.num("cfl", sc.cfl);
    if (s.has("dt") && !j.at("solver").at("dt").is_null()) sc.dt = s.num("dt");
    try {
      sc.backend = parse_backend(s.str("backend", to_string(sc.backend)));
    } catch (const Error& e) {
      fail("solver", e.what());
    }
    sc.T_final = s.num("T_final", sc.T_final);
    sc.record_stride = s.count("record_stride", sc.record_stride);
    sc.snapshot_stride = s.count("snapshot_stride", sc.snapshot_stride);
    sc.override_certificate = s.flag("override_certificate", sc.override_certificate);
    s.done();
  }
  if (root.has("analysis")) {
    Obj a(j.at("analysis"), "analysis");
    AnalysisConfig& ac = c.analysis;
    ac.fit_t0 = a.num("fit_t0", ac.fit_t0);
    ac.fit_t1 = a.num("fit_t1", ac.fit_t1);
    ac.fit_floor = a.num("fit_floor", ac.fit_floor);
    ac.tol_K = a.num("tol_K", ac.tol_K);
    ac.certify_samples = a.count("certify_samples", ac.certify_samples);
    ac.mu1_floor = a.num("mu1_floor", ac.mu1_floor);
    a.done();
  }
  if (root.has("output")) {
    Obj o(j.at("output"), "output");
    c.output.trajectory = o.str("trajectory", c.output.trajectory);
    c.output.report = o.str("report", c.output.report);
    c.output.snapshots = o.str("snapshots", c.output.snapshots);
    o.done();
  }
  root.done();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::malformed_spec, "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::malformed_spec, "config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const ProblemSpec& s) {
  const DomainGeometry& g = s.geometry;
  json j;
  j["geometry"] = {{"L1", g.L1}, {"L2", g.L2}, {"L3", g.L3}, {"a", g.a}, {"b", g.b}};
  j["weights"] = {{"mu1", to_json(s.weights.mu1)},
                  {"mu2", to_json(s.weights.mu2)},
                  {"M1", s.weights.M1},
                  {"M2", s.weights.M2},
                  {"beta", s.weights.beta}};
  j["delay"] = {{"tau", to_json(s.delay.tau)}, {"tau0", s.delay.tau0}, {"tau1", s.delay.tau1}, {"d", s.delay.d}};
  j["xi_bar"] = resolve_xi_bar(s);
  j["initial"] = {{"u0", to_json(s.initial.u0)},
                  {"u1", to_json(s.initial.u1)},
                  {"v0", to_json(s.initial.v0)},
                  {"v1", to_json(s.initial.v1)},
                  {"f0", to_json(s.initial.f0)}};
  return j;
}

json to_json(const RunConfig& c) {
  json j = to_json(c.spec);
  const SolverConfig& s = c.solver;
  j["solver"] = {{"h", s.h},
                 {"n_rho", s.n_rho},
                 {"cfl", s.cfl},
                 {"dt", s.dt ? json(*s.dt) : json(nullptr)},
                 {"backend", to_string(s.backend)},
                 {"T_final", s.T_final},
                 {"record_stride", s.record_stride},
                 {"snapshot_stride", s.snapshot_stride},
                 {"override_certificate", s.override_certificate}};
  const AnalysisConfig& a = c.analysis;
  j["analysis"] = {{"fit_t0", a.fit_t0},       {"fit_t1", a.fit_t1},
                   {"fit_floor", a.fit_floor}, {"tol_K", a.tol_K},
                   {"certify_samples", a.certify_samples}, {"mu1_floor", a.mu1_floor}};
  j["output"] = {{"trajectory", c.output.trajectory}, {"report", c.output.report}, {"snapshots", c.output.snapshots}};
  return j;
}

void set_path(json& j, const std::string& dotted, double value) {
  json* node = &j;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!node->is_object() || !node->contains(part)) {
      throw Error(ErrorCode::usage_error, "axis '" + dotted + "' not found in config");
    }
    node = &(*node)[part];
  }
  if (!node->is_number()) throw Error(ErrorCode::usage_error, "axis '" + dotted + "' is not a numeric leaf");
  *node = value;
}

}  // namespace transwave
