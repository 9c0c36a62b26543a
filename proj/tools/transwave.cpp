// transwave: simulate, certify, sweep, compare and convergence front end.
//
// Exit codes: 0 success, 1 usage or malformed config, 2 certificate failure
// without override, 3 numerical instability.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "transwave/config.hpp"
#include "transwave/error.hpp"
#include "transwave/harness.hpp"

namespace fs = std::filesystem;
using namespace transwave;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  bool override_certificate = false;
  std::string backend;
  std::size_t levels = 4;
  std::string axis;
  std::string values;
};

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::hypothesis_violation: return 2;
    case ErrorCode::instability: return 3;
    default: return 1;
  }
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  std::ofstream os(p);
  if (!os) throw Error(ErrorCode::usage_error, "cannot write " + p.string());
  os << j.dump(2) << '\n';
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::usage_error, "cannot create output directory " + dir);
  return p;
}

RunConfig load(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (!o.backend.empty()) cfg.solver.backend = parse_backend(o.backend);
  if (o.override_certificate) cfg.solver.override_certificate = true;
  return cfg;
}

int cmd_certify(const Options& o) {
  const RunConfig cfg = load(o);
  const Certificate cert = certify_config(cfg);
  const nlohmann::json j = to_json(cert);
  std::cout << j.dump(2) << '\n';
  if (o.out != ".") write_json(prepare_out(o.out) / "certificate.json", j);
  return cert.passed() ? 0 : 2;
}

int cmd_simulate(const Options& o) {
  const RunConfig cfg = load(o);
  const fs::path out = prepare_out(o.out);
  const Certificate cert = certify_config(cfg);
  if (!cert.passed() && !cfg.solver.override_certificate) {
    write_json(out / cfg.output.report, {{"config", to_json(cfg)}, {"certificate", to_json(cert)}});
    std::cerr << "certificate failed; pass --override-certificate to run anyway\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const SimulationResult res = simulate(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    std::ofstream os(out / cfg.output.trajectory);
    write_trajectory_csv(os, res.trajectory.records);
  }
  if (!res.trajectory.snapshots.empty()) {
    const fs::path dir = prepare_out((out / cfg.output.snapshots).string());
    for (const auto& snap : res.trajectory.snapshots) {
      std::ostringstream name;
      name << "snapshot_t" << std::fixed << std::setprecision(6) << snap.t << ".csv";
      std::ofstream os(dir / name.str());
      write_snapshot_csv(os, snap, res.trajectory.grids.space);
    }
  }
  write_json(out / cfg.output.report, to_json(res.report));

  const RunReport& r = res.report;
  std::cout << "steps " << r.steps << ", dt " << r.dt << ", kernels " << r.kernels << '\n';
  if (r.fit) std::cout << "alpha_hat " << r.fit->alpha_hat << " (r^2 " << r.fit->r_squared << ")\n";
  if (r.prediction) std::cout << "alpha_pred " << r.prediction->alpha_pred << '\n';
  std::cerr << "wall time " << wall << " s\n";
  return 0;
}

int cmd_sweep(const Options& o) {
  if (o.axis.empty() || o.values.empty()) throw Error(ErrorCode::usage_error, "sweep needs --axis and --values");
  std::ifstream in(o.config);
  if (!in) throw Error(ErrorCode::malformed_spec, "cannot open config '" + o.config + "'");
  nlohmann::json base;
  try {
    in >> base;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_spec, e.what());
  }
  parse_config(base);

  std::vector<double> values;
  std::stringstream ss(o.values);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::usage_error, "bad value '" + item + "' in --values");
    }
  }
  const auto rows = sweep(base, o.axis, values, o.override_certificate);
  const fs::path out = prepare_out(o.out);
  std::ofstream os(out / "sweep.csv");
  write_sweep_csv(os, rows);
  write_sweep_csv(std::cout, rows);
  return 0;
}

int cmd_compare(const Options& o) {
  const RunConfig cfg = load(o);
  const CompareReport r = compare_backends(cfg);
  const nlohmann::json j = to_json(r);
  std::cout << j.dump(2) << '\n';
  if (o.out != ".") write_json(prepare_out(o.out) / "compare.json", j);
  return 0;
}

int cmd_convergence(const Options& o) {
  const RunConfig cfg = load(o);
  const ConvergenceReport r = convergence_study(cfg, o.levels);
  const nlohmann::json j = to_json(r);
  std::cout << j.dump(2) << '\n';
  if (o.out != ".") write_json(prepare_out(o.out) / "convergence.json", j);
  if (!r.estimate.defined) std::cerr << "observed order undefined\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed wave transmission simulator"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_flag("--override-certificate", o.override_certificate, "run even if a hypothesis fails");
    sub->add_option("--backend", o.backend, "augmented or history");
  };

  auto* simulate = app.add_subcommand("simulate", "run one configuration");
  common(simulate);
  auto* certify = app.add_subcommand("certify", "check every hypothesis");
  common(certify);
  auto* sweep = app.add_subcommand("sweep", "vary one numeric leaf of the config");
  common(sweep);
  sweep->add_option("--axis", o.axis, "dotted path, e.g. weights.beta")->required();
  sweep->add_option("--values", o.values, "comma separated values")->required();
  auto* compare = app.add_subcommand("compare", "augmented against history backend");
  common(compare);
  auto* convergence = app.add_subcommand("convergence", "observed order under refinement");
  common(convergence);
  convergence->add_option("--levels", o.levels, "number of levels (>= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*certify) return cmd_certify(o);
    if (*sweep) return cmd_sweep(o);
    if (*compare) return cmd_compare(o);
    if (*convergence) return cmd_convergence(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
