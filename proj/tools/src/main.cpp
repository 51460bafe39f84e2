#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "config.hpp"
#include "report.hpp"
#include "svg.hpp"
#include "wazkit/version.hpp"

namespace fs = std::filesystem;
using namespace wazkit;
using namespace wazkit::cli;
using nlohmann::ordered_json;

namespace {

// Exit codes shared with the acceptance suite.
constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kViolations = 2;
constexpr int kUndeterminedOnly = 3;
constexpr int kBracketFailure = 4;
constexpr int kStabilityFailures = 5;
constexpr int kConfigError = 64;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> param_kv;
  std::optional<double> horizon;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment configuration (JSON)")->required();
  cmd->add_option("--param", args.param_kv, "override a model parameter, name=value (repeatable)");
  cmd->add_option("--horizon", args.horizon, "override the time horizon");
  cmd->add_option("--out", args.out_dir, "output directory");
}

CliOverrides to_overrides(const CommonArgs& args) {
  CliOverrides o;
  for (const std::string& kv : args.param_kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--param expects name=value, got '" + kv + "'");
    try {
      o.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--param value is not a number in '" + kv + "'");
    }
  }
  o.horizon = args.horizon;
  o.out_dir = args.out_dir;
  return o;
}

fs::path prepare_out_dir(const Experiment& exp) {
  const fs::path dir(exp.out_dir);
  fs::create_directories(dir);
  return dir;
}

int run_simulate(const Experiment& exp) {
  if (!exp.x0) throw ConfigError("simulate needs x0 (config key \"x0\" or --x0)");
  const fs::path dir = prepare_out_dir(exp);

  IntegrationResult res;
  int code = kOk;
  try {
    res = integrate_until_egress(exp.bundle.field, exp.bundle.region, *exp.x0, exp.t0, exp.integrator);
  } catch (const IntegrationError& e) {
    ordered_json j = report_envelope("simulate", exp);
    j["error"] = e.what();
    write_json((dir / "outcome.json").string(), j);
    std::cerr << "integration failed: " << e.what() << "\n";
    return kRuntimeFailure;
  }

  write_trajectory_csv((dir / "trajectory.csv").string(), res.trajectory);
  ordered_json j = report_envelope("simulate", exp);
  j["x0"] = *exp.x0;
  j["t0"] = exp.t0;
  j["outcome"] = outcome_json(res.outcome);
  ordered_json grazing = ordered_json::array();
  for (const GrazingEvent& g : res.trajectory.grazing())
    grazing.push_back({{"t", g.t}, {"face", g.face}, {"min_g", g.min_g}});
  j["grazing"] = grazing;
  j["samples"] = res.trajectory.samples().size();
  j["trajectory_csv"] = "trajectory.csv";
  write_json((dir / "outcome.json").string(), j);

  if (exp.svg)
    write_trajectory_svg((dir / "trajectory.svg").string(), res.trajectory, exp.bundle.region,
                         exp.svg_axes[0], exp.svg_axes[1]);
  return code;
}

int run_scan(const Experiment& exp) {
  const fs::path dir = prepare_out_dir(exp);
  const ScanReport report =
      scan_boundary(exp.bundle.field, exp.bundle.region, exp.scan, exp.scan_order, exp.scan_deriv_tol);

  ordered_json j = report_envelope("scan", exp);
  j["scan"] = scan_json(report);
  write_json((dir / "scan.json").string(), j);

  if (!report.violations.empty()) return kViolations;
  if (!report.undetermined.empty()) return kUndeterminedOnly;
  return kOk;
}

int run_find(const Experiment& exp) {
  if (!exp.has_gamma && exp.family.empty()) throw ConfigError("find needs a gamma curve or gamma_family");
  if (!exp.has_criteria) throw ConfigError("find needs omega criteria");
  const fs::path dir = prepare_out_dir(exp);
  ordered_json j = report_envelope("find", exp);

  auto emit_witness = [&](const BisectResult& res, const std::string& tag) {
    const std::string csv = tag.empty() ? "witness.csv" : "witness_" + tag + ".csv";
    write_trajectory_csv((dir / csv).string(), res.witness);
    std::string svg;
    if (exp.svg) {
      svg = tag.empty() ? "witness.svg" : "witness_" + tag + ".svg";
      write_trajectory_svg((dir / svg).string(), res.witness, exp.bundle.region, exp.svg_axes[0],
                           exp.svg_axes[1]);
    }
    return bisect_json(res, csv, svg);
  };

  if (!exp.family.empty()) {
    const auto entries = family_sweep(exp.bundle.field, exp.bundle.region, exp.family, exp.criteria,
                                      exp.integrator, exp.witness);
    ordered_json results = ordered_json::array();
    bool any_ok = false;
    for (const auto& e : entries) {
      ordered_json je;
      je["index"] = e.index;
      if (e.result) {
        je["result"] = emit_witness(*e.result, std::to_string(e.index));
        any_ok = true;
      } else {
        je["error"] = e.error;
      }
      results.push_back(je);
    }
    j["family"] = results;
    write_json((dir / "find.json").string(), j);
    return any_ok ? kOk : kBracketFailure;
  }

  try {
    const BisectResult res = bisect_gamma(exp.bundle.field, exp.bundle.region, exp.gamma, exp.criteria,
                                          exp.integrator, exp.witness);
    j["result"] = emit_witness(res, "");
    write_json((dir / "find.json").string(), j);
    return kOk;
  } catch (const BracketError& e) {
    j["bracket_error"] = {{"endpoint", e.endpoint}, {"message", e.what()}};
    write_json((dir / "find.json").string(), j);
    std::cerr << "bracket precondition failed: " << e.what() << "\n";
    return kBracketFailure;
  }
}

int run_stability(const Experiment& exp) {
  if (!exp.bundle.equilibrium) throw ConfigError("stability needs a model with an equilibrium");
  if (!exp.stability || exp.stability->samples == 0)
    throw ConfigError("stability needs a 'stability' section (radius_v, radius_u, samples)");
  const fs::path dir = prepare_out_dir(exp);

  const StabilityReport report = verify_uniform_stability(
      exp.bundle.field, *exp.bundle.equilibrium, exp.stability->radius_v, exp.stability->radius_u,
      exp.stability->t0_grid, exp.stability->samples, exp.integrator);

  ordered_json j = report_envelope("stability", exp);
  j["stability"] = stability_json(report);
  write_json((dir / "stability.json").string(), j);
  return report.passed() ? kOk : kStabilityFailures;
}

int run_models_list() {
  for (const auto& info : models::model_catalog()) {
    std::cout << info.name << " - " << info.description << "\n";
    std::cout << "  params:";
    if (info.params.empty()) std::cout << " (none)";
    for (const auto& [k, v] : info.params) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", v);
      std::cout << " " << k << "=" << buf;
    }
    std::cout << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wazkit: egress classification and non-stabilizability witnesses for ODE systems"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs sim_args, scan_args, find_args, stab_args;
  std::vector<double> x0_values;
  std::optional<double> t0_value;

  CLI::App* sim = app.add_subcommand("simulate", "integrate one trajectory until egress or horizon");
  add_common(sim, sim_args);
  sim->add_option("--x0", x0_values, "initial state components")->delimiter(',');
  sim->add_option("--t0", t0_value, "initial time (default 0)");

  CLI::App* scan = app.add_subcommand("scan", "classify boundary samples and certify strict egress");
  add_common(scan, scan_args);

  CLI::App* find = app.add_subcommand("find", "bisect the omega map along gamma and emit the witness");
  add_common(find, find_args);

  CLI::App* stab = app.add_subcommand("stability", "probe uniform stability of the equilibrium");
  add_common(stab, stab_args);

  CLI::App* modelsCmd = app.add_subcommand("models", "model catalog");
  CLI::App* list = modelsCmd->add_subcommand("list", "list catalog models and their parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return run_models_list();
    if (sim->parsed()) {
      CliOverrides o = to_overrides(sim_args);
      if (!x0_values.empty()) o.x0 = x0_values;
      o.t0 = t0_value;
      return run_simulate(load_experiment(sim_args.config_path, o));
    }
    if (scan->parsed()) return run_scan(load_experiment(scan_args.config_path, to_overrides(scan_args)));
    if (find->parsed()) return run_find(load_experiment(find_args.config_path, to_overrides(find_args)));
    if (stab->parsed())
      return run_stability(load_experiment(stab_args.config_path, to_overrides(stab_args)));
    std::cerr << "no subcommand\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SpecError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}
