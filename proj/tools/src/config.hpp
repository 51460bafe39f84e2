#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wazkit/models.hpp"

namespace wazkit {
namespace cli {

/// A configuration problem; maps to exit code 64.
struct ConfigError : Error {
  using Error::Error;
};

struct CliOverrides {
  std::map<std::string, double> params;
  std::optional<double> horizon;
  std::optional<std::string> out_dir;
  std::optional<std::vector<double>> x0;
  std::optional<double> t0;
};

/// A fully resolved experiment: catalog defaults, then the config file, then
/// command-line overrides.
struct Experiment {
  models::ModelBundle bundle;
  IntegratorConfig integrator;
  OmegaCriteria criteria;
  bool has_criteria = false;
  GammaCurve gamma;
  bool has_gamma = false;
  std::vector<GammaCurve> family;
  std::vector<FaceSampler> scan;
  int scan_order = 4;
  double scan_deriv_tol = 1e-9;
  std::optional<models::StabilityDefaults> stability;
  WitnessOptions witness;
  std::optional<StateVec> x0;
  double t0 = 0.0;
  std::string out_dir = "out";
  bool svg = true;
  std::vector<int> svg_axes;  // slot indices; -1 encodes the time axis
  nlohmann::ordered_json resolved;
};

Experiment load_experiment(const std::string& config_path, const CliOverrides& cli);

}  // namespace cli
}  // namespace wazkit
