#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wazkit/egress.hpp"
#include "wazkit/field.hpp"
#include "wazkit/gamma.hpp"
#include "wazkit/region.hpp"
#include "wazkit/witness.hpp"

namespace wazkit {
namespace models {

struct StabilityDefaults {
  double radius_v = 0.0;
  double radius_u = 0.0;
  std::vector<double> t0_grid{0.0};
  std::size_t samples = 0;
};

/// A catalog system, ready to run: field, region, convergence target,
/// default curve and criteria, scan samplers, and analytic boundary checks.
struct ModelBundle {
  std::string name;
  std::string description;
  FieldSpec field;
  RegionSpec region;
  std::optional<EquilibriumSpec> equilibrium;
  GammaCurve default_gamma;
  OmegaCriteria default_criteria;
  IntegratorConfig default_integrator;
  WitnessOptions default_witness;
  std::vector<FaceSampler> default_scan;
  std::optional<StabilityDefaults> default_stability;
  std::map<std::string, double> params;            // resolved values
  std::map<std::string, std::string> controllers;  // resolved expression slots
};

struct ModelOverrides {
  std::map<std::string, double> params;
  /// Expression-slot overrides; available slots per model:
  ///   pendulum: u, v, f    furuta: u, inertia    wheeled: u
  std::map<std::string, std::string> controllers;
};

struct ModelInfo {
  std::string name;
  std::string description;
  std::map<std::string, double> params;
};

const std::vector<std::string>& model_names();
std::vector<ModelInfo> model_catalog();

ModelBundle build_model(const std::string& name, const ModelOverrides& overrides = {});

struct AnalyticCheck {
  std::string name;
  double value = 0.0;
  std::string condition;
  bool pass = false;
};

/// Per-model boundary sign identities and the closed-loop eigenvalue oracle,
/// evaluated through jets and difference quotients; no simulation involved.
std::vector<AnalyticCheck> run_analytic_checks(const ModelBundle& bundle);

}  // namespace models
}  // namespace wazkit
