#pragma once

#include <optional>
#include <string>
#include <variant>

#include "wazkit/field.hpp"
#include "wazkit/region.hpp"
#include "wazkit/trajectory.hpp"
#include "wazkit/types.hpp"

namespace wazkit {

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.0;        // 0 = no explicit cap
  double event_tol = 1e-12;     // on |g_face| at the refined crossing
  double grazing_window = 1e-8;
  double horizon = 10.0;        // seconds past t0
  long max_steps = 10000000;

  void validate() const;
};

/// The trajectory left W through `face` at time t0 + sigma.
struct Exited {
  double sigma = 0.0;
  ExtPoint exit;
  std::string face;
};

/// The trajectory stayed in W for the whole horizon.
struct Survived {
  double horizon = 0.0;
};

/// The trajectory entered the eps_enter ball at t0 + entry_time and stayed
/// within eps_stay up to the horizon.
struct ConvergedToTarget {
  double entry_time = 0.0;
};

using EgressOutcome = std::variant<Exited, Survived, ConvergedToTarget>;

const char* outcome_kind(const EgressOutcome& o);

/// Convergence criterion for the proxy of "tends asymptotically to x0":
/// enter the eps_enter ball, then stay within eps_stay until the horizon.
struct ConvergenceCriterion {
  EquilibriumSpec eq;
  double eps_enter = 0.0;
  double eps_stay = 0.0;
};

struct IntegrationResult {
  Trajectory trajectory;
  EgressOutcome outcome;
};

/// Integrate from (x0, t0) until the trajectory leaves W, converges (when a
/// criterion is supplied), or reaches t0 + horizon. Starting on the boundary
/// returns sigma = 0 immediately.
IntegrationResult integrate_until_egress(const FieldSpec& field, const RegionSpec& region,
                                         const StateVec& x0, double t0, const IntegratorConfig& cfg,
                                         const std::optional<ConvergenceCriterion>& convergence = {});

/// Region-free integration to a fixed time. Used by oracles and probes.
Trajectory integrate_to(const FieldSpec& field, const StateVec& x0, double t0, double t1,
                        const IntegratorConfig& cfg);

}  // namespace wazkit
