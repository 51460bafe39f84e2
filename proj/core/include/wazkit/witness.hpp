#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wazkit/gamma.hpp"
#include "wazkit/integrate.hpp"

namespace wazkit {

struct ExitsThroughFaces {
  std::vector<std::string> faces;
};

struct ConvergesToEquilibrium {
  EquilibriumSpec eq;
  double eps_enter = 0.0;
  double eps_stay = 0.0;
};

/// The two fates that label a start point on Gamma. Class A is the
/// stay-or-converge alternative (or an exit through a first set of faces in
/// the annulus-style setting); class B is an exit through the other faces.
struct OmegaCriteria {
  std::variant<ConvergesToEquilibrium, ExitsThroughFaces> class_a;
  ExitsThroughFaces class_b;
  double horizon = 0.0;  // finite proxy for "never leaves"

  void validate() const;
  const EquilibriumSpec* equilibrium() const;
};

enum class OmegaClass { ClassA, ClassB, Unresolved };

const char* to_string(OmegaClass c);

struct OmegaLabel {
  OmegaClass cls = OmegaClass::Unresolved;
  EgressOutcome outcome;
};

/// Simulate from Gamma(s) and label the fate.
OmegaLabel omega_classify(const FieldSpec& field, const RegionSpec& region, const GammaCurve& curve,
                          double s, const OmegaCriteria& criteria, const IntegratorConfig& cfg);

struct WitnessOptions {
  double s_tol = 1e-9;
  /// Separation of the bracketing pair that triggers a re-bracketing restart
  /// during witness continuation. Each restart also re-centers the pair onto
  /// the separatrix, so a smaller width keeps the witness pinned tighter at
  /// the cost of more restarts.
  double shadow_width = 1e-5;
  /// Transversal bracket width reached by each restart's bisection.
  double shadow_refine = 1e-12;
  std::size_t max_restarts = 500;
};

struct BisectResult {
  double s_lo = 0.0;
  double s_hi = 1.0;
  std::size_t iterations = 0;

  /// The certified trajectory. On normal termination it is continued from
  /// the final bracket: the A/B endpoint trajectories are integrated in
  /// tandem and re-bracketed transversally whenever they separate by more
  /// than shadow_width, so every segment is a genuine trajectory and the
  /// assembled path stays pinned to the separatrix for the whole horizon.
  Trajectory witness;
  EgressOutcome witness_outcome;
  std::optional<double> min_distance_to_eq;

  bool early_unresolved = false;  // a bisection midpoint already survived
  std::size_t restarts = 0;       // continuation re-bracketing count
  double max_jump = 0.0;          // largest witness discontinuity introduced
};

/// Bisect the discontinuity of the Omega map on Gamma. Precondition
/// (checked): Omega(0) = ClassA and Omega(1) = ClassB.
BisectResult bisect_gamma(const FieldSpec& field, const RegionSpec& region, const GammaCurve& curve,
                          const OmegaCriteria& criteria, const IntegratorConfig& cfg,
                          const WitnessOptions& options = {});

struct StabilityFailure {
  StateVec x;
  double t0 = 0.0;
  double escape_time = 0.0;  // relative to t0; 0 when the run failed outright
  std::string cause;         // "escaped" or an integration failure message
};

struct StabilityReport {
  EquilibriumSpec eq;
  double radius_v = 0.0;
  double radius_u = 0.0;
  std::vector<double> t0_grid;
  std::size_t samples = 0;
  std::string sampler = "halton-ball";
  std::vector<StabilityFailure> failures;

  bool passed() const { return failures.empty(); }
};

/// Sample the masked V-ball around the equilibrium at each t0 and check that
/// no trajectory leaves the U-ball before the horizon. Evidence for uniform
/// stability, not a proof.
StabilityReport verify_uniform_stability(const FieldSpec& field, const EquilibriumSpec& eq,
                                         double radius_v, double radius_u,
                                         const std::vector<double>& t0_grid, std::size_t n_samples,
                                         const IntegratorConfig& cfg);

struct FamilyEntry {
  std::size_t index = 0;
  std::optional<BisectResult> result;
  std::string error;  // non-empty when the curve was inadmissible
};

/// One bisection per curve; inadmissible curves are reported, not fatal.
std::vector<FamilyEntry> family_sweep(const FieldSpec& field, const RegionSpec& region,
                                      const std::vector<GammaCurve>& curves, const OmegaCriteria& criteria,
                                      const IntegratorConfig& cfg, const WitnessOptions& options = {});

}  // namespace wazkit
