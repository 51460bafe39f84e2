#pragma once

#include <cstddef>
#include <vector>

#include "wazkit/errors.hpp"

namespace wazkit {

/// Phase-space state. The dimension is fixed per model.
using StateVec = std::vector<double>;

/// A state together with its time coordinate: a point of the extended phase
/// space M x R.
struct ExtPoint {
  StateVec state;
  double time = 0.0;
};

/// Convergence target: a point equilibrium, or an invariant manifold encoded
/// as a coordinate split. Masked-true coordinates count toward convergence
/// distances; masked-false coordinates span the free factor.
struct EquilibriumSpec {
  StateVec x0;
  std::vector<bool> mask;

  /// Point equilibrium: every coordinate masked.
  static EquilibriumSpec point(StateVec x);

  /// Manifold case: coordinates listed in `unmasked` are free.
  static EquilibriumSpec manifold(StateVec x, const std::vector<std::size_t>& unmasked);

  std::size_t dim() const { return x0.size(); }
  std::size_t masked_count() const;
  void validate() const;
};

/// Euclidean distance over the masked coordinates of (a - eq.x0).
double masked_distance(const StateVec& a, const EquilibriumSpec& eq);

bool all_finite(const StateVec& v);

}  // namespace wazkit
