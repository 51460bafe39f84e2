#include "wazkit/types.hpp"

#include <cmath>

namespace wazkit {

EquilibriumSpec EquilibriumSpec::point(StateVec x) {
  EquilibriumSpec eq;
  eq.mask.assign(x.size(), true);
  eq.x0 = std::move(x);
  eq.validate();
  return eq;
}

EquilibriumSpec EquilibriumSpec::manifold(StateVec x, const std::vector<std::size_t>& unmasked) {
  EquilibriumSpec eq;
  eq.mask.assign(x.size(), true);
  eq.x0 = std::move(x);
  for (std::size_t i : unmasked) {
    if (i >= eq.mask.size()) throw ArgumentError("unmasked coordinate index out of range");
    eq.mask[i] = false;
  }
  eq.validate();
  return eq;
}

std::size_t EquilibriumSpec::masked_count() const {
  std::size_t n = 0;
  for (bool b : mask)
    if (b) ++n;
  return n;
}

void EquilibriumSpec::validate() const {
  if (x0.empty()) throw SpecError("equilibrium has dimension zero");
  if (mask.size() != x0.size()) throw SpecError("equilibrium mask length does not match dimension");
  if (masked_count() == 0) throw SpecError("equilibrium mask must keep at least one coordinate");
  if (!all_finite(x0)) throw SpecError("equilibrium coordinates must be finite");
}

double masked_distance(const StateVec& a, const EquilibriumSpec& eq) {
  if (a.size() != eq.x0.size()) throw ArgumentError("masked_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq.mask[i]) continue;
    const double d = a[i] - eq.x0[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool all_finite(const StateVec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace wazkit
