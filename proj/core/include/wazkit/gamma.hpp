#pragma once

#include <variant>
#include <vector>

#include "wazkit/expr.hpp"
#include "wazkit/types.hpp"

namespace wazkit {

/// A continuous path s in [0,1] -> W_0 (the t = 0 section). Segment and
/// polyline curves return their declared endpoints exactly at s = 0 and
/// s = 1.
class GammaCurve {
 public:
  static GammaCurve segment(StateVec a, StateVec b);
  static GammaCurve polyline(std::vector<StateVec> vertices);
  /// One expression per coordinate in the single symbol "s".
  static GammaCurve parametric(std::vector<std::string> coord_sources);

  std::size_t dim() const;

  friend ExtPoint gamma_eval(const GammaCurve& curve, double s);

 private:
  struct Segment {
    StateVec a, b;
  };
  struct Polyline {
    std::vector<StateVec> vertices;
  };
  struct Parametric {
    std::vector<Expr> coords;
  };
  std::variant<Segment, Polyline, Parametric> data_;
};

/// Evaluate the curve; the time component is always 0.
ExtPoint gamma_eval(const GammaCurve& curve, double s);

}  // namespace wazkit
