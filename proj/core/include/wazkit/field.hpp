#pragma once

#include <map>
#include <string>
#include <vector>

#include "wazkit/expr.hpp"
#include "wazkit/types.hpp"

namespace wazkit {

/// Right-hand side of the governing ODE xdot = v(x, t), one parsed expression
/// per state dimension, over the shared symbol layout x1..xn, t, params.
struct FieldSpec {
  std::size_t dim = 0;
  std::vector<Expr> rhs;
  std::map<std::string, double> params;
  SymbolTable symbols;

  static FieldSpec make(std::size_t dim, const std::vector<std::string>& rhs_sources,
                        const std::map<std::string, double>& params);

  std::size_t t_slot() const { return dim; }

  /// Slot vector [x1..xn, t, params...] for expression evaluation.
  std::vector<double> slot_values(const StateVec& x, double t) const;
};

/// Reusable evaluator holding the slot buffer; one per integration.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const FieldSpec& field);
  void operator()(const StateVec& x, double t, StateVec& dxdt);
  std::span<const double> slots() const { return buffer_; }

 private:
  const FieldSpec* field_;
  std::vector<double> buffer_;
};

/// Result of lie_derivatives: g at p and its time derivatives d_1..d_K along
/// the solution through p.
struct LieChain {
  double value = 0.0;
  std::vector<double> derivs;

  double d(int k) const { return derivs.at(static_cast<std::size_t>(k) - 1); }
};

/// Exact derivatives of t -> g(x(t), t) at p, where x(t) solves the field's
/// ODE with x(p.time) = p.state. Computed by propagating an order-K Taylor
/// jet of the state through the field and composing with g.
LieChain lie_derivatives(const FieldSpec& field, const Expr& g, const ExtPoint& p, int K);

}  // namespace wazkit
