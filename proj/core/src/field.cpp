#include "wazkit/field.hpp"

namespace wazkit {

FieldSpec FieldSpec::make(std::size_t dim, const std::vector<std::string>& rhs_sources,
                          const std::map<std::string, double>& params) {
  if (dim == 0) throw SpecError("field dimension must be at least 1");
  if (rhs_sources.size() != dim)
    throw SpecError("field needs exactly one right-hand side per dimension");
  FieldSpec f;
  f.dim = dim;
  f.params = params;
  f.symbols = SymbolTable::state_time_params(dim, params);
  f.rhs.reserve(dim);
  for (const std::string& src : rhs_sources) f.rhs.push_back(Expr::parse(src, f.symbols));
  return f;
}

std::vector<double> FieldSpec::slot_values(const StateVec& x, double t) const {
  if (x.size() != dim) throw ArgumentError("state dimension mismatch");
  std::vector<double> v(symbols.size(), 0.0);
  for (std::size_t i = 0; i < dim; ++i) v[i] = x[i];
  v[dim] = t;
  std::size_t slot = dim + 1;
  for (const auto& [k, val] : params) v[slot++] = val;
  return v;
}

FieldEvaluator::FieldEvaluator(const FieldSpec& field) : field_(&field) {
  buffer_.assign(field.symbols.size(), 0.0);
  std::size_t slot = field.dim + 1;
  for (const auto& [k, val] : field.params) buffer_[slot++] = val;
}

void FieldEvaluator::operator()(const StateVec& x, double t, StateVec& dxdt) {
  for (std::size_t i = 0; i < field_->dim; ++i) buffer_[i] = x[i];
  buffer_[field_->dim] = t;
  dxdt.resize(field_->dim);
  for (std::size_t i = 0; i < field_->dim; ++i) dxdt[i] = field_->rhs[i].eval(buffer_);
}

LieChain lie_derivatives(const FieldSpec& field, const Expr& g, const ExtPoint& p, int K) {
  if (K < 1) throw ArgumentError("lie_derivatives requires K >= 1");
  if (p.state.size() != field.dim) throw ArgumentError("state dimension mismatch");
  if (!(g.symbols() == field.symbols))
    throw SpecError("boundary function and field use different symbol declarations");

  // Jets over the slot layout. State coefficients are filled order by order
  // through the Taylor recurrence (m+1) c_{m+1} = [dt^m] v(x(t), t): the
  // m-th coefficient of the right-hand side depends only on state
  // coefficients up to order m, which are already final.
  std::vector<Jet> slots;
  slots.reserve(field.symbols.size());
  for (std::size_t i = 0; i < field.dim; ++i) slots.push_back(Jet::constant(p.state[i], K));
  slots.push_back(Jet::variable(p.time, K));
  {
    std::size_t slot = field.dim + 1;
    for (const auto& [k, val] : field.params) {
      (void)k;
      slots.push_back(Jet::constant(val, K));
      ++slot;
    }
  }

  for (int m = 0; m < K; ++m) {
    std::vector<double> next(field.dim);
    for (std::size_t i = 0; i < field.dim; ++i) {
      const Jet v = field.rhs[i].eval_jet(slots);
      next[i] = v.coeff(m) / static_cast<double>(m + 1);
    }
    for (std::size_t i = 0; i < field.dim; ++i) slots[i].coeff(m + 1) = next[i];
  }

  const Jet gj = g.eval_jet(slots);
  LieChain chain;
  chain.value = gj.value();
  chain.derivs.resize(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) chain.derivs[static_cast<std::size_t>(k) - 1] = gj.derivative(k);
  return chain;
}

}  // namespace wazkit
