#pragma once

#include <vector>

namespace wazkit {

/// Truncated Taylor jet along a curve: coefficients c[0..K] of
/// sum_k c_k * dt^k. Arithmetic follows truncated power-series algebra, so
/// propagating jets through an expression tree yields exact derivatives of
/// the composition, never finite differences.
///
/// Piecewise primitives (abs, min, max, clamp) select the branch that is
/// active for dt -> 0+; ties at the kink are broken lexicographically on the
/// coefficient chain, which matches the one-sided branch chosen by the first
/// nonvanishing derivative of the inner expression.
class Jet {
 public:
  Jet() = default;

  static Jet constant(double v, int order);
  /// The time-like variable: value v, unit first derivative.
  static Jet variable(double v, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& coeff(int k) { return c_[static_cast<std::size_t>(k)]; }
  double value() const { return c_[0]; }

  /// k-th derivative: k! * c_k.
  double derivative(int k) const;

  friend Jet operator-(const Jet& a);
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet jet_sin(const Jet& a);
  friend Jet jet_cos(const Jet& a);
  friend Jet jet_tan(const Jet& a);
  friend Jet jet_exp(const Jet& a);
  friend Jet jet_log(const Jet& a);
  friend Jet jet_sqrt(const Jet& a);
  friend Jet jet_abs(const Jet& a);
  friend Jet jet_pow(const Jet& base, const Jet& expo);
  friend Jet jet_min(const Jet& a, const Jet& b);
  friend Jet jet_max(const Jet& a, const Jet& b);

  /// -1, 0, +1: sign of the first nonvanishing coefficient (0 if all zero).
  /// This is the sign of a - b for dt -> 0+ when applied to the difference.
  friend int jet_lex_sign(const Jet& a);

 private:
  explicit Jet(std::size_t n) : c_(n, 0.0) {}
  std::vector<double> c_;
};

Jet jet_clamp(const Jet& v, const Jet& lo, const Jet& hi);
Jet jet_powi(const Jet& base, long long n);

}  // namespace wazkit
