#include "wazkit/jet.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace wazkit {

namespace {
std::size_t checked_size(const Jet& a, const Jet& b) {
  // Internal invariant: all jets in one propagation share an order.
  const auto na = static_cast<std::size_t>(a.order()) + 1;
  const auto nb = static_cast<std::size_t>(b.order()) + 1;
  if (na != nb) throw std::logic_error("jet order mismatch");
  return na;
}
}  // namespace

Jet Jet::constant(double v, int order) {
  Jet j(static_cast<std::size_t>(order) + 1);
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(double v, int order) {
  Jet j(static_cast<std::size_t>(order) + 1);
  j.c_[0] = v;
  if (order >= 1) j.c_[1] = 1.0;
  return j;
}

double Jet::derivative(int k) const {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f * c_[static_cast<std::size_t>(k)];
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (double& x : r.c_) x = -x;
  return r;
}

Jet operator+(const Jet& a, const Jet& b) {
  const std::size_t n = checked_size(a, b);
  Jet r = a;
  for (std::size_t k = 0; k < n; ++k) r.c_[k] += b.c_[k];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  const std::size_t n = checked_size(a, b);
  Jet r = a;
  for (std::size_t k = 0; k < n; ++k) r.c_[k] -= b.c_[k];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  const std::size_t n = checked_size(a, b);
  Jet r(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
    r.c_[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const std::size_t n = checked_size(a, b);
  if (b.c_[0] == 0.0) throw std::domain_error("division by zero");
  Jet r(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = a.c_[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
    r.c_[k] = s / b.c_[0];
  }
  return r;
}

Jet jet_exp(const Jet& a) {
  const std::size_t n = static_cast<std::size_t>(a.order()) + 1;
  Jet r(n);
  r.c_[0] = std::exp(a.c_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c_[j] * r.c_[k - j];
    r.c_[k] = s / static_cast<double>(k);
  }
  return r;
}

Jet jet_log(const Jet& a) {
  const std::size_t n = static_cast<std::size_t>(a.order()) + 1;
  if (a.c_[0] <= 0.0) throw std::domain_error("log of a non-positive value");
  Jet r(n);
  r.c_[0] = std::log(a.c_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double s = static_cast<double>(k) * a.c_[k];
    for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * r.c_[j] * a.c_[k - j];
    r.c_[k] = s / (static_cast<double>(k) * a.c_[0]);
  }
  return r;
}

namespace {
void jet_sin_cos(const Jet& a, Jet* sj, Jet* cj) {
  const int order = a.order();
  Jet s = Jet::constant(std::sin(a.coeff(0)), order);
  Jet c = Jet::constant(std::cos(a.coeff(0)), order);
  for (int k = 1; k <= order; ++k) {
    double ss = 0.0, cs = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += j * a.coeff(j) * c.coeff(k - j);
      cs -= j * a.coeff(j) * s.coeff(k - j);
    }
    s.coeff(k) = ss / k;
    c.coeff(k) = cs / k;
  }
  if (sj) *sj = s;
  if (cj) *cj = c;
}
}  // namespace

Jet jet_sin(const Jet& a) {
  Jet s;
  jet_sin_cos(a, &s, nullptr);
  return s;
}

Jet jet_cos(const Jet& a) {
  Jet c;
  jet_sin_cos(a, nullptr, &c);
  return c;
}

Jet jet_tan(const Jet& a) {
  Jet s, c;
  jet_sin_cos(a, &s, &c);
  if (c.value() == 0.0) throw std::domain_error("tan at a pole");
  return s / c;
}

Jet jet_sqrt(const Jet& a) {
  const std::size_t n = static_cast<std::size_t>(a.order()) + 1;
  if (a.c_[0] < 0.0) throw std::domain_error("sqrt of a negative value");
  if (a.c_[0] == 0.0) {
    bool flat = true;
    for (double x : a.c_)
      if (x != 0.0) flat = false;
    if (flat) return Jet::constant(0.0, a.order());
    throw std::domain_error("sqrt is not differentiable at zero");
  }
  Jet r(n);
  r.c_[0] = std::sqrt(a.c_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double s = a.c_[k];
    for (std::size_t j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
    r.c_[k] = s / (2.0 * r.c_[0]);
  }
  return r;
}

int jet_lex_sign(const Jet& a) {
  for (double x : a.c_) {
    if (x > 0.0) return 1;
    if (x < 0.0) return -1;
  }
  return 0;
}

Jet jet_abs(const Jet& a) {
  const int s = jet_lex_sign(a);
  if (s >= 0) return a;
  return -a;
}

Jet jet_max(const Jet& a, const Jet& b) {
  checked_size(a, b);
  return jet_lex_sign(a - b) >= 0 ? a : b;
}

Jet jet_min(const Jet& a, const Jet& b) {
  checked_size(a, b);
  return jet_lex_sign(a - b) <= 0 ? a : b;
}

Jet jet_clamp(const Jet& v, const Jet& lo, const Jet& hi) {
  return jet_min(jet_max(v, lo), hi);
}

Jet jet_powi(const Jet& base, long long n) {
  const int order = base.order();
  if (n == 0) return Jet::constant(1.0, order);
  if (n < 0) return Jet::constant(1.0, order) / jet_powi(base, -n);
  Jet acc = Jet::constant(1.0, order);
  Jet b = base;
  long long e = n;
  while (e > 0) {
    if (e & 1) acc = acc * b;
    b = b * b;
    e >>= 1;
  }
  return acc;
}

Jet jet_pow(const Jet& base, const Jet& expo) {
  checked_size(base, expo);
  bool const_expo = true;
  for (int k = 1; k <= expo.order(); ++k)
    if (expo.coeff(k) != 0.0) const_expo = false;
  if (const_expo) {
    const double e = expo.value();
    if (e == std::floor(e) && std::abs(e) < 1e15)
      return jet_powi(base, static_cast<long long>(e));
  }
  if (base.value() <= 0.0)
    throw std::domain_error("pow with non-integer exponent requires a positive base");
  return jet_exp(expo * jet_log(base));
}

}  // namespace wazkit
