#include "wazkit/models.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

namespace wazkit {
namespace models {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string wrap(const std::string& s) { return "(" + s + ")"; }

std::string resolved(const ModelOverrides& o, const std::string& slot, const std::string& fallback) {
  auto it = o.controllers.find(slot);
  return it == o.controllers.end() ? fallback : it->second;
}

std::map<std::string, double> merge_params(std::map<std::string, double> defaults,
                                           const std::map<std::string, double>& overrides) {
  for (const auto& [k, v] : overrides) {
    auto it = defaults.find(k);
    if (it == defaults.end()) throw SpecError("override of undeclared parameter '" + k + "'");
    it->second = v;
  }
  return defaults;
}

void check_controller_slots(const ModelOverrides& o, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : o.controllers) {
    bool ok = false;
    for (const char* a : allowed)
      if (k == a) ok = true;
    if (!ok) throw SpecError("model has no controller slot '" + k + "'");
  }
}

// --- small dense eigensolver (n <= 4) -------------------------------------
// Characteristic polynomial by Faddeev-LeVerrier, roots by Durand-Kerner.

std::vector<std::complex<double>> eigenvalues(const std::vector<double>& a, std::size_t n) {
  std::vector<double> m(n * n, 0.0), tmp(n * n);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  std::vector<double> coeff(n + 1, 0.0);
  coeff[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    // tmp = A * m
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += a[i * n + l] * m[l * n + j];
        tmp[i * n + j] = s;
      }
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += tmp[i * n + i];
    coeff[k] = -tr / static_cast<double>(k);
    m = tmp;
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] += coeff[k];
  }

  std::vector<std::complex<double>> x(n);
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> p(1.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p *= seed;
    x[i] = p;
  }
  auto poly = [&](std::complex<double> z) {
    std::complex<double> r(1.0, 0.0);
    for (std::size_t k = 1; k <= n; ++k) r = r * z + coeff[k];
    return r;
  };
  for (int it = 0; it < 500; ++it) {
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= x[i] - x[j];
      const std::complex<double> dx = poly(x[i]) / denom;
      x[i] -= dx;
      moved = std::max(moved, std::abs(dx));
    }
    if (moved < 1e-13) break;
  }
  return x;
}

/// Jacobian of the closed-loop field at (x0, t=0) restricted to the masked
/// coordinates, by central differences with step 1e-6.
std::vector<double> masked_jacobian(const FieldSpec& field, const EquilibriumSpec& eq,
                                    std::vector<std::size_t>& coords) {
  coords.clear();
  for (std::size_t i = 0; i < field.dim; ++i)
    if (eq.mask[i]) coords.push_back(i);
  const std::size_t n = coords.size();
  std::vector<double> jac(n * n, 0.0);
  FieldEvaluator f(field);
  StateVec fp, fm;
  const double h = 1e-6;
  for (std::size_t cj = 0; cj < n; ++cj) {
    StateVec xp = eq.x0, xm = eq.x0;
    xp[coords[cj]] += h;
    xm[coords[cj]] -= h;
    f(xp, 0.0, fp);
    f(xm, 0.0, fm);
    for (std::size_t ci = 0; ci < n; ++ci) jac[ci * n + cj] = (fp[coords[ci]] - fm[coords[ci]]) / (2.0 * h);
  }
  return jac;
}

double max_real_eigenvalue(const FieldSpec& field, const EquilibriumSpec& eq) {
  std::vector<std::size_t> coords;
  const std::vector<double> jac = masked_jacobian(field, eq, coords);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues(jac, coords.size())) worst = std::max(worst, ev.real());
  return worst;
}

// --- catalog ---------------------------------------------------------------

ModelBundle build_strip(const ModelOverrides& o) {
  check_controller_slots(o, {});
  ModelBundle b;
  b.name = "strip";
  b.description = "transverse strip crossing: xdot = 1, ydot = a*cos(y) + x*sin(y) on 0 < y < pi";
  b.params = merge_params({{"a", -1.0}}, o.params);
  b.field = FieldSpec::make(2, {"1", "a*cos(x2) + x1*sin(x2)"}, b.params);
  b.region = RegionSpec::make(b.field.symbols, {{"y_bottom", "x2"}, {"y_top", "pi - x2"}}, b.params);
  b.default_gamma = GammaCurve::segment({0.0, 0.0}, {0.0, kPi});
  b.default_criteria =
      OmegaCriteria{ExitsThroughFaces{{"y_bottom"}}, ExitsThroughFaces{{"y_top"}}, 30.0};
  b.default_integrator.horizon = 30.0;
  b.default_scan = {
      FaceSampler{"y_bottom", 1, -0.5, 0.5, {{0, -3.0, 3.0, 121}}, {0.0}},
      FaceSampler{"y_top", 1, kPi - 0.5, kPi + 0.5, {{0, -3.0, 3.0, 121}}, {0.0}},
  };
  return b;
}

ModelBundle build_twocircle(const ModelOverrides& o) {
  check_controller_slots(o, {});
  ModelBundle b;
  b.name = "twocircle";
  b.description = "sink/saddle pair in the annulus rho1 < x^2 + y^2 < rho2";
  b.params = merge_params({{"rho1", 0.25}, {"rho2", 25.0}}, o.params);
  b.field = FieldSpec::make(2, {"-x1 - x1^3", "-x2 + x2^2"}, b.params);
  b.region = RegionSpec::make(b.field.symbols,
                              {{"inner", "x1^2 + x2^2 - rho1"}, {"outer", "rho2 - x1^2 - x2^2"}}, b.params);
  b.default_gamma = GammaCurve::segment({1.5, 0.0}, {1.5, 3.0});
  b.default_criteria = OmegaCriteria{ExitsThroughFaces{{"inner"}}, ExitsThroughFaces{{"outer"}}, 50.0};
  b.default_integrator.horizon = 50.0;
  const double r1 = std::sqrt(b.params.at("rho1"));
  const double r2 = std::sqrt(b.params.at("rho2"));
  b.default_scan = {
      FaceSampler{"inner", 1, 0.0, 1.5 * r1, {{0, -0.9 * r1, 0.9 * r1, 91}}, {0.0}},
      FaceSampler{"inner", 1, -1.5 * r1, 0.0, {{0, -0.9 * r1, 0.9 * r1, 91}}, {0.0}},
      FaceSampler{"outer", 1, 0.0, 1.1 * r2, {{0, -0.98 * r2, 0.98 * r2, 99}}, {0.0}},
      FaceSampler{"outer", 1, -1.1 * r2, 0.0, {{0, -0.98 * r2, 0.98 * r2, 99}}, {0.0}},
  };
  return b;
}

ModelBundle build_pendulum(const ModelOverrides& o) {
  check_controller_slots(o, {"u", "v", "f"});
  ModelBundle b;
  b.name = "pendulum";
  b.description = "inverted pendulum over a support line, saturated PD torque holds phi = pi/2";
  b.params = merge_params({{"kp", 4.0}, {"kd", 2.0}}, o.params);
  b.controllers["u"] = resolved(o, "u", "0");
  b.controllers["v"] = resolved(o, "v", "clamp(cos(x1) - kp*(x1 - pi/2) - kd*x2, -0.9, 0.9)");
  b.controllers["f"] = resolved(o, "f", "0");
  const std::string u = wrap(b.controllers["u"]);
  const std::string v = wrap(b.controllers["v"]);
  const std::string f = wrap(b.controllers["f"]);
  b.field = FieldSpec::make(
      2, {"x2", u + "*sin(x1) - cos(x1) + " + v + " + " + f + "*sin(x1)"}, b.params);
  b.region = RegionSpec::make(b.field.symbols, {{"phi_0", "x1"}, {"phi_pi", "pi - x1"}}, b.params);
  b.equilibrium = EquilibriumSpec::point({kPi / 2.0, 0.0});
  b.default_gamma = GammaCurve::segment({kPi / 2.0, 0.0}, {0.0, -1.0});
  b.default_criteria = OmegaCriteria{ConvergesToEquilibrium{*b.equilibrium, 0.02, 0.2},
                                     ExitsThroughFaces{{"phi_0", "phi_pi"}}, 50.0};
  b.default_integrator.horizon = 50.0;
  b.default_scan = {
      FaceSampler{"phi_0", 0, -0.5, 0.5, {{1, -3.0, 3.0, 601}}, {0.0, 1.0, 5.0}},
      FaceSampler{"phi_pi", 0, kPi - 0.5, kPi + 0.5, {{1, -3.0, 3.0, 601}}, {0.0, 1.0, 5.0}},
  };
  b.default_stability = StabilityDefaults{0.05, 0.2, {0.0}, 200};
  return b;
}

ModelBundle build_furuta(const ModelOverrides& o) {
  check_controller_slots(o, {"u", "inertia"});
  ModelBundle b;
  b.name = "furuta";
  b.description = "Furuta pendulum, torque on the rotating base; state (phi, phidot, psi, psidot)";
  b.params = merge_params({{"I", 0.02},
                           {"m", 0.2},
                           {"M", 1.0},
                           {"l", 0.3},
                           {"L", 0.25},
                           {"g", 9.81},
                           {"k1", -10.0},
                           {"k2", -4.0},
                           {"k3", -1.0}},
                          o.params);
  // The base inertia term is kept exactly as the governing equations state
  // it (L, not L^2); override the slot to experiment with other forms.
  b.controllers["inertia"] = resolved(o, "inertia", "I + m*(L + l^2*sin(x1)^2)");
  b.controllers["u"] = resolved(o, "u", "-(k1*x1 + k2*x2 + k3*x4)");
  const std::string a11 = wrap(b.controllers["inertia"]);
  const std::string a12 = "(m*l*L*cos(x1))";
  const std::string a22 = "(m*l^2)";
  const std::string u = wrap(b.controllers["u"]);
  const std::string b1 =
      wrap(u + " - 0.5*m*l^2*x2*sin(2*x1)*x4 - (-(m*l*L*sin(x1)) + 0.5*m*l^2*sin(2*x1)*x4)*x2");
  const std::string b2 = wrap("m*g*l*sin(x1) + 0.5*m*l^2*sin(2*x1)*x4*x2");
  const std::string det = wrap(a11 + "*" + a22 + " - " + a12 + "^2");
  const std::string phidd = wrap(a11 + "*" + b2 + " - " + a12 + "*" + b1) + "/" + det;
  const std::string psidd = wrap(a22 + "*" + b1 + " - " + a12 + "*" + b2) + "/" + det;
  b.field = FieldSpec::make(4, {"x2", phidd, "x4", psidd}, b.params);
  b.region = RegionSpec::make(b.field.symbols,
                              {{"phi_neg", "x1 + pi/2"}, {"phi_pos", "pi/2 - x1"}}, b.params);
  b.equilibrium = EquilibriumSpec::manifold({0.0, 0.0, 0.0, 0.0}, {2});
  b.default_gamma = GammaCurve::segment({0.0, 0.0, 0.0, 0.0}, {kPi / 2.0, 1.0, 0.0, 0.0});
  b.default_criteria = OmegaCriteria{ConvergesToEquilibrium{*b.equilibrium, 0.02, 0.3},
                                     ExitsThroughFaces{{"phi_neg", "phi_pos"}}, 30.0};
  b.default_integrator.horizon = 30.0;
  b.default_scan = {
      FaceSampler{"phi_neg", 0, -kPi / 2 - 0.5, -kPi / 2 + 0.5,
                  {{1, -2.0, 2.0, 41}, {2, -3.0, 3.0, 5}, {3, -2.0, 2.0, 11}}, {0.0}},
      FaceSampler{"phi_pos", 0, kPi / 2 - 0.5, kPi / 2 + 0.5,
                  {{1, -2.0, 2.0, 41}, {2, -3.0, 3.0, 5}, {3, -2.0, 2.0, 11}}, {0.0}},
  };
  b.default_stability = StabilityDefaults{0.01, 0.3, {0.0}, 100};
  return b;
}

ModelBundle build_wheeled(const ModelOverrides& o) {
  check_controller_slots(o, {"u"});
  ModelBundle b;
  b.name = "wheeled";
  b.description = "wheeled inverted pendulum (disk rolls without slipping), |u| saturated below m*g*l";
  b.params = merge_params(
      {{"m", 0.2}, {"M", 1.0}, {"l", 0.3}, {"r", 0.1}, {"g", 9.81}, {"kp", 2.0}, {"kd", 1.0}, {"u_bias", 0.0}},
      o.params);
  b.controllers["u"] = resolved(o, "u", "clamp(-(kp*x1 + kd*x2) + u_bias, -0.9*m*g*l, 0.9*m*g*l)");
  const std::string a11 = "((2*M + m)*r^2)";
  const std::string a12 = "(m*r*l)";
  const std::string a22 = "(m*l^2)";
  const std::string u = wrap(b.controllers["u"]);
  const std::string phidd = wrap(a11 + "*m*g*l*sin(x1) - " + a12 + "^2*x2^2*sin(x1)*cos(x1) + " +
                                 wrap(a11 + " + " + a12 + "*cos(x1)") + "*" + u) +
                            "/" + wrap(a11 + "*" + a22 + " - " + a12 + "^2*cos(x1)");
  b.field = FieldSpec::make(2, {"x2", phidd}, b.params);
  b.region = RegionSpec::make(b.field.symbols,
                              {{"phi_neg", "x1 + pi/2"}, {"phi_pos", "pi/2 - x1"}}, b.params);
  b.equilibrium = EquilibriumSpec::point({0.0, 0.0});
  b.default_gamma = GammaCurve::segment({0.0, 0.0}, {kPi / 2.0, 1.0});
  b.default_criteria = OmegaCriteria{ConvergesToEquilibrium{*b.equilibrium, 0.02, 0.2},
                                     ExitsThroughFaces{{"phi_neg", "phi_pos"}}, 30.0};
  b.default_integrator.horizon = 30.0;
  b.default_scan = {
      FaceSampler{"phi_neg", 0, -kPi / 2 - 0.5, -kPi / 2 + 0.5, {{1, -3.0, 3.0, 301}}, {0.0}},
      FaceSampler{"phi_pos", 0, kPi / 2 - 0.5, kPi / 2 + 0.5, {{1, -3.0, 3.0, 301}}, {0.0}},
  };
  b.default_stability = StabilityDefaults{0.05, 0.2, {0.0}, 100};
  return b;
}

ModelBundle build_dcos(const ModelOverrides& o) {
  check_controller_slots(o, {});
  ModelBundle b;
  b.name = "dcos";
  b.description = "scalar flow xdot = -cos(x)*sgn(x); the sign switch is regularized on |x| <= sgn_eps";
  b.params = merge_params({{"sgn_eps", 1e-2}}, o.params);
  b.field = FieldSpec::make(1, {"-cos(x1)*clamp(x1/sgn_eps, -1, 1)"}, b.params);
  b.region = RegionSpec::make(b.field.symbols, {{"x_neg", "x1 + pi"}, {"x_pos", "pi - x1"}}, b.params);
  b.equilibrium = EquilibriumSpec::point({0.0});
  b.default_gamma = GammaCurve::segment({0.0}, {kPi});
  b.default_criteria = OmegaCriteria{ConvergesToEquilibrium{*b.equilibrium, 0.02, 0.1},
                                     ExitsThroughFaces{{"x_neg", "x_pos"}}, 40.0};
  b.default_integrator.horizon = 40.0;
  b.default_scan = {
      FaceSampler{"x_neg", 0, -kPi - 0.5, -kPi + 0.5, {}, {0.0}},
      FaceSampler{"x_pos", 0, kPi - 0.5, kPi + 0.5, {}, {0.0}},
  };
  b.default_stability = StabilityDefaults{0.05, 0.2, {0.0}, 50};
  return b;
}

ModelBundle build_fig1(const ModelOverrides& o) {
  check_controller_slots(o, {});
  ModelBundle b;
  b.name = "fig1";
  b.description = "shear flow xdot = 1, ydot = -x on 0 < y < 3; internally tangent to y = 3 at x = 0";
  b.params = merge_params({}, o.params);
  b.field = FieldSpec::make(2, {"1", "-x1"}, b.params);
  b.region = RegionSpec::make(b.field.symbols, {{"y_bottom", "x2"}, {"y_top", "3 - x2"}}, b.params);
  b.default_gamma = GammaCurve::segment({-1.0, 1.0}, {-1.0, 2.9});
  b.default_criteria = OmegaCriteria{ExitsThroughFaces{{"y_bottom"}}, ExitsThroughFaces{{"y_top"}}, 10.0};
  b.default_integrator.horizon = 10.0;
  b.default_scan = {
      FaceSampler{"y_bottom", 1, -0.5, 0.5, {{0, -2.0, 2.0, 401}}, {0.0}},
      FaceSampler{"y_top", 1, 2.5, 3.5, {{0, -2.0, 2.0, 401}}, {0.0}},
  };
  return b;
}

}  // namespace

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"strip", "twocircle", "pendulum", "furuta",
                                                 "wheeled", "dcos",     "fig1"};
  return names;
}

ModelBundle build_model(const std::string& name, const ModelOverrides& overrides) {
  if (name == "strip") return build_strip(overrides);
  if (name == "twocircle") return build_twocircle(overrides);
  if (name == "pendulum") return build_pendulum(overrides);
  if (name == "furuta") return build_furuta(overrides);
  if (name == "wheeled") return build_wheeled(overrides);
  if (name == "dcos") return build_dcos(overrides);
  if (name == "fig1") return build_fig1(overrides);
  throw SpecError("unknown model '" + name + "'");
}

std::vector<ModelInfo> model_catalog() {
  std::vector<ModelInfo> out;
  for (const std::string& n : model_names()) {
    const ModelBundle b = build_model(n, {});
    out.push_back(ModelInfo{b.name, b.description, b.params});
  }
  return out;
}

namespace {

AnalyticCheck lie_sign_check(const ModelBundle& b, const std::string& name, const std::string& face,
                             const StateVec& x, int k, double expected, bool negative) {
  const LieChain chain = lie_derivatives(b.field, b.region.face(face).g, ExtPoint{x, 0.0}, k);
  AnalyticCheck c;
  c.name = name;
  c.value = chain.d(k);
  c.condition = (negative ? "d" + std::to_string(k) + " < 0" : "d" + std::to_string(k) + " > 0") +
                ", |d - (" + num(expected) + ")| <= 1e-12";
  const bool sign_ok = negative ? c.value < 0.0 : c.value > 0.0;
  c.pass = sign_ok && std::abs(c.value - expected) <= 1e-12;
  return c;
}

AnalyticCheck hurwitz_check(const ModelBundle& b) {
  AnalyticCheck c;
  c.name = b.name + "_closed_loop_spectrum";
  c.condition = "max Re(eig) < 0 over masked coordinates";
  c.value = max_real_eigenvalue(b.field, *b.equilibrium);
  c.pass = c.value < 0.0;
  return c;
}

double eval_with(const FieldSpec& field, const Expr& e, const StateVec& x, double t,
                 const std::map<std::string, double>& param_subst) {
  std::vector<double> slots = field.slot_values(x, t);
  for (const auto& [k, v] : param_subst) {
    const auto slot = field.symbols.find(k);
    if (!slot) throw SpecError("no parameter '" + k + "'");
    slots[*slot] = v;
  }
  return e.eval(slots);
}

void pendulum_checks(const ModelBundle& b, std::vector<AnalyticCheck>& out) {
  const Expr v_expr = Expr::parse(b.controllers.at("v"), b.field.symbols);
  const double v00 = eval_with(b.field, v_expr, {0.0, 0.0}, 0.0, {});
  const double vpi = eval_with(b.field, v_expr, {kPi, 0.0}, 0.0, {});

  out.push_back(lie_sign_check(b, "phi0_transversal", "phi_0", {0.0, -1.0}, 1, -1.0, true));
  out.push_back(lie_sign_check(b, "phi0_tangency_d2", "phi_0", {0.0, 0.0}, 2, v00 - 1.0, true));
  out.push_back(lie_sign_check(b, "phipi_transversal", "phi_pi", {kPi, 1.0}, 1, -1.0, true));
  out.push_back(lie_sign_check(b, "phipi_tangency_d2", "phi_pi", {kPi, 0.0}, 2, -(1.0 + vpi), true));

  AnalyticCheck sat;
  sat.name = "v_boundary_margin";
  sat.condition = "|v(0,0)| < 1 and |v(pi,0)| < 1";
  sat.value = std::max(std::abs(v00), std::abs(vpi));
  sat.pass = sat.value < 1.0;
  out.push_back(sat);

  out.push_back(hurwitz_check(b));
}

void furuta_checks(const ModelBundle& b, std::vector<AnalyticCheck>& out) {
  const double g = b.params.at("g");
  const double l = b.params.at("l");

  // The acceleration at phi = +-pi/2, phidot = 0 must be +-g/l regardless of
  // the feedback gains and the base rate: the second governing equation
  // decouples there.
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> gain(-20.0, 20.0);
  std::uniform_real_distribution<double> rate(-3.0, 3.0);
  double worst_pos = 0.0, worst_neg = 0.0;
  for (int i = 0; i < 10; ++i) {
    const std::map<std::string, double> subst = {
        {"k1", gain(rng)}, {"k2", gain(rng)}, {"k3", gain(rng)}};
    const double psid = rate(rng);
    const double psi = rate(rng);
    const double up = eval_with(b.field, b.field.rhs[1], {kPi / 2.0, 0.0, psi, psid}, 0.0, subst);
    const double dn = eval_with(b.field, b.field.rhs[1], {-kPi / 2.0, 0.0, psi, psid}, 0.0, subst);
    worst_pos = std::max(worst_pos, std::abs(up - g / l));
    worst_neg = std::max(worst_neg, std::abs(dn + g / l));
  }
  AnalyticCheck up;
  up.name = "phi_pos_acceleration_identity";
  up.condition = "|phidd - g/l| <= 1e-9 at (pi/2, 0), any gains and psidot";
  up.value = worst_pos;
  up.pass = worst_pos <= 1e-9;
  out.push_back(up);

  AnalyticCheck dn;
  dn.name = "phi_neg_acceleration_identity";
  dn.condition = "|phidd + g/l| <= 1e-9 at (-pi/2, 0), any gains and psidot";
  dn.value = worst_neg;
  dn.pass = worst_neg <= 1e-9;
  out.push_back(dn);

  // Mass-matrix determinant positive across the region (grid evidence).
  const Expr det = Expr::parse("(" + b.controllers.at("inertia") + ")*(m*l^2) - (m*l*L*cos(x1))^2",
                               b.field.symbols);
  double min_det = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 80; ++i) {
    const double phi = grid_point(-kPi / 2.0, kPi / 2.0, static_cast<std::size_t>(i), 81);
    min_det = std::min(min_det, eval_with(b.field, det, {phi, 0.0, 0.0, 0.0}, 0.0, {}));
  }
  AnalyticCheck dc;
  dc.name = "mass_matrix_det_positive";
  dc.condition = "min det > 0 on phi in [-pi/2, pi/2]";
  dc.value = min_det;
  dc.pass = min_det > 0.0;
  out.push_back(dc);

  out.push_back(hurwitz_check(b));
}

void wheeled_checks(const ModelBundle& b, std::vector<AnalyticCheck>& out) {
  const double m = b.params.at("m");
  const double g = b.params.at("g");
  const double l = b.params.at("l");
  const double mgl = m * g * l;
  const double a22 = m * l * l;

  // Force the torque to its saturation extremes through the bias term.
  for (const double sat : {-0.9 * mgl, 0.9 * mgl}) {
    const std::map<std::string, double> subst = {{"u_bias", sat > 0 ? 1e9 : -1e9}};
    const double up = eval_with(b.field, b.field.rhs[1], {kPi / 2.0, 0.0}, 0.0, subst);
    const double dn = eval_with(b.field, b.field.rhs[1], {-kPi / 2.0, 0.0}, 0.0, subst);
    AnalyticCheck cu;
    cu.name = std::string("ddphi_pos_saturation_") + (sat > 0 ? "high" : "low");
    cu.condition = "phidd = (m*g*l + u)/a22 > 0 at (pi/2, 0)";
    cu.value = up;
    cu.pass = up > 0.0 && std::abs(up - (mgl + sat) / a22) <= 1e-9;
    out.push_back(cu);
    AnalyticCheck cd;
    cd.name = std::string("ddphi_neg_saturation_") + (sat > 0 ? "high" : "low");
    cd.condition = "phidd = (u - m*g*l)/a22 < 0 at (-pi/2, 0)";
    cd.value = dn;
    cd.pass = dn < 0.0 && std::abs(dn - (sat - mgl) / a22) <= 1e-9;
    out.push_back(cd);
  }

  out.push_back(hurwitz_check(b));
}

}  // namespace

std::vector<AnalyticCheck> run_analytic_checks(const ModelBundle& b) {
  std::vector<AnalyticCheck> out;
  if (b.name == "pendulum") {
    pendulum_checks(b, out);
  } else if (b.name == "furuta") {
    furuta_checks(b, out);
  } else if (b.name == "wheeled") {
    wheeled_checks(b, out);
  } else if (b.name == "fig1") {
    // The documented pathology: d1 = 0, d2 = +1 at (0, 3).
    const LieChain chain = lie_derivatives(b.field, b.region.face("y_top").g, ExtPoint{{0.0, 3.0}, 0.0}, 2);
    AnalyticCheck c;
    c.name = "top_face_internal_tangency";
    c.condition = "d1 = 0 and d2 = 1 at (0, 3)";
    c.value = chain.d(2);
    c.pass = std::abs(chain.d(1)) <= 1e-12 && std::abs(chain.d(2) - 1.0) <= 1e-12;
    out.push_back(c);
  }
  return out;
}

}  // namespace models
}  // namespace wazkit
