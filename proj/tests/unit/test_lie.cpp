#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wazkit/field.hpp"

using namespace wazkit;

TEST_CASE("shear flow tangency chain") {
  // xdot = 1, ydot = -x, g = 3 - y at (0, 3).
  // Hand derivation: gdot = x, gddot = xdot = 1, rest zero.
  const FieldSpec f = FieldSpec::make(2, {"1", "-x1"}, {});
  const Expr g = Expr::parse("3 - x2", f.symbols);
  const LieChain c = lie_derivatives(f, g, ExtPoint{{0.0, 3.0}, 0.0}, 4);
  CHECK(c.value == 0.0);
  CHECK(c.d(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.d(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.d(3) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(c.d(4) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("uncontrolled pendulum boundary chain") {
  // phidd = -cos(phi); g = phi.
  const FieldSpec f = FieldSpec::make(2, {"x2", "-cos(x1)"}, {});
  const Expr g = Expr::parse("x1", f.symbols);

  const LieChain moving = lie_derivatives(f, g, ExtPoint{{0.0, -1.0}, 0.0}, 2);
  CHECK(moving.d(1) == -1.0);

  const LieChain rest = lie_derivatives(f, g, ExtPoint{{0.0, 0.0}, 0.0}, 2);
  CHECK(rest.d(1) == 0.0);
  CHECK(rest.d(2) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("strip velocity at the lower face") {
  // a = -1: ydot(0,0) = -cos(0) = -1.
  const std::map<std::string, double> params{{"a", -1.0}};
  const FieldSpec f = FieldSpec::make(2, {"1", "a*cos(x2) + x1*sin(x2)"}, params);
  const Expr g = Expr::parse("x2", f.symbols);
  const LieChain c = lie_derivatives(f, g, ExtPoint{{0.0, 0.0}, 0.0}, 1);
  CHECK(c.d(1) == -1.0);
}

TEST_CASE("time-dependent boundary function") {
  // xdot = 0, g = t^2 - x1: derivatives of g along the flow are 2t, 2, 0...
  const FieldSpec f = FieldSpec::make(1, {"0"}, {});
  const Expr g = Expr::parse("t^2 - x1", f.symbols);
  const LieChain c = lie_derivatives(f, g, ExtPoint{{0.5}, 3.0}, 3);
  CHECK(c.value == doctest::Approx(8.5));
  CHECK(c.d(1) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(c.d(2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(c.d(3) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("forced oscillator high-order chain") {
  // xdot = y, ydot = -x with g = x: derivatives cycle x -> y -> -x -> -y.
  const FieldSpec f = FieldSpec::make(2, {"x2", "-x1"}, {});
  const Expr g = Expr::parse("x1", f.symbols);
  const LieChain c = lie_derivatives(f, g, ExtPoint{{0.3, 0.4}, 0.0}, 6);
  CHECK(c.d(1) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(c.d(2) == doctest::Approx(-0.3).epsilon(1e-14));
  CHECK(c.d(3) == doctest::Approx(-0.4).epsilon(1e-13));
  CHECK(c.d(4) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(c.d(5) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(c.d(6) == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("symbol tables must match") {
  const FieldSpec f = FieldSpec::make(1, {"x1"}, {});
  const SymbolTable other({"x1", "t", "extra"});
  const Expr g = Expr::parse("x1", other);
  CHECK_THROWS_AS(lie_derivatives(f, g, ExtPoint{{1.0}, 0.0}, 2), SpecError);
}

TEST_CASE("K must be positive") {
  const FieldSpec f = FieldSpec::make(1, {"x1"}, {});
  const Expr g = Expr::parse("x1", f.symbols);
  CHECK_THROWS_AS(lie_derivatives(f, g, ExtPoint{{1.0}, 0.0}, 0), ArgumentError);
}
