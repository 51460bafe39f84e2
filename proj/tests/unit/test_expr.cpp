#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wazkit/expr.hpp"

using namespace wazkit;

namespace {
const SymbolTable kXT({"x1", "t"});
const SymbolTable kXY({"x1", "x2"});

double eval1(const char* src, double x1) {
  const Expr e = Expr::parse(src, kXT);
  const double v[2] = {x1, 0.0};
  return e.eval(v);
}
}  // namespace

TEST_CASE("basic evaluation") {
  const Expr e = Expr::parse("sin(x1) + 2*t", kXT);
  CHECK(e.evaluate({{"x1", 0.0}, {"t", 1.0}}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("parameters are plain symbols") {
  const SymbolTable sym({"x1", "x2", "a"});
  const Expr e = Expr::parse("a * cos(x2) + x1*sin(x2)", sym);
  const double v[3] = {2.0, 0.0, 3.0};
  CHECK(e.eval(v) == doctest::Approx(3.0));
}

TEST_CASE("syntax error carries the offset") {
  try {
    Expr::parse("x1 +", kXT);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
  }
}

TEST_CASE("undeclared identifier is rejected by name") {
  try {
    Expr::parse("x1 + bogus", kXT);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
}

TEST_CASE("clamp saturates") { CHECK(eval1("clamp(x1, -0.9, 0.9)", 5.0) == 0.9); }

TEST_CASE("cubic damping sample") { CHECK(eval1("-x1 - x1^3", 1.0) == -2.0); }

TEST_CASE("division by zero raises") {
  CHECK_THROWS_AS(eval1("1/x1", 0.0), EvalError);
}

TEST_CASE("log and sqrt domains") {
  CHECK_THROWS_AS(eval1("log(x1)", 0.0), EvalError);
  CHECK_THROWS_AS(eval1("sqrt(x1)", -1.0), EvalError);
  CHECK(eval1("sqrt(x1)", 4.0) == 2.0);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval1("-x1^2", 2.0) == -4.0);        // ^ binds tighter than unary -
  CHECK(eval1("2^-2", 0.0) == 0.25);         // unary sign allowed in exponents
  CHECK(eval1("2^3^2", 0.0) == 512.0);       // right associative
  CHECK(eval1("6/3/2", 0.0) == 1.0);         // left associative
  CHECK(eval1("1 - 2 - 3", 0.0) == -4.0);
  CHECK(eval1("(-2)^3", 0.0) == -8.0);
  CHECK(eval1("2*x1 + 1", 3.0) == 7.0);
}

TEST_CASE("pi is predefined") {
  CHECK(eval1("cos(pi)", 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(eval1("pi/2", 0.0) == doctest::Approx(1.5707963267948966));
}

TEST_CASE("pow domain rule") {
  CHECK(eval1("x1^0.5", 9.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(eval1("(-2)^0.5", 0.0), EvalError);
  CHECK(eval1("(-2)^3", 0.0) == -8.0);  // integer exponents allow any base
}

TEST_CASE("min max") {
  CHECK(eval1("min(x1, 2)", 5.0) == 2.0);
  CHECK(eval1("max(x1, 2)", 5.0) == 5.0);
}

TEST_CASE("evaluate requires full environment") {
  const Expr e = Expr::parse("x1 + t", kXT);
  CHECK_THROWS_AS(e.evaluate({{"x1", 1.0}}), SpecError);
}

TEST_CASE("whitespace insensitive") {
  CHECK(eval1("  1+ 2 *x1  ", 2.0) == 5.0);
}

TEST_CASE("reserved names cannot be declared") {
  CHECK_THROWS_AS(SymbolTable({"pi"}), SpecError);
  CHECK_THROWS_AS(SymbolTable({"sin"}), SpecError);
  CHECK_THROWS_AS(SymbolTable({"x", "x"}), SpecError);
}

TEST_CASE("print round-trips and is idempotent") {
  const char* sources[] = {
      "sin(x1) + 2*t",          "-x1 - x1^3",
      "clamp(x1, -0.9, 0.9)",   "x1^2^3 - (x1 + t)/(x1 - t)",
      "-(x1 + t)*cos(x1)",      "max(min(x1, t), -1)",
      "2^-x1",                  "x1/(t*t)/x1",
  };
  for (const char* src : sources) {
    const Expr e = Expr::parse(src, kXT);
    const std::string printed = e.print();
    const Expr e2 = Expr::parse(printed, kXT);
    CHECK(e2.print() == printed);
    for (double x : {0.3, 1.7}) {
      const double v[2] = {x, 0.5};
      CHECK(e.eval(v) == doctest::Approx(e2.eval(v)).epsilon(1e-15));
    }
  }
}

TEST_CASE("free slots") {
  const Expr e = Expr::parse("x2*x2 + 1", kXY);
  const auto slots = e.free_slots();
  REQUIRE(slots.size() == 1);
  CHECK(slots[0] == 1);
}

TEST_CASE("function arity is checked") {
  CHECK_THROWS_AS(Expr::parse("sin(x1, t)", kXT), ParseError);
  CHECK_THROWS_AS(Expr::parse("clamp(x1, 1)", kXT), ParseError);
  CHECK_THROWS_AS(Expr::parse("nosuch(x1)", kXT), ParseError);
}

TEST_CASE("empty input") { CHECK_THROWS_AS(Expr::parse("   ", kXT), ParseError); }
