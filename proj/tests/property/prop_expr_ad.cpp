#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "support/oracles.hpp"

using namespace wazkit;
using testing::ExprGen;
using testing::FdResult;

TEST_CASE("lie derivatives match finite differences of integrated flows") {
  ExprGen gen(20260809u);
  const std::vector<std::string> vars = {"x1", "x2", "t"};
  int tested = 0;
  int attempts = 0;
  while (tested < 200 && attempts < 2000) {
    ++attempts;
    FieldSpec field;
    Expr g;
    StateVec x0 = {gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0)};
    const double t0 = gen.uniform(0.0, 1.0);
    LieChain chain;
    try {
      field = FieldSpec::make(2, {gen.expr(vars, 3), gen.expr(vars, 3)}, {});
      g = Expr::parse(gen.expr(vars, 3), field.symbols);
      chain = lie_derivatives(field, g, ExtPoint{x0, t0}, 2);
    } catch (const Error&) {
      continue;
    }
    // Keep magnitudes in a range where the stencil constants stay tame.
    if (!std::isfinite(chain.d(1)) || !std::isfinite(chain.d(2))) continue;
    if (std::abs(chain.d(1)) > 1e3 || std::abs(chain.d(2)) > 1e3) continue;

    const FdResult fd = testing::flow_differences(field, g, x0, t0, 4e-3);
    const double err1 = std::abs(fd.d1 - chain.d(1)) / std::max(1.0, std::abs(chain.d(1)));
    const double err2 = std::abs(fd.d2 - chain.d(2)) / std::max(1.0, std::abs(chain.d(2)));
    INFO("attempt ", attempts, " g=", g.print(), " d1=", chain.d(1), " fd1=", fd.d1, " d2=", chain.d(2),
         " fd2=", fd.d2);
    CHECK(err1 <= 1e-6);
    CHECK(err2 <= 1e-4);
    ++tested;
  }
  CHECK(tested == 200);
}

TEST_CASE("jet propagation satisfies the Leibniz rule") {
  ExprGen gen(77u);
  const std::vector<std::string> vars = {"x1", "x2", "t"};
  int tested = 0;
  while (tested < 100) {
    FieldSpec field;
    Expr g, h, product;
    StateVec x0 = {gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0)};
    try {
      field = FieldSpec::make(2, {gen.expr(vars, 2), gen.expr(vars, 2)}, {});
      const std::string gs = gen.expr(vars, 2);
      const std::string hs = gen.expr(vars, 2);
      g = Expr::parse(gs, field.symbols);
      h = Expr::parse(hs, field.symbols);
      product = Expr::parse("(" + gs + ")*(" + hs + ")", field.symbols);
    } catch (const Error&) {
      continue;
    }
    const ExtPoint p{x0, 0.3};
    const LieChain cg = lie_derivatives(field, g, p, 1);
    const LieChain ch = lie_derivatives(field, h, p, 1);
    const LieChain cp = lie_derivatives(field, product, p, 1);
    const double expected = cg.value * ch.d(1) + ch.value * cg.d(1);
    if (!std::isfinite(expected) || std::abs(expected) > 1e6) continue;
    CHECK(cp.d(1) == doctest::Approx(expected).epsilon(1e-12));
    ++tested;
  }
}

TEST_CASE("arbitrary input never crashes the parser") {
  std::mt19937 rng(99u);
  const std::string charset = "x12t +-*/^()., sincoet\tpiqzQ_#";
  std::uniform_int_distribution<std::size_t> len(0, 24);
  std::uniform_int_distribution<std::size_t> pick(0, charset.size() - 1);
  const SymbolTable sym({"x1", "x2", "t"});
  int parsed = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string src;
    const std::size_t n = len(rng);
    for (std::size_t k = 0; k < n; ++k) src += charset[pick(rng)];
    try {
      const Expr e = Expr::parse(src, sym);
      ++parsed;
      const double v[3] = {0.5, -0.25, 1.0};
      try {
        (void)e.eval(v);
      } catch (const EvalError&) {
      }
    } catch (const ParseError&) {
    }
  }
  CHECK(parsed > 0);  // some garbage happens to be well-formed
}

TEST_CASE("parse of the printed form is idempotent") {
  ExprGen gen(4242u);
  const SymbolTable sym({"x1", "x2", "t"});
  const std::vector<std::string> vars = {"x1", "x2", "t"};
  for (int i = 0; i < 500; ++i) {
    const std::string src = gen.expr(vars, 3);
    const Expr e = Expr::parse(src, sym);
    const std::string once = e.print();
    const Expr e2 = Expr::parse(once, sym);
    CHECK(e2.print() == once);
  }
}
