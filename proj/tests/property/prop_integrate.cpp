#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"

using namespace wazkit;
using testing::ZooDraw;
using testing::ZooSampler;

TEST_CASE("sigma additivity across restarts (semi-process axiom)") {
  ZooSampler zoo(918273u);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.event_tol = 1e-9;
  cfg.horizon = 40.0;

  int tested = 0;
  int attempts = 0;
  while (tested < 50 && attempts < 600) {
    ++attempts;
    const ZooDraw d = zoo.next();
    if (region_membership(ExtPoint{d.x0, 0.0}, d.bundle->region).where != Membership::Inside) continue;

    IntegrationResult full;
    try {
      full = integrate_until_egress(d.bundle->field, d.bundle->region, d.x0, 0.0, cfg);
    } catch (const IntegrationError&) {
      continue;
    }
    const auto* ex = std::get_if<Exited>(&full.outcome);
    if (ex == nullptr || ex->sigma < 0.05) continue;

    const double tau = zoo.uniform(0.2, 0.8) * ex->sigma;
    const StateVec x_tau = full.trajectory.state_at(tau);
    if (region_membership(ExtPoint{x_tau, tau}, d.bundle->region).where != Membership::Inside) continue;

    IntegrationResult rest;
    try {
      rest = integrate_until_egress(d.bundle->field, d.bundle->region, x_tau, tau, cfg);
    } catch (const IntegrationError&) {
      continue;
    }
    const auto* ex2 = std::get_if<Exited>(&rest.outcome);
    REQUIRE(ex2 != nullptr);
    INFO("model ", d.bundle->name, " sigma=", ex->sigma, " tau=", tau, " sigma2=", ex2->sigma);
    CHECK(std::abs(ex->sigma - (tau + ex2->sigma)) <= 10.0 * cfg.event_tol);
    CHECK(ex2->face == ex->face);
    ++tested;
  }
  CHECK(tested == 50);
}

TEST_CASE("exit points are on the boundary and not moving inward") {
  ZooSampler zoo(5150u);
  IntegratorConfig cfg;
  cfg.horizon = 40.0;
  int tested = 0;
  int attempts = 0;
  while (tested < 40 && attempts < 400) {
    ++attempts;
    const ZooDraw d = zoo.next();
    if (region_membership(ExtPoint{d.x0, 0.0}, d.bundle->region).where != Membership::Inside) continue;
    IntegrationResult run;
    try {
      run = integrate_until_egress(d.bundle->field, d.bundle->region, d.x0, 0.0, cfg);
    } catch (const IntegrationError&) {
      continue;
    }
    const auto* ex = std::get_if<Exited>(&run.outcome);
    if (ex == nullptr) continue;

    const auto m = region_membership(ex->exit, d.bundle->region);
    CHECK(m.where == Membership::OnBoundary);
    const LieChain chain =
        lie_derivatives(d.bundle->field, d.bundle->region.face(ex->face).g, ex->exit, 1);
    if (std::abs(chain.d(1)) > cfg.event_tol) CHECK(chain.d(1) <= 0.0);
    ++tested;
  }
  CHECK(tested == 40);
}

TEST_CASE("sigma converges under tolerance refinement") {
  // The a-posteriori estimate |sigma(tol) - sigma(tol/2)| shrinks as rel_tol
  // is halved, and the finest runs agree to below a nanosecond of model time.
  struct Case {
    const char* model;
    StateVec x0;
  };
  const Case cases[] = {
      {"strip", {0.0, 1.5707963267948966}},
      {"twocircle", {1.5, 2.0}},
      {"fig1", {-1.0, 1.0}},
  };
  for (const Case& c : cases) {
    const auto b = models::build_model(c.model, {});
    std::vector<double> sigmas;
    for (double rel = 1e-5; rel >= 1e-12; rel /= 2.0) {
      IntegratorConfig cfg = b.default_integrator;
      cfg.rel_tol = rel;
      cfg.abs_tol = rel * 1e-3;
      const auto run = integrate_until_egress(b.field, b.region, c.x0, 0.0, cfg);
      const auto* ex = std::get_if<Exited>(&run.outcome);
      REQUIRE(ex != nullptr);
      sigmas.push_back(ex->sigma);
    }
    double prev_est = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < sigmas.size(); ++k) {
      const double est = std::abs(sigmas[k] - sigmas[k + 1]);
      INFO(std::string(c.model), " k=", k, " est=", est);
      CHECK(est <= std::max(8.0 * prev_est, 1e-11));
      prev_est = std::max(est, 1e-13);
    }
    CHECK(std::abs(sigmas[sigmas.size() - 1] - sigmas[sigmas.size() - 2]) <= 1e-9);
  }
}
