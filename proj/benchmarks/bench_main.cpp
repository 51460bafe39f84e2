#include <benchmark/benchmark.h>

#include "wazkit/egress.hpp"
#include "wazkit/integrate.hpp"
#include "wazkit/models.hpp"
#include "wazkit/witness.hpp"

using namespace wazkit;

namespace {

void BM_parse_rhs(benchmark::State& state) {
  const SymbolTable sym = SymbolTable::state_time_params(2, {{"a", -1.0}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(Expr::parse("a*cos(x2) + x1*sin(x2)", sym));
  }
}
BENCHMARK(BM_parse_rhs);

void BM_eval_strip_rhs(benchmark::State& state) {
  const auto b = models::build_model("strip", {});
  FieldEvaluator fe(b.field);
  StateVec x{0.3, 1.1}, dx;
  double t = 0.0;
  for (auto _ : state) {
    fe(x, t, dx);
    benchmark::DoNotOptimize(dx);
    t += 1e-6;
  }
}
BENCHMARK(BM_eval_strip_rhs);

void BM_eval_furuta_rhs(benchmark::State& state) {
  const auto b = models::build_model("furuta", {});
  FieldEvaluator fe(b.field);
  StateVec x{0.2, -0.1, 0.5, 0.3}, dx;
  for (auto _ : state) {
    fe(x, 0.0, dx);
    benchmark::DoNotOptimize(dx);
  }
}
BENCHMARK(BM_eval_furuta_rhs);

void BM_lie_chain_pendulum(benchmark::State& state) {
  const auto b = models::build_model("pendulum", {});
  const ExtPoint p{{0.0, -1.0}, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lie_derivatives(b.field, b.region.faces[0].g, p, 4));
  }
}
BENCHMARK(BM_lie_chain_pendulum);

void BM_classify_boundary_point(benchmark::State& state) {
  const auto b = models::build_model("furuta", {});
  const ExtPoint p{{1.5707963267948966, 1.0, 0.0, 0.5}, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_point(b.field, b.region, p));
  }
}
BENCHMARK(BM_classify_boundary_point);

void BM_integrate_strip_exit(benchmark::State& state) {
  const auto b = models::build_model("strip", {});
  IntegratorConfig cfg = b.default_integrator;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_until_egress(b.field, b.region, {0.0, 1.2}, 0.0, cfg));
  }
}
BENCHMARK(BM_integrate_strip_exit);

void BM_omega_classify_twocircle(benchmark::State& state) {
  const auto b = models::build_model("twocircle", {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(omega_classify(b.field, b.region, b.default_gamma, 0.3,
                                            b.default_criteria, b.default_integrator));
  }
}
BENCHMARK(BM_omega_classify_twocircle);

}  // namespace

BENCHMARK_MAIN();
