#include <benchmark/benchmark.h>

#include <random>

#include "partcheck/abstraction.hpp"
#include "partcheck/buchi.hpp"
#include "partcheck/identification.hpp"
#include "partcheck/ltl.hpp"
#include "partcheck/model_check.hpp"
#include "partcheck/rng.hpp"

using namespace partcheck;

namespace {

// Hand-made toggle with piecewise-linear ranges, as in the abstraction tests.
Device bench_toggle() {
  auto make_range = [](const std::string& reg) {
    RangeMap m;
    m.kind = FitKind::kPiecewiseLinear;
    ThresholdSet t;
    t.gene = reg;
    t.values = {0.0, 2.0, 4.0, 6.0, 10.0};
    m.thresholds = std::move(t);
    m.trapezoids = {{{1.6, 2.0}, {1.3, 1.8}},
                    {{1.3, 1.8}, {0.4, 0.9}},
                    {{0.4, 0.9}, {0.1, 0.4}},
                    {{0.1, 0.4}, {0.05, 0.3}}};
    return m;
  };
  Promoter pu{"pu", PromoterKind::kRegulated, "u", make_range("u")};
  Promoter pv{"pv", PromoterKind::kRegulated, "v", make_range("v")};
  return Device::assemble({{"u", 0.72, 0.0, 10.0}, {"v", 0.72, 0.0, 10.0}}, {pu, pv},
                          {{"u", "pv"}, {"v", "pu"}});
}

std::vector<Proposition> bench_props() {
  Proposition a, b;
  a.name = "pi1";
  a.c = Vec(2);
  a.c << -1.0, 2.0;
  b.name = "pi2";
  b.c = Vec(2);
  b.c << 2.0, -1.0;
  return {a, b};
}

void BM_FitPiecewiseLinear(benchmark::State& state) {
  std::mt19937_64 rng(7);
  ThresholdSet t;
  t.gene = "g";
  t.values = {0.0, 2.0, 4.0, 8.0};
  std::vector<RateSample> samples;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
    samples.push_back({uniform_in(rng, 0.0, 2.0), uniform_in(rng, 0.0, 8.0)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_piecewise_linear(samples, t));
  }
}
BENCHMARK(BM_FitPiecewiseLinear)->Arg(200)->Arg(2000);

void BM_PostPwl(benchmark::State& state) {
  Device dev = bench_toggle();
  auto regions = partition(dev, partition_axes_for(dev), bench_props());
  for (auto _ : state) {
    for (const auto& r : regions) benchmark::DoNotOptimize(post_pwl(r, dev));
  }
}
BENCHMARK(BM_PostPwl);

void BM_BuildQuotient(benchmark::State& state) {
  Device dev = bench_toggle();
  auto props = bench_props();
  auto regions = partition(dev, partition_axes_for(dev), props);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_quotient(dev, regions, props));
  }
}
BENCHMARK(BM_BuildQuotient);

void BM_ModelCheck(benchmark::State& state) {
  Device dev = bench_toggle();
  auto props = bench_props();
  auto regions = partition(dev, partition_axes_for(dev), props);
  Quotient q = build_quotient(dev, regions, props);
  const std::vector<std::string> atoms = {"pi1", "pi2"};
  ltl::FormulaPtr f = ltl::parse("F G pi1", atoms);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model_check(q, f));
  }
}
BENCHMARK(BM_ModelCheck);

void BM_ToBuchi(benchmark::State& state) {
  const std::vector<std::string> atoms = {"p1", "p2", "p3"};
  ltl::FormulaPtr f = ltl::parse("G (p1 -> (p2 U p3)) & F G p1", atoms);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltl::to_buchi(f));
  }
}
BENCHMARK(BM_ToBuchi);

}  // namespace
