#include <benchmark/benchmark.h>

#include <array>
#include <random>
#include <string>
#include <vector>

#include "stripsplit/distributions.hpp"
#include "stripsplit/f_tests.hpp"
#include "stripsplit/simulator.hpp"
#include "stripsplit/sums_of_squares.hpp"

using namespace stripsplit;

namespace {

BalancedLayout random_layout(const DesignDims& dims) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(100.0, 10.0);
  std::vector<double> values(static_cast<std::size_t>(dims.cells()));
  for (double& v : values) v = noise(rng);
  auto labels = [](const char* prefix, int n) {
    std::vector<std::string> out;
    for (int level = 1; level <= n; ++level) {
      out.push_back(prefix + std::to_string(level));
    }
    return out;
  };
  return BalancedLayout(
      dims,
      {labels("", dims.r), labels("A", dims.a), labels("B", dims.b),
       labels("C", dims.c)},
      values);
}

void full_table(benchmark::State& state, const DesignDims& dims) {
  const BalancedLayout layout = random_layout(dims);
  for (auto _ : state) {
    benchmark::DoNotOptimize(anova_table(layout));
  }
  state.SetItemsProcessed(state.iterations() * dims.cells());
}

void table_small(benchmark::State& state) {
  full_table(state, DesignDims(2, 4, 3, 3));
}
BENCHMARK(table_small);

void table_large(benchmark::State& state) {
  full_table(state, DesignDims(4, 5, 4, 3));
}
BENCHMARK(table_large);

void single_ss_kronecker(benchmark::State& state) {
  const BalancedLayout layout = random_layout(DesignDims(4, 5, 4, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ss_kronecker(layout, SourceId::ABC));
  }
}
BENCHMARK(single_ss_kronecker);

void tail_probability(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    x = x > 8.0 ? 0.5 : x + 0.37;
    benchmark::DoNotOptimize(f_upper_tail(x, 6.0, 24.0));
  }
}
BENCHMARK(tail_probability);

void plan_evaluation(benchmark::State& state) {
  const BalancedLayout layout = random_layout(DesignDims(2, 4, 3, 3));
  const AnovaTable table = anova_table(layout);
  const auto plan = f_test_plan(ModelVariant::parse("RRR"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(plan, table));
  }
}
BENCHMARK(plan_evaluation);

void one_replicate(benchmark::State& state) {
  SimSpec spec;
  spec.dims = DesignDims(2, 4, 3, 3);
  spec.model = ModelVariant::parse("RRR");
  for (VarianceComponent comp :
       {VarianceComponent::R, VarianceComponent::eA, VarianceComponent::eB,
        VarianceComponent::eAB, VarianceComponent::AB, VarianceComponent::eT}) {
    spec.sigmas[comp] = 1.0;
  }
  RandomStream stream(99, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_one(spec, stream));
  }
}
BENCHMARK(one_replicate);

}  // namespace

BENCHMARK_MAIN();
