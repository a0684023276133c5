#include "famfair/budgets.hpp"
#include "famfair/fairness.hpp"
#include "famfair/generators.hpp"
#include "famfair/oracles.hpp"
#include "famfair/protocols.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace famfair;

namespace {

Instance random_binary(std::mt19937_64& rng, int m, int n) {
  std::vector<std::vector<Agent>> groups(2);
  for (auto& group : groups) {
    for (int j = 0; j < n; ++j) {
      group.push_back(Agent{0, BinaryValuation{Bundle(rng() & Bundle::all(m).bits())}, ""});
    }
  }
  std::vector<std::string> labels;
  for (int g = 0; g < m; ++g) labels.push_back("g" + std::to_string(g + 1));
  return Instance(labels, std::move(groups));
}

void BM_BudgetTable(benchmark::State& state) {
  const int r_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    BudgetTable table(r_max);
    benchmark::DoNotOptimize(table.B(r_max, r_max / 3));
  }
}
BENCHMARK(BM_BudgetTable)->Arg(16)->Arg(32)->Arg(64);

void BM_Rwav2(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Instance inst = random_binary(rng, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const std::vector<Criterion> crit = {OneOfBestC{2}};
  for (auto _ : state) benchmark::DoNotOptimize(rwav2(inst, crit, 0).report.h);
}
BENCHMARK(BM_Rwav2)->Args({12, 8})->Args({32, 100})->Args({64, 1000});

void BM_MaxH(benchmark::State& state) {
  const Instance inst = generate(AllSubsets{2, 1, 2, static_cast<int>(state.range(0))});
  OracleOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(max_h(inst, OneOfBestC{2}, opts).best_h);
}
BENCHMARK(BM_MaxH)->Arg(4)->Arg(6)->Arg(8);

void BM_MmsShare(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int m = static_cast<int>(state.range(0));
  std::vector<Rational> values;
  for (int g = 0; g < m; ++g) values.emplace_back(static_cast<long>(rng() % 50));
  const AdditiveValuation v{values};
  for (auto _ : state) benchmark::DoNotOptimize(mms_share(v, 3, Bundle::all(m), 16));
}
BENCHMARK(BM_MmsShare)->Arg(8)->Arg(11)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
