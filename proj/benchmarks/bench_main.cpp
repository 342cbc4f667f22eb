#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rmstperm/detail/group_stats.hpp"
#include "rmstperm/inference.hpp"
#include "rmstperm/rmst.hpp"
#include "rmstperm/rng.hpp"
#include "rmstperm/scenarios.hpp"
#include "rmstperm/theory.hpp"

namespace {

using namespace rmstperm;

// right-censored exponential/uniform group, sorted, always estimable at 10
void make_group(Rng& rng, int n, std::vector<double>& t,
                std::vector<std::uint8_t>& e) {
  for (;;) {
    t.resize(n);
    e.resize(n);
    std::vector<std::pair<double, std::uint8_t>> rows(n);
    for (auto& r : rows) {
      const double surv = -std::log(rng.uniform_pos()) / 0.2;
      const double cens = 25.0 * rng.uniform01();
      r = {std::min(surv, cens), static_cast<std::uint8_t>(surv <= cens)};
    }
    std::sort(rows.begin(), rows.end());
    for (int i = 0; i < n; ++i) {
      t[i] = rows[i].first;
      e[i] = rows[i].second;
    }
    if (rows.back().second || rows.back().first >= 10.0) return;
  }
}

Sample to_sample(const std::vector<double>& t,
                 const std::vector<std::uint8_t>& e, int group) {
  return Sample::from_arrays(t, e, group);
}

void BM_GroupStatistics(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  std::vector<double> t;
  std::vector<std::uint8_t> e;
  make_group(rng, n, t, e);
  detail::GroupWorkspace ws;
  ws.reserve(n);
  for (auto _ : state) {
    auto gs = detail::group_statistics(t, e, 10.0, 2 * n, ws);
    benchmark::DoNotOptimize(gs);
  }
}
BENCHMARK(BM_GroupStatistics)->Arg(20)->Arg(40)->Arg(160)->Arg(640);

void BM_KaplanMeier(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  std::vector<double> t;
  std::vector<std::uint8_t> e;
  make_group(rng, n, t, e);
  const auto sample = to_sample(t, e, 1);
  for (auto _ : state) {
    auto km = kaplan_meier(sample);
    benchmark::DoNotOptimize(km);
  }
}
BENCHMARK(BM_KaplanMeier)->Arg(20)->Arg(160)->Arg(640);

void BM_StudentizedPermTest(benchmark::State& state) {
  const int n_i = static_cast<int>(state.range(0));
  Rng rng(3);
  std::vector<double> t1, t2;
  std::vector<std::uint8_t> e1, e2;
  make_group(rng, n_i, t1, e1);
  make_group(rng, n_i, t2, e2);
  const auto s1 = to_sample(t1, e1, 1);
  const auto s2 = to_sample(t2, e2, 2);
  TestConfig config;
  config.n_perm = 1000;
  config.workers = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = ++seed;
    auto r = studentized_perm_test(s1, s2, TimeWindow(10.0), config);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * config.n_perm);
}
BENCHMARK(BM_StudentizedPermTest)->Arg(20)->Arg(80)->Arg(200)
    ->Unit(benchmark::kMillisecond);

void BM_TrueSigmaPerm(benchmark::State& state) {
  ScenarioSpec spec;
  spec.survival = SurvivalScenario::S5;
  spec.censoring = CensoringScenario::C1;
  spec.delta = 0.0;
  const auto cell = calibrate(spec);
  const auto m1 = theoretical_model(cell, 1);
  const auto m2 = theoretical_model(cell, 2);
  for (auto _ : state) {
    const double v = true_sigma2_perm(m1, m2, 0.6, TimeWindow(10.0));
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_TrueSigmaPerm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
