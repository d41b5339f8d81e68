#include <benchmark/benchmark.h>

#include <vector>

#include "ampgdf/amp.hpp"
#include "ampgdf/data.hpp"
#include "ampgdf/estimators.hpp"
#include "ampgdf/penalty.hpp"
#include "ampgdf/replica.hpp"

using namespace ampgdf;

namespace {

PenaltySpec spec_for(int family) {
  switch (family) {
    case 0:
      return PenaltySpec::l1(1.0);
    case 1:
      return PenaltySpec::scad(1.5, 3.7);
    default:
      return PenaltySpec::mcp(1.5, 3.7);
  }
}

}  // namespace

static void BM_Prox(benchmark::State& state) {
  const PenaltySpec spec = spec_for(static_cast<int>(state.range(0)));
  std::vector<double> fields(1024);
  for (std::size_t i = 0; i < fields.size(); ++i) fields[i] = -8.0 + 16.0 * static_cast<double>(i) / 1023.0;
  for (auto _ : state) {
    double acc = 0.0;
    for (double w : fields) acc += prox(w, 1.2, spec).theta_hat;
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fields.size()));
}
BENCHMARK(BM_Prox)->Arg(0)->Arg(1)->Arg(2);

static void BM_AmpSolve(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const RegressionInstance inst = gen_gaussian_ensemble({.N = n, .M = n / 2, .sigma_y2 = 1.0, .seed = 3});
  const PenaltySpec spec = spec_for(static_cast<int>(state.range(1)));
  int sweeps = 0;
  for (auto _ : state) {
    const FixedPointReport fp = amp_solve(inst, spec);
    sweeps = fp.sweeps_used;
    benchmark::DoNotOptimize(fp.state.a.data());
  }
  state.counters["sweeps"] = sweeps;
}
BENCHMARK(BM_AmpSolve)->Args({200, 0})->Args({200, 1})->Args({200, 2})->Args({800, 0})->Unit(benchmark::kMillisecond);

static void BM_EvaluateFixedPoint(benchmark::State& state) {
  const RegressionInstance inst = gen_gaussian_ensemble({.N = 200, .M = 100, .sigma_y2 = 1.0, .seed = 5});
  const PenaltySpec spec = PenaltySpec::scad(1.5, 3.7);
  const FixedPointReport fp = amp_solve(inst, spec);
  for (auto _ : state) {
    const GdfReport r = evaluate_fixed_point(inst, fp, spec);
    benchmark::DoNotOptimize(r.df1);
  }
}
BENCHMARK(BM_EvaluateFixedPoint)->Unit(benchmark::kMicrosecond);

static void BM_ReplicaSolve(benchmark::State& state) {
  const PenaltySpec spec = spec_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const ReplicaFixedPoint fp = replica_solve({spec, 0.5, 1.0, 0.0});
    benchmark::DoNotOptimize(fp.chi);
  }
}
BENCHMARK(BM_ReplicaSolve)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
