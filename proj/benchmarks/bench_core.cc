#include <benchmark/benchmark.h>

#include <random>

#include "onebit/harness.h"
#include "onebit/model.h"
#include "onebit/objective.h"
#include "onebit/projections.h"
#include "onebit/solver.h"

namespace onebit {
namespace {

VectorXd RandomVector(Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

// A sparse, piecewise-constant vector plus dense perturbation: the typical
// input the projections see inside the solver loop.
VectorXd SolverLikeVector(Index n, std::uint64_t seed) {
  SignalModelConfig cfg;
  cfg.n = n;
  cfg.k = n / 12 / 8 * 8;
  cfg.d = 8;
  cfg.seed = seed;
  return GeneratePiecewiseSignal(cfg).values + 0.01 * RandomVector(n, seed + 1);
}

void BM_HardThreshold(benchmark::State& state) {
  const Index n = state.range(0);
  const VectorXd v = RandomVector(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(HardThreshold(v, n / 12));
  state.SetComplexityN(n);
}
BENCHMARK(BM_HardThreshold)->RangeMultiplier(4)->Range(128, 32768)->Complexity();

void BM_TvProx(benchmark::State& state) {
  const Index n = state.range(0);
  const VectorXd v = RandomVector(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(TvProx(v, 0.5));
  state.SetComplexityN(n);
}
BENCHMARK(BM_TvProx)->RangeMultiplier(4)->Range(128, 32768)->Complexity();

void BM_ProjectTvBall(benchmark::State& state) {
  const Index n = state.range(0);
  const VectorXd v = RandomVector(n, 3);
  const double radius = 0.01 * TotalVariation(v);
  for (auto _ : state) benchmark::DoNotOptimize(ProjectTvBall(v, radius));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ProjectTvBall)->RangeMultiplier(4)->Range(128, 32768)->Complexity();

void BM_ProjectSEps(benchmark::State& state) {
  const VectorXd v = HardThreshold(SolverLikeVector(2000, 4), 160);
  for (auto _ : state) benchmark::DoNotOptimize(ProjectSEps(v, 0.02));
}
BENCHMARK(BM_ProjectSEps);

class SolverFixture : public benchmark::Fixture {
 public:
  void SetUp(const benchmark::State&) override {
    if (data_) return;
    ExperimentConfig cfg;  // n = m = 2000
    data_ = std::make_unique<TrialData>(MakeTrialData(cfg, 1));
  }

 protected:
  SolverConfig Config(Algorithm alg, bool robust) const {
    SolverConfig cfg;
    cfg.algorithm = alg;
    cfg.robust = robust;
    cfg.k = 160;
    cfg.epsilon = 0.02;
    cfg.l = robust ? 10 : 0;
    return cfg;
  }

  static std::unique_ptr<TrialData> data_;
};
std::unique_ptr<TrialData> SolverFixture::data_;

BENCHMARK_F(SolverFixture, Subgradient)(benchmark::State& state) {
  const VectorXd x = data_->x.values;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Subgradient(x, data_->a, data_->meas.y(), PenaltyKind::kOneSidedL1));
  }
}

BENCHMARK_F(SolverFixture, SolveStepRoBFCS)(benchmark::State& state) {
  const SolverConfig cfg = Config(Algorithm::kBfcs, true);
  const VectorXd x = data_->x.values;
  const FlipVector lambda = FlipVector::AllOnes(data_->a.m());
  for (auto _ : state) benchmark::DoNotOptimize(SolveStep(x, lambda, data_->meas, data_->a, cfg));
}

BENCHMARK_DEFINE_F(SolverFixture, SolveRoBFCS)(benchmark::State& state) {
  const SolverConfig cfg = Config(Algorithm::kBfcs, true);
  for (auto _ : state) benchmark::DoNotOptimize(Solve(data_->meas, data_->a, cfg));
}
BENCHMARK_REGISTER_F(SolverFixture, SolveRoBFCS)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
}  // namespace onebit

BENCHMARK_MAIN();
