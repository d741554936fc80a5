#include "onebit/harness.h"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <set>
#include <thread>

#include "onebit/error.h"
#include "onebit/matrix_io.h"
#include "onebit/report_io.h"
#include "onebit/rng.h"

namespace onebit {
namespace {

int WorkerCount(int requested, std::size_t jobs) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), jobs));
}

// Runs job(i) for i in [0, count) on a small pool. Each job writes only to
// its own output slot, so results do not depend on scheduling.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& job) {
  const int workers = WorkerCount(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) job(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool IsBfcsFamily(const Variant& v) { return v.algorithm == Algorithm::kBfcs; }

std::vector<TrialParams> GridFor(const ExperimentConfig& cfg, const Variant& variant) {
  const std::vector<double>& taus = variant.penalty == PenaltyKind::kOneSidedL1
                                        ? cfg.grid.tau_l1
                                        : cfg.grid.tau_l2_per_m;
  const double scale = variant.penalty == PenaltyKind::kOneSidedL1
                           ? 1.0
                           : 1.0 / static_cast<double>(cfg.m);
  std::vector<TrialParams> grid;
  for (double tau : taus) {
    if (IsBfcsFamily(variant)) {
      for (double eps : cfg.grid.epsilon) grid.push_back({tau * scale, eps});
    } else {
      grid.push_back({tau * scale, 0.0});
    }
  }
  return grid;
}

}  // namespace

std::string_view ToString(NoiseReference ref) {
  switch (ref) {
    case NoiseReference::kPrenormalized:
      return "prenormalized";
    case NoiseReference::kUnitNorm:
      return "unit";
  }
  return "?";
}

NoiseReference ParseNoiseReference(std::string_view name) {
  if (name == "prenormalized") return NoiseReference::kPrenormalized;
  if (name == "unit") return NoiseReference::kUnitNorm;
  throw ConfigError(fmt::format(
      "unknown noise reference '{}', expected prenormalized or unit", name));
}

void ExperimentConfig::Validate() const {
  signal.Validate();
  if (m < 1) throw ConfigError("m must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be nonnegative");
  if (l_assumed < 0 || l_assumed > m) {
    throw ConfigError(fmt::format("L = {} must lie in [0, m]", l_assumed));
  }
  if (seeds.empty()) throw ConfigError("at least one evaluation seed is required");
  if (variants.empty()) throw ConfigError("at least one variant is required");
  if (sweep) {
    if (grid.tau_l1.empty() || grid.tau_l2_per_m.empty() || grid.epsilon.empty()) {
      throw ConfigError("sweep grids must be nonempty");
    }
    if (std::find(seeds.begin(), seeds.end(), tuning_seed) != seeds.end()) {
      throw ConfigError(fmt::format(
          "tuning seed {} must not be one of the evaluation seeds", tuning_seed));
    }
  }
  if (tau && !(*tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (!(rel_tol >= 0.0)) throw ConfigError("rel_tol must be nonnegative");
}

TrialData MakeTrialData(const ExperimentConfig& cfg, std::uint64_t seed) {
  SignalModelConfig signal_cfg = cfg.signal;
  signal_cfg.seed = DeriveSeed(seed, Stream::kSignal);
  VectorXd x_raw = GeneratePiecewiseSignalRaw(signal_cfg);
  SparseSignal x = SparseSignal::Normalized(x_raw);

  const std::uint64_t matrix_seed = DeriveSeed(seed, Stream::kMatrix);
  SensingEnsemble a =
      cfg.matrix_cache_dir.empty()
          ? GenerateSensingMatrix(cfg.m, cfg.signal.n, matrix_seed)
          : LoadOrGenerateSensingMatrix(cfg.matrix_cache_dir, cfg.m, cfg.signal.n,
                                        matrix_seed);

  const VectorXd& noisy_source =
      cfg.noise_reference == NoiseReference::kPrenormalized ? x_raw : x.values;
  BinaryMeasurements meas =
      Measure(a, noisy_source, cfg.sigma, DeriveSeed(seed, Stream::kNoise));
  return TrialData{seed, std::move(x), std::move(x_raw), std::move(a), std::move(meas)};
}

TrialParams DefaultParams(const ExperimentConfig& cfg, const Variant& variant) {
  TrialParams p;
  p.tau = cfg.tau ? *cfg.tau
                  : (variant.penalty == PenaltyKind::kOneSidedL1
                         ? 1.0
                         : 1.0 / static_cast<double>(cfg.m));
  p.epsilon = IsBfcsFamily(variant) ? cfg.epsilon : 0.0;
  return p;
}

SolverConfig MakeSolverConfig(const ExperimentConfig& cfg, const Variant& variant,
                              const TrialParams& params) {
  SolverConfig s;
  s.algorithm = variant.algorithm;
  s.penalty = variant.penalty;
  s.robust = variant.robust;
  s.k = cfg.signal.k;
  s.epsilon = params.epsilon;
  s.l = variant.robust ? cfg.l_assumed : 0;
  s.tau = params.tau;
  s.max_iters = cfg.max_iters;
  s.rel_tol = cfg.rel_tol;
  s.nonneg = cfg.nonneg;
  return s;
}

TrialOutcome RunTrial(const ExperimentConfig& cfg, const TrialData& data,
                      const Variant& variant, const TrialParams& params) {
  RecoveryReport recovery =
      Solve(data.meas, data.a, MakeSolverConfig(cfg, variant, params));
  MetricsReport metrics = Evaluate(data.x.values, recovery.x_hat.values, data.a);
  return TrialOutcome{std::move(recovery), metrics};
}

TrialOutcome RunTrial(const ExperimentConfig& cfg, std::uint64_t seed,
                      const Variant& variant) {
  cfg.Validate();
  const TrialData data = MakeTrialData(cfg, seed);
  try {
    return RunTrial(cfg, data, variant, DefaultParams(cfg, variant));
  } catch (const DegenerateResultError& e) {
    throw DegenerateResultError(
        fmt::format("seed {} {}: {}", seed, variant.Name(), e.what()));
  }
}

TuningResult SweepTune(const ExperimentConfig& cfg, const Variant& variant,
                       std::uint64_t seed) {
  const std::vector<TrialParams> grid = GridFor(cfg, variant);
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  const TrialData data = MakeTrialData(cfg, seed);

  std::vector<double> mse(grid.size(), std::numeric_limits<double>::infinity());
  ParallelFor(grid.size(), cfg.threads, [&](std::size_t i) {
    try {
      mse[i] = RunTrial(cfg, data, variant, grid[i]).metrics.mse;
    } catch (const DegenerateResultError&) {
      // leave at +inf
    }
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (mse[i] < mse[best]) best = i;
  }
  if (!std::isfinite(mse[best])) {
    throw DegenerateResultError(fmt::format(
        "every grid point failed while tuning {} on seed {}", variant.Name(), seed));
  }
  return TuningResult{grid[best], mse[best]};
}

const VariantSummary& ResultTable::Summary(const Variant& v) const {
  for (const auto& s : summaries) {
    if (s.variant == v) return s;
  }
  throw ConfigError(fmt::format("variant {} not in result table", v.Name()));
}

double Median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

void Aggregate(ResultTable& table) {
  for (VariantSummary& summary : table.summaries) {
    std::array<std::vector<double>, 5> samples;
    summary.trials = 0;
    summary.failures = 0;
    for (const RawRow& row : table.raw) {
      if (!(row.variant == summary.variant)) continue;
      ++summary.trials;
      if (!row.ok()) {
        ++summary.failures;
        continue;
      }
      for (std::size_t k = 0; k < samples.size(); ++k) {
        samples[k].push_back(MetricByIndex(row.metrics, k));
      }
    }
    for (std::size_t k = 0; k < samples.size(); ++k) {
      if (samples[k].empty()) {
        summary.median[k] = summary.mean[k] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double sum = 0.0;
      for (double v : samples[k]) sum += v;
      summary.mean[k] = sum / static_cast<double>(samples[k].size());
      summary.median[k] = Median(samples[k]);
    }
  }
}

ResultTable RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  ResultTable table;
  for (const Variant& v : cfg.variants) {
    VariantSummary s;
    s.variant = v;
    s.params = DefaultParams(cfg, v);
    if (cfg.sweep && IsBfcsFamily(v)) {
      s.tuning = SweepTune(cfg, v, cfg.tuning_seed);
      s.params = s.tuning->params;
    }
    table.summaries.push_back(std::move(s));
  }

  const std::size_t nv = cfg.variants.size();
  table.raw.resize(cfg.seeds.size() * nv);
  ParallelFor(cfg.seeds.size(), cfg.threads, [&](std::size_t si) {
    const std::uint64_t seed = cfg.seeds[si];
    const TrialData data = MakeTrialData(cfg, seed);
    for (std::size_t vi = 0; vi < nv; ++vi) {
      RawRow& row = table.raw[si * nv + vi];
      row.seed = seed;
      row.variant = table.summaries[vi].variant;
      row.params = table.summaries[vi].params;
      row.true_flips = data.meas.num_true_flips();
      try {
        TrialOutcome out = RunTrial(cfg, data, row.variant, row.params);
        row.iterations = out.recovery.iterations;
        row.converged = out.recovery.converged;
        row.estimated_flips = out.recovery.lambda.num_flips();
        row.metrics = out.metrics;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  });

  Aggregate(table);
  return table;
}

void WriteExperimentOutputs(const ExperimentConfig& cfg, const ResultTable& table,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteTextFile(dir / "table.csv", TableCsv(table));
  WriteTextFile(dir / "raw.csv", RawCsv(table));
  WriteTextFile(dir / "report.json", ReportJson(cfg, table));
}

}  // namespace onebit
