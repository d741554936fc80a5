#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "onebit/metrics.h"
#include "onebit/model.h"
#include "onebit/solver.h"

namespace onebit {

// Which signal the measurement noise is added to. With kPrenormalized the
// noise w is added to A x_bar before normalization, so sigma is relative to
// the raw signal levels (10..15); with kUnitNorm it is added to A x for the
// unit-norm x.
enum class NoiseReference { kPrenormalized, kUnitNorm };

std::string_view ToString(NoiseReference ref);
NoiseReference ParseNoiseReference(std::string_view name);

struct SweepGrid {
  std::vector<double> tau_l1 = {0.5, 1.0, 2.0};
  // Multiples of 1/m.
  std::vector<double> tau_l2_per_m = {0.5, 1.0, 2.0};
  std::vector<double> epsilon = {0.005, 0.01, 0.02, 0.05, 0.1, 0.2};
};

struct ExperimentConfig {
  SignalModelConfig signal;  // signal.seed is ignored; each trial derives one
  Index m = 2000;
  double sigma = 1.0;
  NoiseReference noise_reference = NoiseReference::kPrenormalized;
  Index l_assumed = 10;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  // Held out from `seeds`; only used to pick tau and epsilon.
  std::uint64_t tuning_seed = 1000;
  std::vector<Variant> variants = AllVariants();

  // Grid-search tau and epsilon for the BFCS-family variants. BIHT-family
  // variants always run at the default step size.
  bool sweep = true;
  SweepGrid grid;
  // Used when sweep is off, or for variants that are not swept.
  std::optional<double> tau;
  double epsilon = 0.02;

  int max_iters = 300;
  double rel_tol = 1e-3;
  bool nonneg = false;

  std::string matrix_cache_dir;  // empty: never touch the disk
  int threads = 0;               // 0: hardware concurrency
  std::string output_dir = "out";

  void Validate() const;
};

// Everything one seed produces before any solver runs.
struct TrialData {
  std::uint64_t seed = 0;
  SparseSignal x;   // unit norm
  VectorXd x_raw;   // before normalization
  SensingEnsemble a;
  BinaryMeasurements meas;
};

// signal <- DeriveSeed(seed, kSignal), A <- kMatrix, noise <- kNoise.
TrialData MakeTrialData(const ExperimentConfig& cfg, std::uint64_t seed);

struct TrialParams {
  double tau = 1.0;
  double epsilon = 0.0;
};

SolverConfig MakeSolverConfig(const ExperimentConfig& cfg, const Variant& variant,
                              const TrialParams& params);

// Default step size for a variant: 1 for l1, 1/m for l2.
TrialParams DefaultParams(const ExperimentConfig& cfg, const Variant& variant);

struct TrialOutcome {
  RecoveryReport recovery;
  MetricsReport metrics;
};

TrialOutcome RunTrial(const ExperimentConfig& cfg, const TrialData& data,
                      const Variant& variant, const TrialParams& params);
TrialOutcome RunTrial(const ExperimentConfig& cfg, std::uint64_t seed,
                      const Variant& variant);

struct TuningResult {
  TrialParams params;
  double mse = 0.0;
};

// Grid search on one seed, minimizing MSE. Ties go to the earliest grid
// point (tau outer, epsilon inner). BIHT-family variants only search tau.
// Throws ConfigError on an empty grid and DegenerateResultError when every
// grid point fails.
TuningResult SweepTune(const ExperimentConfig& cfg, const Variant& variant,
                       std::uint64_t seed);

// One per (seed, variant) cell.
struct RawRow {
  std::uint64_t seed = 0;
  Variant variant;
  TrialParams params;
  int iterations = 0;
  bool converged = false;
  Index estimated_flips = 0;
  Index true_flips = 0;
  MetricsReport metrics;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct VariantSummary {
  Variant variant;
  TrialParams params;
  std::optional<TuningResult> tuning;
  std::array<double, 5> median{};  // kMetricNames order
  std::array<double, 5> mean{};
  int trials = 0;
  int failures = 0;
};

struct ResultTable {
  std::vector<VariantSummary> summaries;  // cfg.variants order
  std::vector<RawRow> raw;                // seed-major, then variant

  const VariantSummary& Summary(const Variant& v) const;
};

// Median of a nonempty sample (mean of the two middle values for even sizes).
double Median(std::vector<double> values);

// Aggregates raw rows into per-variant medians and means.
void Aggregate(ResultTable& table);

// Runs the sweep (when enabled) and then every seed x variant. Cell failures
// are recorded in the raw rows and skipped by the aggregates.
ResultTable RunExperiment(const ExperimentConfig& cfg);

// Writes table.csv, raw.csv and report.json into `dir`.
void WriteExperimentOutputs(const ExperimentConfig& cfg, const ResultTable& table,
                            const std::filesystem::path& dir);

}  // namespace onebit
