// onebit: command-line front end for 1-bit compressive sensing recovery.
//
//   onebit generate   --out DIR            signal, matrix and measurements
//   onebit recover    --matrix F --measurements F [solver flags]
//   onebit evaluate   --signal F --estimate F --matrix F
//   onebit experiment [--config F] [flags]  full table over seeds
//   onebit sweep      [--config F] [flags]  tuning only

#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "onebit/error.h"
#include "onebit/harness.h"
#include "onebit/matrix_io.h"
#include "onebit/metrics.h"
#include "onebit/model.h"
#include "onebit/report_io.h"
#include "onebit/rng.h"
#include "onebit/solver.h"

namespace {

namespace fs = std::filesystem;
using onebit::Index;

// Flags shared by `experiment` and `sweep`. Every field is optional so that
// only flags present on the command line override the config file.
struct ExperimentFlags {
  std::string config;
  std::optional<Index> n, m, k, d, l;
  std::optional<double> sigma, tau, epsilon, rel_tol;
  std::optional<int> max_iters, threads;
  std::optional<std::uint64_t> tuning_seed, seed;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> variants;
  std::optional<std::string> algo, penalty, noise_reference, matrix_cache, out;
  bool robust = false;
  bool nonneg = false;
  bool no_sweep = false;
};

void AddExperimentFlags(CLI::App* app, ExperimentFlags& f) {
  app->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
  app->add_option("--n", f.n, "Signal length");
  app->add_option("--m", f.m, "Number of measurements");
  app->add_option("--k", f.k, "Sparsity level K");
  app->add_option("--d", f.d, "Number of nonzero groups");
  app->add_option("--sigma", f.sigma, "Noise standard deviation");
  app->add_option("--l", f.l, "Assumed number of sign flips");
  app->add_option("--algo", f.algo, "Restrict to one algorithm: biht | bfcs");
  app->add_option("--penalty", f.penalty, "Restrict to one penalty: l1 | l2");
  app->add_flag("--robust", f.robust, "Restrict to the robust (flip-correcting) variant");
  app->add_option("--variants", f.variants, "Variant names, e.g. BIHT RoBFCS-l2")
      ->delimiter(',');
  app->add_option("--tau", f.tau, "Fixed step size (unswept variants)");
  app->add_option("--epsilon", f.epsilon, "Fixed normalized TV budget (unswept variants)");
  app->add_option("--seeds", f.seeds, "Evaluation seeds")->delimiter(',');
  app->add_option("--seed", f.seed,
                  "experiment: single evaluation seed; sweep: the tuning seed");
  app->add_option("--tuning-seed", f.tuning_seed, "Seed used only for tuning");
  app->add_option("--max-iters", f.max_iters, "Iteration cap");
  app->add_option("--rel-tol", f.rel_tol, "Relative-change stopping tolerance");
  app->add_flag("--nonneg", f.nonneg, "Project iterates onto the nonnegative orthant");
  app->add_flag("--no-sweep", f.no_sweep, "Skip tau/epsilon tuning");
  app->add_option("--noise-reference", f.noise_reference,
                  "Noise added to the raw signal (prenormalized) or the unit-norm one (unit)");
  app->add_option("--matrix-cache", f.matrix_cache, "Directory for cached sensing matrices");
  app->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  app->add_option("--out", f.out, "Output directory");
}

enum class SeedRole { kEvaluation, kTuning };

onebit::ExperimentConfig BuildExperimentConfig(const ExperimentFlags& f, SeedRole role) {
  onebit::ExperimentConfig cfg =
      f.config.empty() ? onebit::ExperimentConfig{} : onebit::LoadExperimentConfig(f.config);
  if (f.n) cfg.signal.n = *f.n;
  if (f.m) cfg.m = *f.m;
  if (f.k) cfg.signal.k = *f.k;
  if (f.d) cfg.signal.d = *f.d;
  if (f.l) cfg.l_assumed = *f.l;
  if (f.sigma) cfg.sigma = *f.sigma;
  if (f.tau) cfg.tau = *f.tau;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.rel_tol) cfg.rel_tol = *f.rel_tol;
  if (f.max_iters) cfg.max_iters = *f.max_iters;
  if (f.threads) cfg.threads = *f.threads;
  if (f.tuning_seed) cfg.tuning_seed = *f.tuning_seed;
  if (!f.seeds.empty()) cfg.seeds = f.seeds;
  if (f.seed) {
    if (role == SeedRole::kEvaluation) {
      cfg.seeds = {*f.seed};
    } else {
      cfg.tuning_seed = *f.seed;
    }
  }
  if (f.noise_reference) cfg.noise_reference = onebit::ParseNoiseReference(*f.noise_reference);
  if (f.matrix_cache) cfg.matrix_cache_dir = *f.matrix_cache;
  if (f.out) cfg.output_dir = *f.out;
  if (f.nonneg) cfg.nonneg = true;
  if (f.no_sweep) cfg.sweep = false;
  if (!f.variants.empty()) {
    cfg.variants.clear();
    for (const auto& name : f.variants) cfg.variants.push_back(onebit::ParseVariant(name));
  }
  if (f.algo || f.penalty || f.robust) {
    onebit::Variant v;
    if (f.algo) v.algorithm = onebit::ParseAlgorithm(*f.algo);
    if (f.penalty) v.penalty = onebit::ParsePenaltyKind(*f.penalty);
    v.robust = f.robust;
    cfg.variants = {v};
  }
  return cfg;
}

struct GenerateFlags {
  Index n = 2000, m = 2000, k = 160, d = 8;
  double sigma = 1.0;
  std::uint64_t seed = 1;
  std::string noise_reference = "prenormalized";
  std::string out = "data";
};

int RunGenerate(const GenerateFlags& f) {
  onebit::ExperimentConfig cfg;
  cfg.signal.n = f.n;
  cfg.signal.k = f.k;
  cfg.signal.d = f.d;
  cfg.m = f.m;
  cfg.sigma = f.sigma;
  cfg.noise_reference = onebit::ParseNoiseReference(f.noise_reference);
  cfg.signal.Validate();
  const onebit::TrialData data = onebit::MakeTrialData(cfg, f.seed);
  const fs::path dir(f.out);
  fs::create_directories(dir);
  onebit::WriteVector(dir / "signal.txt", data.x.values);
  onebit::WriteVector(dir / "signal_raw.txt", data.x_raw);
  onebit::WriteSensingMatrix(dir / "matrix.bin", data.a);
  onebit::WriteMeasurements(dir / "measurements.txt", data.meas);
  fmt::print("wrote {}/{{signal.txt,signal_raw.txt,matrix.bin,measurements.txt}}: "
             "n={} m={} true flips={}\n",
             dir.string(), data.x.n(), data.meas.m(), data.meas.num_true_flips());
  return 0;
}

struct RecoverFlags {
  std::string matrix, measurements, x0, out;
  std::string algo = "biht", penalty = "l1";
  bool robust = false, nonneg = false, no_trace = false;
  Index k = 160, l = 10;
  double epsilon = 0.02;
  std::optional<double> tau;
  int max_iters = 300;
  double rel_tol = 1e-3;
};

int RunRecover(const RecoverFlags& f) {
  const onebit::SensingEnsemble a = onebit::ReadSensingMatrix(f.matrix);
  const onebit::BinaryMeasurements meas = onebit::ReadMeasurements(f.measurements);
  onebit::SolverConfig cfg;
  cfg.algorithm = onebit::ParseAlgorithm(f.algo);
  cfg.penalty = onebit::ParsePenaltyKind(f.penalty);
  cfg.robust = f.robust;
  cfg.k = f.k;
  cfg.l = f.robust ? f.l : 0;
  cfg.epsilon = f.epsilon;
  cfg.tau = f.tau;
  cfg.max_iters = f.max_iters;
  cfg.rel_tol = f.rel_tol;
  cfg.nonneg = f.nonneg;
  if (!f.x0.empty()) cfg.x0 = onebit::ReadVector(f.x0);
  const onebit::RecoveryReport report = onebit::Solve(meas, a, cfg);
  if (!f.out.empty()) onebit::WriteVector(f.out, report.x_hat.values);
  std::cout << onebit::RecoveryReportToJson(report, !f.no_trace);
  return 0;
}

int RunEvaluate(const std::string& signal, const std::string& estimate,
                const std::string& matrix) {
  const onebit::VectorXd x = onebit::ReadVector(signal);
  const onebit::VectorXd e = onebit::ReadVector(estimate);
  const onebit::SensingEnsemble a = onebit::ReadSensingMatrix(matrix);
  std::cout << onebit::MetricsToJson(onebit::Evaluate(x, e, a));
  return 0;
}

void PrintTable(const onebit::ResultTable& table) {
  fmt::print("{:<6}", "");
  for (const auto& s : table.summaries) fmt::print("{:>12}", s.variant.Name());
  fmt::print("\n");
  for (std::size_t k = 0; k < onebit::kMetricNames.size(); ++k) {
    fmt::print("{:<6}", onebit::kMetricNames[k]);
    for (const auto& s : table.summaries) fmt::print("{:>12.4g}", s.median[k]);
    fmt::print("\n");
  }
}

int RunExperiment(const ExperimentFlags& flags) {
  const onebit::ExperimentConfig cfg = BuildExperimentConfig(flags, SeedRole::kEvaluation);
  const onebit::ResultTable table = onebit::RunExperiment(cfg);
  onebit::WriteExperimentOutputs(cfg, table, cfg.output_dir);
  PrintTable(table);
  for (const auto& s : table.summaries) {
    if (s.failures > 0) {
      fmt::print(stderr, "{}: {} of {} trials failed (see raw.csv)\n", s.variant.Name(),
                 s.failures, s.trials);
    }
  }
  fmt::print("wrote {}/{{table.csv,raw.csv,report.json}}\n", cfg.output_dir);
  return 0;
}

int RunSweep(const ExperimentFlags& flags) {
  onebit::ExperimentConfig cfg = BuildExperimentConfig(flags, SeedRole::kTuning);
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const onebit::Variant& v : cfg.variants) {
    const onebit::TuningResult r = onebit::SweepTune(cfg, v, cfg.tuning_seed);
    out[v.Name()] = {{"tau", r.params.tau}, {"epsilon", r.params.epsilon}, {"mse", r.mse}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-bit compressive sensing recovery: BIHT, BFCS and their robust variants"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a signal, sensing matrix and measurements");
  generate->add_option("--n", gen.n, "Signal length");
  generate->add_option("--m", gen.m, "Number of measurements");
  generate->add_option("--k", gen.k, "Sparsity level K");
  generate->add_option("--d", gen.d, "Number of nonzero groups");
  generate->add_option("--sigma", gen.sigma, "Noise standard deviation");
  generate->add_option("--seed", gen.seed, "Trial seed");
  generate->add_option("--noise-reference", gen.noise_reference, "prenormalized | unit");
  generate->add_option("--out", gen.out, "Output directory");

  RecoverFlags rec;
  auto* recover = app.add_subcommand("recover", "Run one solver and print the report as JSON");
  recover->add_option("--matrix", rec.matrix, "OBR1 matrix file")->required()->check(CLI::ExistingFile);
  recover->add_option("--measurements", rec.measurements, "Measurement file")
      ->required()->check(CLI::ExistingFile);
  recover->add_option("--algo", rec.algo, "biht | bfcs");
  recover->add_option("--penalty", rec.penalty, "l1 | l2");
  recover->add_flag("--robust", rec.robust, "Estimate and correct sign flips");
  recover->add_option("--k", rec.k, "Sparsity level K");
  recover->add_option("--l", rec.l, "Assumed number of sign flips");
  recover->add_option("--epsilon", rec.epsilon, "Normalized TV budget per group");
  recover->add_option("--tau", rec.tau, "Step size (default 1 for l1, 1/m for l2)");
  recover->add_option("--max-iters", rec.max_iters, "Iteration cap");
  recover->add_option("--rel-tol", rec.rel_tol, "Relative-change stopping tolerance");
  recover->add_flag("--nonneg", rec.nonneg, "Nonnegative signal");
  recover->add_option("--x0", rec.x0, "Initial iterate file");
  recover->add_option("--out", rec.out, "Write the unit-norm estimate here");
  recover->add_flag("--no-trace", rec.no_trace, "Omit the objective trace");

  std::string eval_signal, eval_estimate, eval_matrix;
  auto* evaluate = app.add_subcommand("evaluate", "Compute MAE, MSE, PER, HE and AE");
  evaluate->add_option("--signal", eval_signal, "Ground truth")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--estimate", eval_estimate, "Estimate")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--matrix", eval_matrix, "OBR1 matrix file")->required()->check(CLI::ExistingFile);

  ExperimentFlags exp_flags;
  auto* experiment = app.add_subcommand("experiment", "Run every variant over all seeds");
  AddExperimentFlags(experiment, exp_flags);

  ExperimentFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Tune tau and epsilon on the tuning seed");
  AddExperimentFlags(sweep, sweep_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return RunGenerate(gen);
    if (*recover) return RunRecover(rec);
    if (*evaluate) return RunEvaluate(eval_signal, eval_estimate, eval_matrix);
    if (*experiment) return RunExperiment(exp_flags);
    if (*sweep) return RunSweep(sweep_flags);
  } catch (const std::exception& e) {
    fmt::print(stderr, "onebit: {}\n", e.what());
    return 1;
  }
  return 0;
}
