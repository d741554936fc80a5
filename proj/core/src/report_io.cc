#include "onebit/report_io.h"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "onebit/error.h"
#include "onebit/version.h"

namespace onebit {
namespace {

using Json = nlohmann::ordered_json;

// Round-trip formatting for CSV cells.
std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

Json GridToJson(const SweepGrid& g) {
  return Json{{"tau_l1", g.tau_l1}, {"tau_l2_per_m", g.tau_l2_per_m}, {"epsilon", g.epsilon}};
}

Json NumOrNull(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

Json MetricsJson(const std::array<double, 5>& values) {
  Json j = Json::object();
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
    j[std::string(kMetricNames[k])] = NumOrNull(values[k]);
  }
  return j;
}

Json ConfigJson(const ExperimentConfig& cfg) {
  Json variants = Json::array();
  for (const Variant& v : cfg.variants) variants.push_back(v.Name());
  Json j;
  j["n"] = cfg.signal.n;
  j["k"] = cfg.signal.k;
  j["d"] = cfg.signal.d;
  j["m"] = cfg.m;
  j["sigma"] = cfg.sigma;
  j["noise_reference"] = std::string(ToString(cfg.noise_reference));
  j["l"] = cfg.l_assumed;
  j["seeds"] = cfg.seeds;
  j["tuning_seed"] = cfg.tuning_seed;
  j["variants"] = variants;
  j["sweep"] = cfg.sweep;
  j["grid"] = GridToJson(cfg.grid);
  j["tau"] = cfg.tau ? Json(*cfg.tau) : Json(nullptr);
  j["epsilon"] = cfg.epsilon;
  j["max_iters"] = cfg.max_iters;
  j["rel_tol"] = cfg.rel_tol;
  j["nonneg"] = cfg.nonneg;
  j["matrix_cache_dir"] = cfg.matrix_cache_dir;
  j["threads"] = cfg.threads;
  j["out"] = cfg.output_dir;
  return j;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> kKnown = {
      "n", "k", "d", "m", "sigma", "noise_reference", "l", "seeds",
      "tuning_seed", "variants", "sweep", "grid", "tau", "epsilon",
      "max_iters", "rel_tol", "nonneg", "matrix_cache_dir", "threads", "out"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) throw ConfigError(fmt::format("unknown config key '{}'", key));
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("n")) cfg.signal.n = j["n"].get<Index>();
    if (j.contains("k")) cfg.signal.k = j["k"].get<Index>();
    if (j.contains("d")) cfg.signal.d = j["d"].get<Index>();
    if (j.contains("m")) cfg.m = j["m"].get<Index>();
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("noise_reference")) {
      cfg.noise_reference = ParseNoiseReference(j["noise_reference"].get<std::string>());
    }
    if (j.contains("l")) cfg.l_assumed = j["l"].get<Index>();
    if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("tuning_seed")) cfg.tuning_seed = j["tuning_seed"].get<std::uint64_t>();
    if (j.contains("variants")) {
      cfg.variants.clear();
      for (const auto& name : j["variants"]) {
        cfg.variants.push_back(ParseVariant(name.get<std::string>()));
      }
    }
    if (j.contains("sweep")) cfg.sweep = j["sweep"].get<bool>();
    if (j.contains("grid")) {
      const Json& g = j["grid"];
      if (g.contains("tau_l1")) cfg.grid.tau_l1 = g["tau_l1"].get<std::vector<double>>();
      if (g.contains("tau_l2_per_m")) {
        cfg.grid.tau_l2_per_m = g["tau_l2_per_m"].get<std::vector<double>>();
      }
      if (g.contains("epsilon")) cfg.grid.epsilon = g["epsilon"].get<std::vector<double>>();
    }
    if (j.contains("tau") && !j["tau"].is_null()) cfg.tau = j["tau"].get<double>();
    if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
    if (j.contains("max_iters")) cfg.max_iters = j["max_iters"].get<int>();
    if (j.contains("rel_tol")) cfg.rel_tol = j["rel_tol"].get<double>();
    if (j.contains("nonneg")) cfg.nonneg = j["nonneg"].get<bool>();
    if (j.contains("matrix_cache_dir")) {
      cfg.matrix_cache_dir = j["matrix_cache_dir"].get<std::string>();
    }
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("out")) cfg.output_dir = j["out"].get<std::string>();
  } catch (const Json::exception& e) {
    throw ConfigError(fmt::format("bad config value: {}", e.what()));
  }
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseExperimentConfig(ss.str());
}

std::string ExperimentConfigToJson(const ExperimentConfig& cfg) {
  return ConfigJson(cfg).dump(2) + "\n";
}

std::string RecoveryReportToJson(const RecoveryReport& report, bool include_trace) {
  const SolverConfig& c = report.config;
  Json j;
  j["variant"] = Variant{c.algorithm, c.penalty, c.robust}.Name();
  j["config"] = Json{{"algorithm", std::string(ToString(c.algorithm))},
                     {"penalty", std::string(ToString(c.penalty))},
                     {"robust", c.robust},
                     {"k", c.k},
                     {"epsilon", c.epsilon},
                     {"l", c.l},
                     {"tau", c.tau ? Json(*c.tau) : Json(nullptr)},
                     {"max_iters", c.max_iters},
                     {"rel_tol", c.rel_tol},
                     {"nonneg", c.nonneg}};
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  std::vector<Index> flips;
  for (Index i = 0; i < report.lambda.lambda.size(); ++i) {
    if (report.lambda.lambda[i] < 0.0) flips.push_back(i);
  }
  j["flipped_indices"] = flips;
  if (include_trace) j["objective_trace"] = report.objective_trace;
  j["x_hat"] = std::vector<double>(report.x_hat.values.begin(), report.x_hat.values.end());
  return j.dump(2) + "\n";
}

std::string MetricsToJson(const MetricsReport& m) {
  Json j{{"MAE", m.mae}, {"MSE", m.mse}, {"PER", m.per}, {"HE", m.he}, {"AE", m.ae}};
  return j.dump(2) + "\n";
}

std::string TableCsv(const ResultTable& table) {
  std::string out = "metric";
  for (const auto& s : table.summaries) out += "," + s.variant.Name();
  out += "\n";
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
    out += kMetricNames[k];
    for (const auto& s : table.summaries) out += "," + Num(s.median[k]);
    out += "\n";
  }
  return out;
}

std::string RawCsv(const ResultTable& table) {
  std::string out =
      "seed,variant,tau,epsilon,iterations,converged,estimated_flips,true_flips,"
      "MAE,MSE,PER,HE,AE,error\n";
  for (const RawRow& r : table.raw) {
    std::string error = r.error;
    for (char& c : error) {
      if (c == ',' || c == '\n') c = ';';
    }
    out += fmt::format("{},{},{},{},{},{},{},{}", r.seed, r.variant.Name(),
                       Num(r.params.tau), Num(r.params.epsilon), r.iterations,
                       r.converged ? 1 : 0, r.estimated_flips, r.true_flips);
    if (r.ok()) {
      for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
        out += "," + Num(MetricByIndex(r.metrics, k));
      }
    } else {
      out += ",,,,,";
    }
    out += "," + error + "\n";
  }
  return out;
}

std::string ReportJson(const ExperimentConfig& cfg, const ResultTable& table) {
  Json j;
  j["tool"] = "onebit";
  j["version"] = kVersion;
#if defined(__clang__)
  j["compiler"] = fmt::format("clang {}.{}.{}", __clang_major__, __clang_minor__,
                              __clang_patchlevel__);
#elif defined(__GNUC__)
  j["compiler"] = fmt::format("gcc {}.{}.{}", __GNUC__, __GNUC_MINOR__, __GNUC_PATCHLEVEL__);
#else
  j["compiler"] = "unknown";
#endif
  j["eigen"] = fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                           EIGEN_MINOR_VERSION);
  j["config"] = ConfigJson(cfg);
  Json variants = Json::object();
  for (const auto& s : table.summaries) {
    Json v;
    v["tau"] = s.params.tau;
    v["epsilon"] = s.params.epsilon;
    if (s.tuning) {
      v["tuning"] = Json{{"seed", cfg.tuning_seed}, {"mse", s.tuning->mse}};
    }
    v["trials"] = s.trials;
    v["failures"] = s.failures;
    v["median"] = MetricsJson(s.median);
    v["mean"] = MetricsJson(s.mean);
    variants[s.variant.Name()] = v;
  }
  j["variants"] = variants;
  return j.dump(2) + "\n";
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("short write to {}", path.string()));
}

}  // namespace onebit
