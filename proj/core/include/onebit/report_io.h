#pragma once

#include <filesystem>
#include <string>

#include "onebit/harness.h"

namespace onebit {

// JSON config files mirror ExperimentConfig field by field:
//
//   {"n": 2000, "k": 160, "d": 8, "m": 2000, "sigma": 1.0,
//    "noise_reference": "prenormalized", "l": 10, "seeds": [1, 2, 3],
//    "tuning_seed": 1000, "variants": ["BIHT", "RoBFCS"], "sweep": true,
//    "grid": {"tau_l1": [...], "tau_l2_per_m": [...], "epsilon": [...]},
//    "tau": 1.0, "epsilon": 0.02, "max_iters": 300, "rel_tol": 0.001,
//    "nonneg": false, "matrix_cache_dir": "", "threads": 0, "out": "out"}
//
// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);
std::string ExperimentConfigToJson(const ExperimentConfig& cfg);

std::string RecoveryReportToJson(const RecoveryReport& report, bool include_trace = true);
std::string MetricsToJson(const MetricsReport& metrics);

// Rows MAE, MSE, PER, HE, AE; one column per variant; cells are medians.
std::string TableCsv(const ResultTable& table);
std::string RawCsv(const ResultTable& table);
std::string ReportJson(const ExperimentConfig& cfg, const ResultTable& table);

void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace onebit
