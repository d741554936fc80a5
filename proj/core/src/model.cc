#include "onebit/model.h"

#include <fmt/format.h>

#include <cmath>
#include <utility>

#include "onebit/error.h"
#include "onebit/rng.h"

namespace onebit {
namespace {

constexpr Index kBlockOffset = 50;
constexpr double kLevels[4] = {10.0, 15.0, -10.0, -15.0};
constexpr double kJitter = 0.1;

bool IsSignEntry(double v) { return v == 1.0 || v == -1.0; }

}  // namespace

SparseSignal SparseSignal::Normalized(const VectorXd& values) {
  const double norm = values.norm();
  if (!(norm > 0.0)) {
    throw DegenerateResultError("cannot normalize an all-zero signal");
  }
  return SparseSignal{values / norm, true};
}

BinaryMeasurements::BinaryMeasurements(VectorXd y, double sigma,
                                       std::optional<VectorXd> true_flips)
    : y_(std::move(y)), sigma_(sigma), true_flips_(std::move(true_flips)) {
  if (y_.size() == 0) {
    throw ConfigError("measurement vector is empty");
  }
  for (Index i = 0; i < y_.size(); ++i) {
    if (!IsSignEntry(y_[i])) {
      throw ConfigError(fmt::format(
          "measurement y[{}] = {} is not in {{-1, +1}}", i, y_[i]));
    }
  }
  if (!(sigma_ >= 0.0)) {
    throw ConfigError("noise sigma must be nonnegative");
  }
  if (true_flips_) {
    if (true_flips_->size() != y_.size()) {
      throw DimensionError(fmt::format("true_flips has length {}, y has {}",
                                       true_flips_->size(), y_.size()));
    }
    for (Index i = 0; i < true_flips_->size(); ++i) {
      if (!IsSignEntry((*true_flips_)[i])) {
        throw ConfigError("true_flips entries must be -1 or +1");
      }
    }
  }
}

Index BinaryMeasurements::num_true_flips() const {
  if (!true_flips_) return 0;
  return (true_flips_->array() < 0.0).count();
}

void SignalModelConfig::Validate() const {
  if (n < 1 || k < 1 || d < 1) {
    throw ConfigError("signal model needs n, K, d >= 1");
  }
  if (d % 4 != 0) {
    throw ConfigError(fmt::format("d = {} must be divisible by 4", d));
  }
  if (k % d != 0) {
    throw ConfigError(fmt::format("K = {} must be divisible by d = {}", k, d));
  }
  if (n % d != 0) {
    throw ConfigError(fmt::format("n = {} must be divisible by d = {}", n, d));
  }
  // Each block must end before the next one starts and before n.
  if (kBlockOffset + k / d > n / d) {
    throw ConfigError(fmt::format(
        "blocks of length {} offset by {} do not fit in spacing n/d = {}",
        k / d, kBlockOffset, n / d));
  }
}

VectorXd SignVector(const VectorXd& v) {
  return v.unaryExpr([](double e) { return e >= 0.0 ? 1.0 : -1.0; });
}

VectorXd GeneratePiecewiseSignalRaw(const SignalModelConfig& cfg) {
  cfg.Validate();
  Rng rng(cfg.seed);
  VectorXd x = VectorXd::Zero(cfg.n);
  const Index block_len = cfg.k / cfg.d;
  const Index spacing = cfg.n / cfg.d;
  const Index per_quarter = cfg.d / 4;
  for (Index block = 0; block < cfg.d; ++block) {
    const double level = kLevels[block / per_quarter];
    const Index start = kBlockOffset + block * spacing;
    for (Index j = 0; j < block_len; ++j) {
      x[start + j] = level + kJitter * rng.Normal();
    }
  }
  return x;
}

SparseSignal GeneratePiecewiseSignal(const SignalModelConfig& cfg) {
  return SparseSignal::Normalized(GeneratePiecewiseSignalRaw(cfg));
}

SensingEnsemble GenerateSensingMatrix(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) {
    throw ConfigError(
        fmt::format("sensing matrix dimensions must be positive, got {}x{}",
                    m, n));
  }
  Rng rng(seed);
  SensingEnsemble ensemble{MatrixXd(m, n), seed};
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      ensemble.matrix(i, j) = rng.Normal();
    }
  }
  return ensemble;
}

BinaryMeasurements Measure(const SensingEnsemble& a, const VectorXd& x,
                           double sigma, std::uint64_t seed) {
  if (a.n() != x.size()) {
    throw DimensionError(fmt::format(
        "signal length {} does not match sensing matrix columns {}", x.size(),
        a.n()));
  }
  if (!(sigma >= 0.0)) {
    throw ConfigError("noise sigma must be nonnegative");
  }
  const VectorXd clean = a.matrix * x;
  const VectorXd clean_sign = SignVector(clean);
  if (sigma == 0.0) {
    return BinaryMeasurements(clean_sign, 0.0, VectorXd::Ones(a.m()));
  }
  Rng rng(seed);
  VectorXd noisy(a.m());
  for (Index i = 0; i < a.m(); ++i) {
    noisy[i] = clean[i] + sigma * rng.Normal();
  }
  VectorXd y = SignVector(noisy);
  VectorXd flips = y.cwiseProduct(clean_sign);
  return BinaryMeasurements(std::move(y), sigma, std::move(flips));
}

}  // namespace onebit
