#include "onebit/metrics.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "onebit/error.h"

namespace onebit {
namespace {

constexpr double kUnitNormTolerance = 1e-9;

void RequireUnitNorm(const VectorXd& v, std::string_view what) {
  const double norm = v.norm();
  if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
    throw ConfigError(fmt::format("{} must have unit l2 norm, got {}", what, norm));
  }
}

}  // namespace

double MetricByIndex(const MetricsReport& r, std::size_t i) {
  switch (i) {
    case 0: return r.mae;
    case 1: return r.mse;
    case 2: return r.per;
    case 3: return r.he;
    case 4: return r.ae;
  }
  throw std::out_of_range("metric index");
}

VectorXd SupportIndicator(const VectorXd& v) {
  return v.unaryExpr([](double e) { return e != 0.0 ? 1.0 : 0.0; });
}

double HammingError(const SensingEnsemble& a, const VectorXd& x, const VectorXd& e) {
  if (x.size() != a.n() || e.size() != a.n()) {
    throw DimensionError("hamming error: dimension mismatch");
  }
  const VectorXd sx = SignVector(a.matrix * x);
  const VectorXd se = SignVector(a.matrix * e);
  return static_cast<double>((sx.array() != se.array()).count()) /
         static_cast<double>(a.m());
}

MetricsReport Evaluate(const VectorXd& x, const VectorXd& e,
                       const SensingEnsemble& a) {
  if (x.size() != e.size() || x.size() != a.n()) {
    throw DimensionError(fmt::format(
        "evaluate: x has {} entries, e has {}, A has {} columns", x.size(),
        e.size(), a.n()));
  }
  RequireUnitNorm(x, "ground truth");
  RequireUnitNorm(e, "estimate");

  const auto n = static_cast<double>(x.size());
  const VectorXd diff = x - e;
  MetricsReport r;
  r.mae = diff.lpNorm<1>() / n;
  r.mse = diff.squaredNorm() / n;
  r.per = (SupportIndicator(x) - SupportIndicator(e)).cwiseAbs().sum() / n;
  r.ae = std::acos(std::clamp(x.dot(e), -1.0, 1.0)) / std::numbers::pi;
  r.he = HammingError(a, x, e);
  return r;
}

}  // namespace onebit
