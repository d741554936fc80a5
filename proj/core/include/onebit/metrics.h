#pragma once

#include <array>
#include <string_view>

#include "onebit/model.h"

namespace onebit {

// Error measures between a unit-norm ground truth x and estimate e:
//   mae = ||x - e||_1 / n
//   mse = ||x - e||_2^2 / n
//   per = #{i : x_i != 0 xor e_i != 0} / n      (position error rate)
//   he  = #{i : sign((Ax)_i) != sign((Ae)_i)} / m
//   ae  = arccos(<x, e>) / pi
struct MetricsReport {
  double mae = 0.0;
  double mse = 0.0;
  double per = 0.0;
  double he = 0.0;
  double ae = 0.0;
};

// Row order used by reports.
inline constexpr std::array<std::string_view, 5> kMetricNames = {
    "MAE", "MSE", "PER", "HE", "AE"};

double MetricByIndex(const MetricsReport& r, std::size_t i);

// |sign(v_i)| as a support indicator: 0 for zero entries, 1 otherwise.
VectorXd SupportIndicator(const VectorXd& v);

// Fraction of rows where sign(A x) and sign(A e) differ. Depends only on the
// directions of x and e, so no normalization is required.
double HammingError(const SensingEnsemble& a, const VectorXd& x, const VectorXd& e);

// Throws ConfigError when either input is not unit norm to within 1e-9, and
// DimensionError on shape mismatches.
MetricsReport Evaluate(const VectorXd& x, const VectorXd& e,
                       const SensingEnsemble& a);

}  // namespace onebit
