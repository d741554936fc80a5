#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

namespace onebit {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// A real signal of length n. Recovered estimates and ground truth share this
// type; `normalized` records whether the unit-norm invariant is promised.
struct SparseSignal {
  VectorXd values;
  bool normalized = false;

  Index n() const { return values.size(); }

  // Copies `values` scaled to unit l2 norm. Throws DegenerateResultError on
  // the zero vector.
  static SparseSignal Normalized(const VectorXd& values);
};

// Dense m x n sensing matrix together with the seed it was drawn from.
struct SensingEnsemble {
  MatrixXd matrix;
  std::uint64_t seed = 0;

  Index m() const { return matrix.rows(); }
  Index n() const { return matrix.cols(); }
};

// Observed signs y in {-1,+1}^m. The constructor rejects empty vectors and
// any entry that is not exactly -1 or +1, so a constructed object always
// satisfies the invariant.
class BinaryMeasurements {
 public:
  BinaryMeasurements(VectorXd y, double sigma,
                     std::optional<VectorXd> true_flips = std::nullopt);

  const VectorXd& y() const { return y_; }
  double sigma() const { return sigma_; }
  Index m() const { return y_.size(); }

  // -1 where noise changed the noiseless sign, +1 elsewhere. Only present
  // for simulated data.
  const std::optional<VectorXd>& true_flips() const { return true_flips_; }
  Index num_true_flips() const;

 private:
  VectorXd y_;
  double sigma_;
  std::optional<VectorXd> true_flips_;
};

// Piece-wise smooth test signal: d blocks of K/d samples, block i starting
// (1-based) at 50 + (i-1) n/d + 1. The four quarters of the blocks sit at
// levels 10, 15, -10, -15 plus 0.1 * N(0,1) jitter.
struct SignalModelConfig {
  Index n = 2000;
  Index k = 160;
  Index d = 8;
  std::uint64_t seed = 0;

  // Throws ConfigError when the block layout is impossible.
  void Validate() const;
};

// Element-wise sign with sign(0) = +1.
VectorXd SignVector(const VectorXd& v);

// The signal before normalization, x_bar in the block model above.
VectorXd GeneratePiecewiseSignalRaw(const SignalModelConfig& cfg);

// x_bar / ||x_bar||_2.
SparseSignal GeneratePiecewiseSignal(const SignalModelConfig& cfg);

// I.i.d. standard normal entries, drawn row by row from `seed`.
SensingEnsemble GenerateSensingMatrix(Index m, Index n, std::uint64_t seed);

// y = sign(A x + w) with w ~ N(0, sigma^2 I) drawn from `seed`. With sigma == 0
// no noise is drawn at all.
BinaryMeasurements Measure(const SensingEnsemble& a, const VectorXd& x,
                           double sigma, std::uint64_t seed);

}  // namespace onebit
