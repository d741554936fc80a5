#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/model.h"
#include "onebit/objective.h"

namespace onebit {

enum class Algorithm {
  kBiht,  // hard thresholding only
  kBfcs,  // hard thresholding followed by the S_eps group-TV projection
};

std::string_view ToString(Algorithm algorithm);
Algorithm ParseAlgorithm(std::string_view name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::kBiht;
  PenaltyKind penalty = PenaltyKind::kOneSidedL1;
  // Alternate with the flip-vector update (adaptive outlier pursuit).
  bool robust = false;
  Index k = 160;
  // Normalized TV budget per group; BFCS only.
  double epsilon = 0.0;
  // Flip budget; robust only.
  Index l = 0;
  // Unset: 1 for the l1 penalty, 1/m for l2.
  std::optional<double> tau;
  int max_iters = 300;
  // Stop when ||x_{t+1} - x_t|| / ||x_{t+1}|| <= rel_tol.
  double rel_tol = 1e-3;
  // Clamp iterates to the nonnegative orthant after the other projections.
  bool nonneg = false;
  // Unset: the zero vector for l1. For l2 the zero vector is a stationary
  // point of the iteration, so H_K(A^T y) scaled to unit norm is used.
  std::optional<VectorXd> x0;

  double StepSize(Index m) const;

  // Throws ConfigError / DimensionError.
  void Validate(Index m, Index n) const;
};

// Lambda in {-1,+1}^m; -1 marks a measurement believed to be flipped.
struct FlipVector {
  VectorXd lambda;

  static FlipVector AllOnes(Index m) { return FlipVector{VectorXd::Ones(m)}; }
  Index num_flips() const { return (lambda.array() < 0.0).count(); }
};

// Minimizer of f(z .* Lambda) subject to at most `l` entries of Lambda being
// -1: flips the (at most l) most negative entries of z. Nonnegative entries
// are never flipped; equal values flip the lower index first.
// Throws ConfigError when l < 0 or l > z.size().
FlipVector AopFlipUpdate(const VectorXd& z, Index l);

struct StepResult {
  VectorXd x;
  FlipVector lambda;
};

// One projected-subgradient step followed (when robust) by the flip update:
//   v       = x - tau * subgradient(x; y .* lambda)
//   x_next  = [P_+] P_S_eps(H_K(v))     (P_S_eps for BFCS, P_+ if nonneg)
//   lambda' = AopFlipUpdate(y .* A x_next, L)
StepResult SolveStep(const VectorXd& x, const FlipVector& lambda,
                     const BinaryMeasurements& meas, const SensingEnsemble& a,
                     const SolverConfig& cfg);

struct RecoveryReport {
  SparseSignal x_hat;        // unit norm
  VectorXd x_final;          // last iterate before normalization
  FlipVector lambda;         // all +1 when not robust
  int iterations = 0;
  // f(y .* lambda_t .* A x_t) after every iteration.
  std::vector<double> objective_trace;
  bool converged = false;
  SolverConfig config;       // tau resolved
};

// Iterates SolveStep from x0 until the relative change falls below rel_tol or
// max_iters is reached, then normalizes. Throws DegenerateResultError when
// the final iterate is exactly zero.
RecoveryReport Solve(const BinaryMeasurements& meas, const SensingEnsemble& a,
                     const SolverConfig& cfg);

// One of the eight named solver variants, e.g. "RoBFCS-l2".
struct Variant {
  Algorithm algorithm = Algorithm::kBiht;
  PenaltyKind penalty = PenaltyKind::kOneSidedL1;
  bool robust = false;

  std::string Name() const;
  bool operator==(const Variant&) const = default;
};

Variant ParseVariant(std::string_view name);

// BIHT, BIHT-l2, BFCS, BFCS-l2, RoBIHT, RoBIHT-l2, RoBFCS, RoBFCS-l2.
const std::vector<Variant>& AllVariants();

}  // namespace onebit
