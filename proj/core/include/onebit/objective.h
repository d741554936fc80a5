#pragma once

#include <string_view>

#include "onebit/model.h"

namespace onebit {

// One-sided penalties on sign-consistency violations z_- = min(z, 0):
//   kOneSidedL1:  f(z) = 2 ||z_-||_1
//   kOneSidedL2:  f(z) = 0.5 ||z_-||_2^2
enum class PenaltyKind { kOneSidedL1, kOneSidedL2 };

std::string_view ToString(PenaltyKind kind);
PenaltyKind ParsePenaltyKind(std::string_view name);

double PenaltyValue(const VectorXd& z, PenaltyKind kind);

// f(y_eff .* (A x)).
double DataPenalty(const VectorXd& x, const SensingEnsemble& a,
                   const VectorXd& y_eff, PenaltyKind kind);

// A subgradient of x -> f(y_eff .* A x):
//   l1:  A^T (sign(A x) - y_eff)
//   l2:  (Y A)^T (Y A x)_-,  Y = diag(y_eff)
// `ax` may be supplied when A x is already known.
VectorXd Subgradient(const VectorXd& x, const SensingEnsemble& a,
                     const VectorXd& y_eff, PenaltyKind kind);
VectorXd SubgradientFromProduct(const VectorXd& ax, const SensingEnsemble& a,
                                const VectorXd& y_eff, PenaltyKind kind);

}  // namespace onebit
