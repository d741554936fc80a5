#include "onebit/objective.h"

#include <fmt/format.h>

#include <string>

#include "onebit/error.h"

namespace onebit {

std::string_view ToString(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::kOneSidedL1:
      return "l1";
    case PenaltyKind::kOneSidedL2:
      return "l2";
  }
  return "?";
}

PenaltyKind ParsePenaltyKind(std::string_view name) {
  if (name == "l1") return PenaltyKind::kOneSidedL1;
  if (name == "l2") return PenaltyKind::kOneSidedL2;
  throw ConfigError(fmt::format("unknown penalty '{}', expected l1 or l2", name));
}

double PenaltyValue(const VectorXd& z, PenaltyKind kind) {
  const auto neg = z.array().min(0.0);
  switch (kind) {
    case PenaltyKind::kOneSidedL1:
      return 2.0 * neg.abs().sum();
    case PenaltyKind::kOneSidedL2:
      return 0.5 * neg.square().sum();
  }
  return 0.0;
}

double DataPenalty(const VectorXd& x, const SensingEnsemble& a,
                   const VectorXd& y_eff, PenaltyKind kind) {
  if (a.n() != x.size() || a.m() != y_eff.size()) {
    throw DimensionError("data penalty: dimension mismatch");
  }
  const VectorXd ax = a.matrix * x;
  return PenaltyValue(y_eff.cwiseProduct(ax), kind);
}

VectorXd SubgradientFromProduct(const VectorXd& ax, const SensingEnsemble& a,
                                const VectorXd& y_eff, PenaltyKind kind) {
  if (a.m() != ax.size() || a.m() != y_eff.size()) {
    throw DimensionError(fmt::format(
        "subgradient: A is {}x{}, A x has {} rows, y has {}", a.m(), a.n(),
        ax.size(), y_eff.size()));
  }
  VectorXd residual(a.m());
  switch (kind) {
    case PenaltyKind::kOneSidedL1:
      residual = SignVector(ax) - y_eff;
      break;
    case PenaltyKind::kOneSidedL2:
      // (Y A)^T (Y A x)_- = A^T (y .* min(y .* Ax, 0)).
      residual = y_eff.cwiseProduct(y_eff.cwiseProduct(ax).cwiseMin(0.0));
      break;
  }
  return a.matrix.transpose() * residual;
}

VectorXd Subgradient(const VectorXd& x, const SensingEnsemble& a,
                     const VectorXd& y_eff, PenaltyKind kind) {
  if (a.n() != x.size()) {
    throw DimensionError(fmt::format(
        "subgradient: x has length {}, A has {} columns", x.size(), a.n()));
  }
  return SubgradientFromProduct(a.matrix * x, a, y_eff, kind);
}

}  // namespace onebit
