#include "onebit/solver.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "onebit/error.h"
#include "onebit/projections.h"

namespace onebit {
namespace {

VectorXd ProjectIterate(const VectorXd& v, const SolverConfig& cfg) {
  VectorXd x = HardThreshold(v, cfg.k);
  if (cfg.algorithm == Algorithm::kBfcs) x = ProjectSEps(x, cfg.epsilon);
  if (cfg.nonneg) x = ProjectNonneg(x);
  return x;
}

VectorXd InitialIterate(const BinaryMeasurements& meas,
                        const SensingEnsemble& a, const SolverConfig& cfg) {
  if (cfg.x0) return *cfg.x0;
  if (cfg.penalty == PenaltyKind::kOneSidedL1) return VectorXd::Zero(a.n());
  VectorXd back = HardThreshold(a.matrix.transpose() * meas.y(), cfg.k);
  const double norm = back.norm();
  if (norm > 0.0) back /= norm;
  return back;
}

}  // namespace

std::string_view ToString(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBiht:
      return "biht";
    case Algorithm::kBfcs:
      return "bfcs";
  }
  return "?";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "biht") return Algorithm::kBiht;
  if (name == "bfcs") return Algorithm::kBfcs;
  throw ConfigError(fmt::format("unknown algorithm '{}', expected biht or bfcs", name));
}

double SolverConfig::StepSize(Index m) const {
  if (tau) return *tau;
  return penalty == PenaltyKind::kOneSidedL1 ? 1.0 : 1.0 / static_cast<double>(m);
}

void SolverConfig::Validate(Index m, Index n) const {
  if (k < 1 || k > n) {
    throw ConfigError(fmt::format("K = {} must lie in [1, n = {}]", k, n));
  }
  if (robust && (l < 0 || l > m)) {
    throw ConfigError(fmt::format("L = {} must lie in [0, m = {}]", l, m));
  }
  if (algorithm == Algorithm::kBfcs && !(epsilon >= 0.0)) {
    throw ConfigError("epsilon must be nonnegative");
  }
  if (tau && !(*tau > 0.0)) {
    throw ConfigError(fmt::format("step size tau = {} must be positive", *tau));
  }
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (!(rel_tol >= 0.0)) throw ConfigError("rel_tol must be nonnegative");
  if (x0 && x0->size() != n) {
    throw DimensionError(fmt::format("x0 has length {}, expected {}", x0->size(), n));
  }
}

FlipVector AopFlipUpdate(const VectorXd& z, Index l) {
  if (l < 0 || l > z.size()) {
    throw ConfigError(fmt::format("flip budget L = {} outside [0, {}]", l, z.size()));
  }
  FlipVector out = FlipVector::AllOnes(z.size());
  if (l == 0) return out;

  std::vector<Index> negative;
  for (Index i = 0; i < z.size(); ++i) {
    if (z[i] < 0.0) negative.push_back(i);
  }
  const auto more_violated = [&z](Index a, Index b) {
    return z[a] < z[b] || (z[a] == z[b] && a < b);
  };
  const auto count = std::min<std::size_t>(negative.size(), static_cast<std::size_t>(l));
  std::partial_sort(negative.begin(), negative.begin() + count, negative.end(),
                    more_violated);
  for (std::size_t i = 0; i < count; ++i) out.lambda[negative[i]] = -1.0;
  return out;
}

StepResult SolveStep(const VectorXd& x, const FlipVector& lambda,
                     const BinaryMeasurements& meas, const SensingEnsemble& a,
                     const SolverConfig& cfg) {
  if (x.size() != a.n() || meas.m() != a.m() || lambda.lambda.size() != a.m()) {
    throw DimensionError(fmt::format(
        "solve step: x {} / y {} / lambda {} against A {}x{}", x.size(),
        meas.m(), lambda.lambda.size(), a.m(), a.n()));
  }
  cfg.Validate(a.m(), a.n());
  const VectorXd y_eff = meas.y().cwiseProduct(lambda.lambda);
  const VectorXd v =
      x - cfg.StepSize(a.m()) * Subgradient(x, a, y_eff, cfg.penalty);
  StepResult result{ProjectIterate(v, cfg), lambda};
  if (cfg.robust) {
    const VectorXd z = meas.y().cwiseProduct(a.matrix * result.x);
    result.lambda = AopFlipUpdate(z, cfg.l);
  }
  return result;
}

RecoveryReport Solve(const BinaryMeasurements& meas, const SensingEnsemble& a,
                     const SolverConfig& cfg) {
  if (meas.m() != a.m()) {
    throw DimensionError(fmt::format("{} measurements for a sensing matrix with {} rows",
                                     meas.m(), a.m()));
  }
  cfg.Validate(a.m(), a.n());

  RecoveryReport report;
  report.config = cfg;
  report.config.tau = cfg.StepSize(a.m());
  const double tau = *report.config.tau;

  VectorXd x = InitialIterate(meas, a, cfg);
  VectorXd ax = a.matrix * x;
  FlipVector lambda = FlipVector::AllOnes(a.m());
  report.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iters));

  for (int t = 0; t < cfg.max_iters; ++t) {
    const VectorXd y_eff = meas.y().cwiseProduct(lambda.lambda);
    const VectorXd v = x - tau * SubgradientFromProduct(ax, a, y_eff, cfg.penalty);
    VectorXd next = ProjectIterate(v, cfg);
    VectorXd ax_next = a.matrix * next;
    const VectorXd z = meas.y().cwiseProduct(ax_next);
    if (cfg.robust) lambda = AopFlipUpdate(z, cfg.l);
    report.objective_trace.push_back(
        PenaltyValue(z.cwiseProduct(lambda.lambda), cfg.penalty));

    const double next_norm = next.norm();
    const double change = (next - x).norm();
    x = std::move(next);
    ax = std::move(ax_next);
    report.iterations = t + 1;
    if (next_norm == 0.0) {
      if (change == 0.0) break;  // stuck at the origin
      continue;
    }
    if (change <= cfg.rel_tol * next_norm) {
      report.converged = true;
      break;
    }
  }

  const double norm = x.norm();
  if (!(norm > 0.0)) {
    throw DegenerateResultError(fmt::format(
        "{} iterate collapsed to the zero vector after {} iterations",
        Variant{cfg.algorithm, cfg.penalty, cfg.robust}.Name(), report.iterations));
  }
  report.x_hat = SparseSignal{x / norm, true};
  report.x_final = std::move(x);
  report.lambda = std::move(lambda);
  return report;
}

std::string Variant::Name() const {
  std::string name = robust ? "Ro" : "";
  name += algorithm == Algorithm::kBiht ? "BIHT" : "BFCS";
  if (penalty == PenaltyKind::kOneSidedL2) name += "-l2";
  return name;
}

Variant ParseVariant(std::string_view name) {
  for (const Variant& v : AllVariants()) {
    if (v.Name() == name) return v;
  }
  throw ConfigError(fmt::format("unknown algorithm variant '{}'", name));
}

const std::vector<Variant>& AllVariants() {
  static const std::vector<Variant> kAll = [] {
    std::vector<Variant> all;
    for (bool robust : {false, true}) {
      for (Algorithm algorithm : {Algorithm::kBiht, Algorithm::kBfcs}) {
        for (PenaltyKind penalty : {PenaltyKind::kOneSidedL1, PenaltyKind::kOneSidedL2}) {
          all.push_back(Variant{algorithm, penalty, robust});
        }
      }
    }
    return all;
  }();
  return kAll;
}

}  // namespace onebit
