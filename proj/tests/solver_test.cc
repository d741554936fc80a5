#include "onebit/solver.h"

#include <gtest/gtest.h>

#include <random>

#include "onebit/error.h"
#include "onebit/projections.h"
#include "support/oracles.h"

namespace onebit {
namespace {

using testing::ExhaustiveFlipMinimum;
using testing::RandomNormal;

VectorXd Vec(std::initializer_list<double> values) {
  VectorXd v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// ---------------------------------------------------------------- flip update

TEST(AopFlipUpdate, EmptyBudgetFlipsNothing) {
  EXPECT_EQ(AopFlipUpdate(Vec({-3, -1, 2}), 0).lambda, VectorXd::Ones(3));
}

TEST(AopFlipUpdate, FlipsMostViolated) {
  EXPECT_EQ(AopFlipUpdate(Vec({0.5, -2, 0.3, -0.1}), 1).lambda, Vec({1, -1, 1, 1}));
}

TEST(AopFlipUpdate, NeverFlipsConsistentEntries) {
  EXPECT_EQ(AopFlipUpdate(Vec({0.5, 2, 0.3}), 2).lambda, VectorXd::Ones(3));
  EXPECT_EQ(AopFlipUpdate(Vec({0.0, -1, 0.3}), 3).lambda, Vec({1, -1, 1}));
}

TEST(AopFlipUpdate, TiesFlipLowerIndexFirst) {
  EXPECT_EQ(AopFlipUpdate(Vec({-1, -1, -1}), 2).lambda, Vec({-1, -1, 1}));
}

TEST(AopFlipUpdate, BudgetOutOfRangeThrows) {
  EXPECT_THROW(AopFlipUpdate(Vec({1, 2}), 3), ConfigError);
  EXPECT_THROW(AopFlipUpdate(Vec({1, 2}), -1), ConfigError);
}

TEST(AopFlipUpdate, MatchesExhaustiveMinimum) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> mdist(1, 10);
  for (int trial = 0; trial < 300; ++trial) {
    const Index m = mdist(gen);
    const Index l = std::min<Index>(m, trial % 4);
    const VectorXd z = RandomNormal(m, gen);
    const FlipVector flips = AopFlipUpdate(z, l);
    EXPECT_LE(flips.num_flips(), l);
    for (PenaltyKind kind : {PenaltyKind::kOneSidedL1, PenaltyKind::kOneSidedL2}) {
      const auto f = [kind](const VectorXd& u) { return PenaltyValue(u, kind); };
      EXPECT_EQ(f(z.cwiseProduct(flips.lambda)), ExhaustiveFlipMinimum(z, l, f));
    }
  }
}

// ---------------------------------------------------------------- fixtures

class SolverTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 gen(21);
    a_ = SensingEnsemble{MatrixXd(m_, n_), 21};
    std::normal_distribution<double> dist;
    for (Index i = 0; i < m_; ++i)
      for (Index j = 0; j < n_; ++j) a_.matrix(i, j) = dist(gen);
    x_ = VectorXd::Zero(n_);
    x_.segment(10, 6).setConstant(1.0);
    x_.segment(40, 6).setConstant(-1.5);
    x_.normalize();
  }

  BinaryMeasurements Noiseless() const {
    return BinaryMeasurements(SignVector(a_.matrix * x_), 0.0);
  }

  SolverConfig Config(Algorithm algorithm, PenaltyKind penalty, bool robust) const {
    SolverConfig cfg;
    cfg.algorithm = algorithm;
    cfg.penalty = penalty;
    cfg.robust = robust;
    cfg.k = 12;
    cfg.epsilon = 0.02;
    cfg.l = robust ? 3 : 0;
    return cfg;
  }

  Index m_ = 150;
  Index n_ = 80;
  SensingEnsemble a_;
  VectorXd x_;
};

TEST_F(SolverTest, StepFixedPointAtConsistentSparseSignal) {
  const BinaryMeasurements meas = Noiseless();
  for (Algorithm alg : {Algorithm::kBiht, Algorithm::kBfcs}) {
    const SolverConfig cfg = Config(alg, PenaltyKind::kOneSidedL1, false);
    const StepResult step = SolveStep(x_, FlipVector::AllOnes(m_), meas, a_, cfg);
    EXPECT_EQ(step.x, x_);
  }
}

TEST_F(SolverTest, NonRobustStepKeepsLambda) {
  std::mt19937_64 gen(1);
  const BinaryMeasurements meas(SignVector(RandomNormal(m_, gen)), 0.0);
  const SolverConfig cfg = Config(Algorithm::kBfcs, PenaltyKind::kOneSidedL1, false);
  StepResult s{RandomNormal(n_, gen), FlipVector::AllOnes(m_)};
  for (int t = 0; t < 5; ++t) {
    s = SolveStep(s.x, s.lambda, meas, a_, cfg);
    EXPECT_EQ(s.lambda.lambda, VectorXd::Ones(m_));
  }
}

TEST_F(SolverTest, BfcsStepLandsInSparseFusedSet) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 30; ++trial) {
    const BinaryMeasurements meas(SignVector(RandomNormal(m_, gen)), 0.0);
    SolverConfig cfg = Config(Algorithm::kBfcs, PenaltyKind::kOneSidedL1, true);
    cfg.epsilon = 0.005 * trial;
    const StepResult s =
        SolveStep(RandomNormal(n_, gen), FlipVector::AllOnes(m_), meas, a_, cfg);
    EXPECT_LE((s.x.array() != 0.0).count(), cfg.k);
    EXPECT_TRUE(InSEps(s.x, cfg.epsilon));
    EXPECT_LE(s.lambda.num_flips(), cfg.l);
  }
}

TEST_F(SolverTest, StepDimensionMismatchThrows) {
  const SolverConfig cfg = Config(Algorithm::kBiht, PenaltyKind::kOneSidedL1, false);
  EXPECT_THROW(SolveStep(VectorXd::Zero(n_ + 1), FlipVector::AllOnes(m_), Noiseless(), a_, cfg),
               DimensionError);
  EXPECT_THROW(SolveStep(x_, FlipVector::AllOnes(m_ - 1), Noiseless(), a_, cfg), DimensionError);
}

TEST_F(SolverTest, StartingAtTruthConvergesImmediately) {
  SolverConfig cfg = Config(Algorithm::kBiht, PenaltyKind::kOneSidedL1, false);
  cfg.x0 = x_;
  const RecoveryReport r = Solve(Noiseless(), a_, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_LE((r.x_hat.values - x_).norm(), 1e-15);
  EXPECT_EQ(r.objective_trace.size(), 1u);
  EXPECT_EQ(r.objective_trace[0], 0.0);
}

TEST_F(SolverTest, AllVariantsRecoverNoiselessSignal) {
  const BinaryMeasurements meas = Noiseless();
  for (const Variant& v : AllVariants()) {
    const RecoveryReport r = Solve(meas, a_, Config(v.algorithm, v.penalty, v.robust));
    EXPECT_NEAR(r.x_hat.values.norm(), 1.0, 1e-12) << v.Name();
    EXPECT_LE((r.x_hat.values.array() != 0.0).count(), 12) << v.Name();
    // At this small size the robust BIHT variant can settle on flipping a few
    // correct measurements, so only a loose alignment floor applies to all.
    EXPECT_GT(r.x_hat.values.dot(x_), 0.6) << v.Name();
    if (v.penalty == PenaltyKind::kOneSidedL1 && v.algorithm == Algorithm::kBfcs)
      EXPECT_GT(r.x_hat.values.dot(x_), 0.99) << v.Name();
    EXPECT_EQ(r.objective_trace.size(), static_cast<std::size_t>(r.iterations));
    EXPECT_LE(r.lambda.num_flips(), v.robust ? 3 : 0);
    if (v.algorithm == Algorithm::kBfcs) EXPECT_TRUE(InSEps(r.x_final, 0.02)) << v.Name();
  }
}

TEST_F(SolverTest, ZeroFlipBudgetIsTraceIdenticalToNonRobust) {
  std::mt19937_64 gen(3);
  VectorXd y = SignVector(a_.matrix * x_);
  for (int i = 0; i < 5; ++i) y[static_cast<Index>(gen() % m_)] *= -1.0;
  const BinaryMeasurements meas(y, 0.0);
  for (Algorithm alg : {Algorithm::kBiht, Algorithm::kBfcs}) {
    for (PenaltyKind pen : {PenaltyKind::kOneSidedL1, PenaltyKind::kOneSidedL2}) {
      SolverConfig plain = Config(alg, pen, false);
      SolverConfig robust = Config(alg, pen, true);
      robust.l = 0;
      const RecoveryReport a = Solve(meas, a_, plain);
      const RecoveryReport b = Solve(meas, a_, robust);
      EXPECT_EQ(a.objective_trace, b.objective_trace);
      EXPECT_EQ(a.x_hat.values, b.x_hat.values);
      EXPECT_EQ(a.iterations, b.iterations);
    }
  }
}

TEST_F(SolverTest, RobustFlipBudgetRespectedUnderNoise) {
  std::mt19937_64 gen(4);
  VectorXd y = SignVector(a_.matrix * x_);
  for (int i = 0; i < 4; ++i) y[static_cast<Index>(gen() % m_)] *= -1.0;
  SolverConfig cfg = Config(Algorithm::kBfcs, PenaltyKind::kOneSidedL1, true);
  cfg.l = 4;
  const RecoveryReport r = Solve(BinaryMeasurements(y, 0.0), a_, cfg);
  EXPECT_LE(r.lambda.num_flips(), 4);
}

TEST_F(SolverTest, Deterministic) {
  const SolverConfig cfg = Config(Algorithm::kBfcs, PenaltyKind::kOneSidedL1, true);
  const RecoveryReport a = Solve(Noiseless(), a_, cfg);
  const RecoveryReport b = Solve(Noiseless(), a_, cfg);
  EXPECT_EQ(a.x_hat.values, b.x_hat.values);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
  EXPECT_EQ(a.lambda.lambda, b.lambda.lambda);
}

TEST_F(SolverTest, ZeroIterateIsDegenerate) {
  // The l2 iteration never leaves the origin.
  SolverConfig cfg = Config(Algorithm::kBiht, PenaltyKind::kOneSidedL2, false);
  cfg.x0 = VectorXd::Zero(n_);
  EXPECT_THROW(Solve(Noiseless(), a_, cfg), DegenerateResultError);
}

TEST_F(SolverTest, NonnegativeVariantStaysNonnegative) {
  VectorXd xp = x_.cwiseAbs();
  const BinaryMeasurements meas(SignVector(a_.matrix * xp), 0.0);
  SolverConfig cfg = Config(Algorithm::kBfcs, PenaltyKind::kOneSidedL1, true);
  cfg.nonneg = true;
  const RecoveryReport r = Solve(meas, a_, cfg);
  EXPECT_TRUE((r.x_hat.values.array() >= 0.0).all());
  EXPECT_GT(r.x_hat.values.dot(xp.normalized()), 0.8);
}

TEST_F(SolverTest, DefaultStepSizes) {
  SolverConfig cfg;
  EXPECT_EQ(cfg.StepSize(m_), 1.0);
  cfg.penalty = PenaltyKind::kOneSidedL2;
  EXPECT_EQ(cfg.StepSize(m_), 1.0 / static_cast<double>(m_));
  cfg.tau = 0.3;
  EXPECT_EQ(cfg.StepSize(m_), 0.3);
  const RecoveryReport r = Solve(Noiseless(), a_, Config(Algorithm::kBiht, PenaltyKind::kOneSidedL2, false));
  EXPECT_EQ(*r.config.tau, 1.0 / static_cast<double>(m_));
}

TEST_F(SolverTest, InvalidConfigsThrow) {
  const BinaryMeasurements meas = Noiseless();
  SolverConfig cfg = Config(Algorithm::kBfcs, PenaltyKind::kOneSidedL1, true);
  cfg.k = 0;
  EXPECT_THROW(Solve(meas, a_, cfg), ConfigError);
  cfg = Config(Algorithm::kBfcs, PenaltyKind::kOneSidedL1, true);
  cfg.l = m_ + 1;
  EXPECT_THROW(Solve(meas, a_, cfg), ConfigError);
  cfg = Config(Algorithm::kBfcs, PenaltyKind::kOneSidedL1, false);
  cfg.tau = 0.0;
  EXPECT_THROW(Solve(meas, a_, cfg), ConfigError);
  cfg.tau.reset();
  cfg.epsilon = -1.0;
  EXPECT_THROW(Solve(meas, a_, cfg), ConfigError);
  cfg.epsilon = 0.1;
  cfg.x0 = VectorXd::Zero(3);
  EXPECT_THROW(Solve(meas, a_, cfg), DimensionError);
}

TEST(Variant, NamesRoundTrip) {
  ASSERT_EQ(AllVariants().size(), 8u);
  for (const Variant& v : AllVariants()) EXPECT_EQ(ParseVariant(v.Name()), v);
  EXPECT_EQ(ParseVariant("RoBFCS").robust, true);
  EXPECT_EQ(ParseVariant("BIHT-l2").penalty, PenaltyKind::kOneSidedL2);
  EXPECT_THROW(ParseVariant("FISTA"), ConfigError);
  EXPECT_EQ(ParseAlgorithm("bfcs"), Algorithm::kBfcs);
  EXPECT_THROW(ParseAlgorithm("omp"), ConfigError);
}

}  // namespace
}  // namespace onebit
