#include "onebit/projections.h"

#include <gtest/gtest.h>

#include <random>

#include "onebit/error.h"
#include "support/oracles.h"

namespace onebit {
namespace {

using testing::DroppedEnergy;
using testing::ExhaustiveBestKResidual;
using testing::QpProjectTvBall;
using testing::RandomNormal;
using testing::RandomSparse;

VectorXd Vec(std::initializer_list<double> values) {
  VectorXd v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// ---------------------------------------------------------------- hard threshold

TEST(HardThreshold, KeepsLargestMagnitudes) {
  EXPECT_EQ(HardThreshold(Vec({3, -5, 1}), 2), Vec({3, -5, 0}));
}

TEST(HardThreshold, TiesGoToLowerIndex) {
  EXPECT_EQ(HardThreshold(Vec({1, -1, 1}), 2), Vec({1, -1, 0}));
  EXPECT_EQ(HardThreshold(Vec({2, 2, 2, 2}), 1), Vec({2, 0, 0, 0}));
}

TEST(HardThreshold, SparseInputUnchanged) {
  const VectorXd v = Vec({0, 4, 0, -2, 0});
  EXPECT_EQ(HardThreshold(v, 2), v);
  EXPECT_EQ(HardThreshold(v, 5), v);
}

TEST(HardThreshold, KLargerThanLengthThrows) {
  EXPECT_THROW(HardThreshold(Vec({1, 2}), 3), ConfigError);
  EXPECT_THROW(HardThreshold(Vec({1, 2}), -1), ConfigError);
}

TEST(HardThreshold, MatchesExhaustiveBestSupport) {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> len(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = len(gen);
    VectorXd v = RandomNormal(n, gen);
    if (trial % 3 == 0) v = v.array().round();  // force magnitude ties
    for (Index k = 0; k <= n; ++k) {
      const VectorXd h = HardThreshold(v, k);
      EXPECT_LE((h.array() != 0.0).count(), k);
      // Entries kept by HT are exactly v there.
      for (Index i = 0; i < n; ++i) {
        if (h[i] != 0.0) EXPECT_EQ(h[i], v[i]);
      }
      std::vector<bool> kept_by_ht(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) kept_by_ht[static_cast<std::size_t>(i)] = h[i] != 0.0;
      EXPECT_EQ(DroppedEnergy(v, kept_by_ht), ExhaustiveBestKResidual(v, k))
          << "trial " << trial << " k " << k;
    }
  }
}

// ---------------------------------------------------------------- total variation

TEST(TotalVariation, Basics) {
  EXPECT_EQ(TotalVariation(VectorXd::Constant(6, 3.5)), 0.0);
  EXPECT_EQ(TotalVariation(Vec({0, 1, 0})), 2.0);
  EXPECT_EQ(TotalVariation(Vec({7})), 0.0);
  EXPECT_DOUBLE_EQ(TotalVariation(Vec({-1, 0.5, 2, 4.25})), 5.25);
}

// The 1-D TV prox x of v is certified by the running sums s_k = sum_{i<=k}
// (v_i - x_i): |s_k| <= lambda everywhere, s_k = -lambda * sign(x_{k+1} - x_k)
// wherever x jumps, and s_{n-1} = 0.
void ExpectTvProxOptimal(const VectorXd& v, double lambda, const VectorXd& x) {
  double s = 0.0;
  const double tol = 1e-9 * (1.0 + lambda + v.cwiseAbs().maxCoeff());
  for (Index k = 0; k + 1 < v.size(); ++k) {
    s += v[k] - x[k];
    EXPECT_LE(std::abs(s), lambda + tol) << k;
    const double jump = x[k + 1] - x[k];
    if (std::abs(jump) > 1e-9) EXPECT_NEAR(s, -lambda * (jump > 0 ? 1.0 : -1.0), tol) << k;
  }
  s += v[v.size() - 1] - x[v.size() - 1];
  EXPECT_NEAR(s, 0.0, tol);
}

TEST(TvProx, SatisfiesOptimalityConditions) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> len(1, 60);
  std::uniform_real_distribution<double> lam(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const VectorXd v = RandomNormal(len(gen), gen) * 2.0;
    const double lambda = lam(gen);
    ExpectTvProxOptimal(v, lambda, TvProx(v, lambda));
  }
}

TEST(TvProx, LargeLambdaGivesMean) {
  const VectorXd v = Vec({1, 5, -2, 4});
  const VectorXd x = TvProx(v, 100.0);
  for (Index i = 0; i < v.size(); ++i) EXPECT_NEAR(x[i], v.mean(), 1e-12);
}

// ---------------------------------------------------------------- TV ball

TEST(ProjectTvBall, FeasibleInputUnchanged) {
  const VectorXd v = Vec({1, 1.2, 1.1});
  EXPECT_EQ(ProjectTvBall(v, 0.5), v);
}

TEST(ProjectTvBall, TwoPointClosedForm) {
  const VectorXd u = ProjectTvBall(Vec({3, 1}), 0.5);
  EXPECT_NEAR(u[0], 2.25, 1e-9);
  EXPECT_NEAR(u[1], 1.75, 1e-9);
}

TEST(ProjectTvBall, MatchesQpOracleOnSymmetricCase) {
  const VectorXd v = Vec({4, 0, 0, 4});
  const VectorXd u = ProjectTvBall(v, 2.0);
  EXPECT_NEAR(TotalVariation(u), 2.0, 1e-6);
  const VectorXd ref = QpProjectTvBall(v, 2.0);
  for (Index i = 0; i < v.size(); ++i) EXPECT_NEAR(u[i], ref[i], 1e-4) << i;
}

TEST(ProjectTvBall, ZeroRadiusGivesMean) {
  const VectorXd u = ProjectTvBall(Vec({1, 2, 6}), 0.0);
  EXPECT_EQ(u, VectorXd::Constant(3, 3.0));
}

TEST(ProjectTvBall, NegativeRadiusThrows) {
  EXPECT_THROW(ProjectTvBall(Vec({1, 2}), -0.1), ConfigError);
}

TEST(ProjectTvBall, RadiusRespectedAndTight) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> len(2, 80);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const VectorXd v = RandomNormal(len(gen), gen) * 3.0;
    const double radius = frac(gen) * TotalVariation(v);
    const double tv = TotalVariation(ProjectTvBall(v, radius));
    EXPECT_LE(tv, radius * (1 + 1e-8) + 1e-10);
    EXPECT_GE(tv, radius - std::max(1e-9, 1e-8 * radius) - 1e-12);
  }
}

TEST(ProjectTvBall, NonExpansiveAndIdempotent) {
  std::mt19937_64 gen(6);
  std::uniform_int_distribution<int> len(2, 30);
  std::uniform_real_distribution<double> rad(0.0, 4.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = len(gen);
    const VectorXd u = RandomNormal(n, gen) * 2.0;
    const VectorXd w = u + RandomNormal(n, gen) * 0.3;
    const double r = rad(gen);
    const VectorXd pu = ProjectTvBall(u, r);
    const VectorXd pw = ProjectTvBall(w, r);
    EXPECT_LE((pu - pw).norm(), (u - w).norm() * (1 + 1e-9) + 1e-9);
    EXPECT_LE((ProjectTvBall(pu, r) - pu).norm(), 1e-8);
  }
}

// ---------------------------------------------------------------- groups

TEST(FindGroups, MaximalRuns) {
  const GroupPartition g = FindGroups(Vec({0, 1, 2, 0, 0, 3, 0}));
  ASSERT_EQ(g.count(), 2);
  // 1-based {start 2, len 2} and {start 6, len 1}.
  EXPECT_EQ(g.groups[0], (Group{1, 2}));
  EXPECT_EQ(g.groups[1], (Group{5, 1}));
}

TEST(FindGroups, EdgeCases) {
  EXPECT_EQ(FindGroups(VectorXd::Zero(5)).count(), 0);
  const GroupPartition all = FindGroups(VectorXd::Ones(4));
  ASSERT_EQ(all.count(), 1);
  EXPECT_EQ(all.groups[0], (Group{0, 4}));
  EXPECT_EQ(FindGroups(VectorXd()).count(), 0);
}

// ---------------------------------------------------------------- S_eps

TEST(ProjectSEps, PerGroupClosedForm) {
  const VectorXd out = ProjectSEps(Vec({3, 1, 0, 0, 2, 2}), 0.5);
  const VectorXd expected = Vec({2.25, 1.75, 0, 0, 2, 2});
  for (Index i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], expected[i], 1e-9) << i;
}

TEST(ProjectSEps, SingletonGroupsPassThrough) {
  const VectorXd v = Vec({0, 4, 0});
  for (double eps : {0.0, 0.1, 10.0}) EXPECT_EQ(ProjectSEps(v, eps), v);
}

TEST(ProjectSEps, FeasibleInputUnchanged) {
  const VectorXd v = Vec({0, 1.0, 1.1, 1.05, 0, -2, -2.1});
  EXPECT_EQ(ProjectSEps(v, 0.1), v);
}

TEST(ProjectSEps, ZeroEpsilonFlattensEachGroup) {
  const VectorXd out = ProjectSEps(Vec({0, 1, 2, 3, 0, 5, -1, 0}), 0.0);
  EXPECT_EQ(out, Vec({0, 2, 2, 2, 0, 2, 2, 0}));
}

TEST(ProjectSEps, NegativeEpsilonThrows) {
  EXPECT_THROW(ProjectSEps(Vec({1, 2}), -1.0), ConfigError);
}

TEST(ProjectSEps, SupportPreservedAndFeasible) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> eps_dist(0.0, 0.5);
  for (int trial = 0; trial < 300; ++trial) {
    const VectorXd v = RandomSparse(60, 0.6, gen);
    const double eps = eps_dist(gen);
    const VectorXd out = ProjectSEps(v, eps);
    for (Index i = 0; i < v.size(); ++i) {
      if (v[i] == 0.0) EXPECT_EQ(out[i], 0.0);
    }
    EXPECT_TRUE(InSEps(out, eps));
  }
}

TEST(ProjectSEps, CompositeWithHardThresholdIsInBothSets) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 200; ++trial) {
    const VectorXd v = RandomNormal(100, gen);
    const Index k = 1 + trial % 40;
    const double eps = 0.01 * (trial % 20);
    const VectorXd out = ProjectSEps(HardThreshold(v, k), eps);
    EXPECT_LE((out.array() != 0.0).count(), k);
    EXPECT_TRUE(InSEps(out, eps));
  }
}

TEST(ProjectNonneg, ClampsNegatives) {
  EXPECT_EQ(ProjectNonneg(Vec({-1, 2})), Vec({0, 2}));
  const VectorXd v = Vec({0, 3, 1});
  EXPECT_EQ(ProjectNonneg(v), v);
  std::mt19937_64 gen(10);
  const VectorXd r = RandomNormal(50, gen);
  const VectorXd p = ProjectNonneg(r);
  for (Index i = 0; i < r.size(); ++i) EXPECT_TRUE(p[i] == r[i] || p[i] == 0.0);
}

}  // namespace
}  // namespace onebit
