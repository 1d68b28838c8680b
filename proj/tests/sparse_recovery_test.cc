#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "netrecon/errors.h"
#include "netrecon/measurement.h"
#include "netrecon/random.h"
#include "netrecon/sparse_recovery.h"

namespace netrecon {
namespace {

MeasurementMatrix Small() {
  Eigen::MatrixXd phi(2, 3);
  phi << 1, 0, 1,
         0, 1, 1;
  return MeasurementMatrix(phi);
}

// s-sparse vector with entries of magnitude in [0.5, 1) and random signs.
Eigen::VectorXd SparseSignal(int n, int s, std::uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_real_distribution<double> mag(0.5, 1.0);
  std::bernoulli_distribution sign(0.5);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < s; ++k) x(idx[k]) = (sign(rng) ? 1.0 : -1.0) * mag(rng);
  return x;
}

TEST(SparseRecovery, ThresholdSupport) {
  EXPECT_EQ(ThresholdSupport(Eigen::Vector3d(0.5, 1e-12, -0.3), 1e-9), VertexSet({0, 2}));
  EXPECT_TRUE(ThresholdSupport(Eigen::VectorXd::Zero(4), 0.1).empty());
  EXPECT_TRUE(ThresholdSupport(Eigen::VectorXd::Constant(1, 0.5), 0.5).empty());
  EXPECT_EQ(ThresholdSupport(Eigen::Vector3d(0, 1e-300, 0), 0.0), VertexSet({1}));
}

TEST(SparseRecovery, L0SmallInstance) {
  const RecoveryResult r = L0Oracle(Small(), Eigen::Vector2d(0.7, 0), 1);
  EXPECT_EQ(r.status, RecoveryStatus::kConverged);
  ASSERT_EQ(r.minimizers.size(), 1u);
  EXPECT_NEAR((r.x_hat - Eigen::Vector3d(0.7, 0, 0)).norm(), 0.0, 1e-12);
  EXPECT_EQ(r.support, VertexSet({0}));
}

TEST(SparseRecovery, L0ZeroMeasurement) {
  const RecoveryResult r = L0Oracle(Small(), Eigen::Vector2d::Zero(), 2);
  EXPECT_EQ(r.status, RecoveryStatus::kConverged);
  EXPECT_EQ(r.x_hat, Eigen::Vector3d::Zero());
  EXPECT_TRUE(r.support.empty());
}

TEST(SparseRecovery, L0DuplicateColumnsAreNonUnique) {
  Eigen::MatrixXd phi(2, 3);
  phi << 1, 1, 0,
         2, 2, 1;
  const RecoveryResult r = L0Oracle(MeasurementMatrix(phi), phi.col(0), 2);
  EXPECT_EQ(r.status, RecoveryStatus::kNonUnique);
  ASSERT_EQ(r.minimizers.size(), 2u);
  EXPECT_NEAR((r.minimizers[0] - Eigen::Vector3d(1, 0, 0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((r.minimizers[1] - Eigen::Vector3d(0, 1, 0)).norm(), 0.0, 1e-12);
}

TEST(SparseRecovery, L0Infeasible) {
  Eigen::MatrixXd phi(3, 4);
  phi << 1, 0, 0, 1,
         0, 1, 0, 1,
         0, 0, 1, 1;
  const RecoveryResult r = L0Oracle(MeasurementMatrix(phi), Eigen::Vector3d(1, 2, 0), 1);
  EXPECT_EQ(r.status, RecoveryStatus::kInfeasible);
}

TEST(SparseRecovery, L0SizeLimit) {
  EXPECT_THROW(L0Oracle(GaussianMatrix(5, 25, 1), Eigen::VectorXd::Ones(5), 2),
               UnsupportedSizeError);
}

TEST(SparseRecovery, L0UniqueBelowHalfSpark) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const MeasurementMatrix m = GaussianMatrix(6, 12, seed);
    const int spark = Spark(m);
    for (int s = 1; 2 * s < spark; ++s) {
      const Eigen::VectorXd x = SparseSignal(12, s, seed * 10 + s);
      const RecoveryResult r = L0Oracle(m, Measure(m, x), s);
      EXPECT_EQ(r.status, RecoveryStatus::kConverged);
      EXPECT_LT((r.x_hat - x).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(SparseRecovery, BasisPursuitSmallInstance) {
  const RecoveryResult r = BasisPursuit(Small(), Eigen::Vector2d(0.7, 0));
  EXPECT_EQ(r.status, RecoveryStatus::kConverged);
  EXPECT_LT((r.x_hat - Eigen::Vector3d(0.7, 0, 0)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SparseRecovery, BasisPursuitZero) {
  const RecoveryResult r = BasisPursuit(GaussianMatrix(10, 30, 2), Eigen::VectorXd::Zero(10));
  EXPECT_EQ(r.status, RecoveryStatus::kConverged);
  EXPECT_EQ(r.x_hat, Eigen::VectorXd::Zero(30));
}

TEST(SparseRecovery, BasisPursuitExactRecovery) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MeasurementMatrix m = GaussianMatrix(40, 100, seed);
    const Eigen::VectorXd x = SparseSignal(100, 5, seed + 1000);
    const Eigen::VectorXd y = Measure(m, x);
    const RecoveryResult r = BasisPursuit(m, y);
    EXPECT_EQ(r.status, RecoveryStatus::kConverged);
    EXPECT_TRUE(r.certified);
    EXPECT_LT((r.x_hat - x).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LE(r.residual, 1e-10 * std::max(1.0, y.norm()));
  }
}

TEST(SparseRecovery, BackendsAgree) {
  RecoveryConfig lp;
  lp.backend = SolverBackend::kLinearProgram;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MeasurementMatrix m = GaussianMatrix(12, 30, seed);
    // Mix of recoverable and non-recoverable sparsities.
    const Eigen::VectorXd x = SparseSignal(30, 2 + static_cast<int>(seed % 5), seed + 50);
    const Eigen::VectorXd y = Measure(m, x);
    const RecoveryResult a = BasisPursuit(m, y);
    const RecoveryResult b = BasisPursuit(m, y, lp);
    EXPECT_EQ(b.status, RecoveryStatus::kConverged);
    EXPECT_NEAR(a.objective, b.objective, 1e-6 * std::max(1.0, a.objective));
    if (a.certified) EXPECT_LT((a.x_hat - b.x_hat).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(SparseRecovery, ScalingEquivariance) {
  const MeasurementMatrix m = GaussianMatrix(20, 50, 4);
  const Eigen::VectorXd y = Measure(m, SparseSignal(50, 4, 9));
  const BasisPursuitSolver solver(m);
  const Eigen::VectorXd base = solver.Solve(y).x_hat;
  for (double c : {-3.0, 0.25, 1e3}) {
    const Eigen::VectorXd scaled = solver.Solve(c * y).x_hat;
    EXPECT_LT((scaled - c * base).cwiseAbs().maxCoeff(), 1e-7 * std::max(1.0, std::abs(c)));
  }
}

TEST(SparseRecovery, Infeasible) {
  Eigen::MatrixXd phi(3, 4);
  phi << 1, 0, 1, 0,
         0, 1, 0, 1,
         1, 1, 1, 1;
  const RecoveryResult r = BasisPursuit(MeasurementMatrix(phi), Eigen::Vector3d(1, 1, 5));
  EXPECT_EQ(r.status, RecoveryStatus::kInfeasible);
}

TEST(SparseRecovery, IterationBudget) {
  RecoveryConfig cfg;
  cfg.max_iterations = 3;
  const MeasurementMatrix m = GaussianMatrix(30, 100, 1);
  const RecoveryResult r = BasisPursuit(m, Measure(m, SparseSignal(100, 8, 2)), cfg);
  EXPECT_EQ(r.status, RecoveryStatus::kMaxIter);
  EXPECT_LE(r.iterations, 3);
}

TEST(SparseRecovery, DenoiseLargeRadiusGivesZero) {
  const MeasurementMatrix m = GaussianMatrix(20, 50, 3);
  const Eigen::VectorXd y = Measure(m, SparseSignal(50, 3, 4));
  const RecoveryResult r = BasisPursuitDenoise(m, y, y.norm());
  EXPECT_EQ(r.x_hat, Eigen::VectorXd::Zero(50));
}

TEST(SparseRecovery, DenoiseZeroRadiusIsBasisPursuit) {
  const MeasurementMatrix m = GaussianMatrix(20, 50, 3);
  const Eigen::VectorXd y = Measure(m, SparseSignal(50, 3, 4));
  const RecoveryResult a = BasisPursuitDenoise(m, y, 0.0);
  const RecoveryResult b = BasisPursuit(m, y);
  EXPECT_LT((a.x_hat - b.x_hat).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SparseRecovery, DenoiseStability) {
  const MeasurementMatrix m = GaussianMatrix(40, 100, 0);
  const Eigen::VectorXd x = SparseSignal(100, 5, 1000);
  const Eigen::VectorXd clean = Measure(m, x);
  Rng rng = MakeRng(77);
  std::normal_distribution<double> normal;
  Eigen::VectorXd dir(40);
  for (int k = 0; k < 40; ++k) dir(k) = normal(rng);
  dir.normalize();
  const BasisPursuitSolver solver(m);
  double prev_err = 0.0;
  for (double xi : {1e-5, 1e-4, 1e-3}) {
    const RecoveryResult r = solver.SolveDenoise(clean + xi * dir, xi);
    EXPECT_EQ(r.status, RecoveryStatus::kConverged);
    EXPECT_LE(r.residual, xi * (1.0 + 1e-6));
    const double err = (r.x_hat - x).norm();
    const double k = err / xi;
    EXPECT_TRUE(std::isfinite(k));
    EXPECT_LT(k, 100.0);
    EXPECT_GE(err, prev_err * 0.5);
    prev_err = err;
  }
}

TEST(SparseRecovery, DimensionMismatch) {
  EXPECT_THROW(BasisPursuit(Small(), Eigen::Vector3d(1, 2, 3)), DimensionError);
  EXPECT_THROW(L0Oracle(Small(), Eigen::Vector3d(1, 2, 3), 1), DimensionError);
}

}  // namespace
}  // namespace netrecon
