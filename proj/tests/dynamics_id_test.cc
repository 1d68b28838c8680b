#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "netrecon/dynamics.h"
#include "netrecon/dynamics_id.h"
#include "netrecon/errors.h"
#include "netrecon/graph.h"

namespace netrecon {
namespace {

static const double kTolerance = 1e-8;

Trajectory Manual(int q, std::vector<Eigen::VectorXd> states) {
  Trajectory t;
  t.pinch_index = q;
  t.pinch_magnitude = states.front()(q);
  t.states = std::move(states);
  return t;
}

TEST(DynamicsId, BasisNamesAndValues) {
  const Eigen::Vector3d x(0.5, -1.0, 2.0);
  EXPECT_DOUBLE_EQ(Basis::Constant().Evaluate(x), 1.0);
  EXPECT_DOUBLE_EQ(Basis::Linear(2).Evaluate(x), 2.0);
  EXPECT_DOUBLE_EQ(Basis::Product(0, 2).Evaluate(x), 1.0);
  EXPECT_DOUBLE_EQ(Basis::Square(1).Evaluate(x), 1.0);
  EXPECT_DOUBLE_EQ(Basis::Difference(2, 0).Evaluate(x), 1.5);
  EXPECT_DOUBLE_EQ(Basis::SineDifference(2, 0).Evaluate(x), std::sin(1.5));
  EXPECT_DOUBLE_EQ(Basis::DiffusiveSum(0, {1, 2}).Evaluate(x), -1.5 + 1.5);
  EXPECT_EQ(Basis::Linear(2).name(), "x3");
  EXPECT_EQ(Basis::Product(2, 4).name(), "x3*x5");
}

TEST(DynamicsId, SingleEntryMatrix) {
  const Dictionary dict({{Basis::Linear(0)}});
  const std::vector<Trajectory> trajs = {
      Manual(0, {Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 1.0)})};
  const DictionaryMatrix psi = BuildDictionaryMatrix(dict, 0, trajs, 1);
  ASSERT_EQ(psi.psi.rows(), 1);
  ASSERT_EQ(psi.psi.cols(), 1);
  EXPECT_DOUBLE_EQ(psi.psi(0, 0), 0.5);

  // x(t+1) = 2 x(t) from one equation.
  const Eigen::VectorXd target = StackTargets(0, trajs, 1);
  EXPECT_NEAR(FitCoefficients(psi, target)(0), 2.0, kTolerance);
  EXPECT_NEAR(FitCoefficients(psi, Eigen::VectorXd::Zero(1))(0), 0.0, kTolerance);
  EXPECT_THROW(BuildDictionaryMatrix(dict, 0, trajs, 2), ParameterError);
}

TEST(DynamicsId, QuadraticRow) {
  const Dictionary dict({{Basis::Linear(0), Basis::Square(0)}});
  const std::vector<Trajectory> trajs = {
      Manual(0, {Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 0.1)})};
  const DictionaryMatrix psi = BuildDictionaryMatrix(dict, 0, trajs, 1);
  EXPECT_DOUBLE_EQ(psi.psi(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(psi.psi(0, 1), 0.25);
}

TEST(DynamicsId, DiffusiveDictionaryIsFullRank) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = GenerateErdosRenyi(20, 0.15, seed);
    SystemSpec spec;
    spec.isolated = IsolatedKind::kLinear;
    const NetworkSystem sys = SampleSystem(g, spec, seed);
    const auto trajs = SimulatePinchedFamily(sys, SamplePinchMagnitudes(20, 0.1, 0.9, seed), 1);
    std::vector<std::vector<Basis>> terms;
    for (int i = 0; i < 20; ++i) {
      terms.push_back({Basis::Linear(i)});
      if (!g.InNeighbors(i).empty()) terms.back().push_back(Basis::DiffusiveSum(i, g.InNeighbors(i)));
    }
    const Dictionary dict(terms);
    for (int i = 0; i < 20; ++i) {
      const DictionaryMatrix psi = BuildDictionaryMatrix(dict, i, trajs, 1);
      EXPECT_EQ(NumericalRank(psi.psi), dict.term_count(i));
    }
  }
}

TEST(DynamicsId, TwoNodeExactIdentification) {
  Graph g(2);
  g.AddEdge(1, 0);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(2, 2);
  alpha(1, 0) = 1.0;
  const NetworkSystem sys(g, IsolatedKind::kLinear, {3.0, 3.0}, CouplingKind::kDiffusive,
                          CouplingSign::kSelfMinusNeighbor, alpha);
  const auto trajs = SimulatePinchedFamily(sys, std::vector<double>{0.2, 0.4}, 1);
  const Dictionary dict({{Basis::Linear(0), Basis::Difference(1, 0)},
                         {Basis::Linear(1), Basis::Difference(0, 1)}});
  const Eigen::VectorXd c0 =
      FitCoefficients(BuildDictionaryMatrix(dict, 0, trajs, 1), StackTargets(0, trajs, 1));
  const Eigen::VectorXd c1 =
      FitCoefficients(BuildDictionaryMatrix(dict, 1, trajs, 1), StackTargets(1, trajs, 1));
  EXPECT_NEAR(c0(0), 3.0, kTolerance);
  EXPECT_NEAR(c0(1), 0.0, kTolerance);
  EXPECT_NEAR(c1(0), 3.0, kTolerance);
  // alpha (x_i - x_j) = -alpha (x_j - x_i).
  EXPECT_NEAR(c1(1), -1.0, kTolerance);
}

TEST(DynamicsId, OracleDictionaryRecoversCoefficients) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = GenerateErdosRenyi(15, 0.2, seed);
    SystemSpec spec;
    spec.isolated = seed % 2 ? IsolatedKind::kLinear : IsolatedKind::kLogistic;
    spec.coupling = seed % 3 ? CouplingKind::kDiffusive : CouplingKind::kSine;
    const NetworkSystem sys = SampleSystem(g, spec, seed + 1);
    const OracleModel model = OracleDictionary(sys);
    // Two steps separate x_i from x_i^2 through the neighbours' pinches.
    const auto trajs = SimulatePinchedFamily(sys, SamplePinchMagnitudes(15, 0.1, 0.5, seed + 2), 2);
    for (int i = 0; i < 15; ++i) {
      const DictionaryMatrix psi = BuildDictionaryMatrix(model.dictionary, i, trajs, 2);
      const Eigen::VectorXd target = StackTargets(i, trajs, 2);
      const Eigen::VectorXd c = FitCoefficients(psi, target);
      EXPECT_LT((c - model.coefficients[i]).cwiseAbs().maxCoeff(), kTolerance);
      EXPECT_LT((psi.psi * c - target).cwiseAbs().maxCoeff(), kTolerance);
    }
  }
}

TEST(DynamicsId, ShortSingleTrajectoryIsRankDeficient) {
  const Graph g = GenerateErdosRenyi(12, 0.3, 4);
  const NetworkSystem sys = SampleSystem(g, {}, 5);
  const OracleModel model = OracleDictionary(sys);
  const auto trajs = SimulatePinchedFamily(sys, SamplePinchMagnitudes(12, 0.1, 0.5, 6), 12);
  for (int i = 0; i < 12; ++i) {
    const int s = model.dictionary.term_count(i);
    const std::vector<Trajectory> one = {trajs[i]};
    for (int t = 1; t < s; ++t) {
      const DictionaryMatrix psi = BuildDictionaryMatrix(model.dictionary, i, one, t);
      EXPECT_THROW(FitCoefficients(psi, StackTargets(i, one, t)), RankDeficiencyError);
    }
  }
}

TEST(DynamicsId, TargetLengthMismatch) {
  const Dictionary dict({{Basis::Linear(0)}});
  const std::vector<Trajectory> trajs = {
      Manual(0, {Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 1.0)})};
  EXPECT_THROW(FitCoefficients(BuildDictionaryMatrix(dict, 0, trajs, 1), Eigen::Vector2d(1, 2)),
               DimensionError);
}

NetworkSystem LinearSystem(std::uint64_t seed) {
  const Graph g = GenerateErdosRenyi(20, 0.1, seed);
  SystemSpec spec;
  spec.isolated = IsolatedKind::kLinear;
  spec.sign = CouplingSign::kNeighborMinusSelf;
  spec.alpha_lo = 0.1;
  spec.alpha_hi = 0.3;
  return SampleSystem(g, spec, seed + 1);
}

TEST(DynamicsId, SparseRegressionOnExactStates) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const NetworkSystem sys = LinearSystem(seed);
    const auto trajs = SimulatePinchedFamily(sys, SamplePinchMagnitudes(20, 0.1, 0.9, seed), 3);
    const LinearLibrary lib = BuildLinearLibrary(trajs, 3);
    const SparseRegressionResult r = SparseRegression(lib.features, lib.targets);
    const Eigen::MatrixXd truth = TrueLinearCoefficients(sys);
    EXPECT_TRUE(r.converged);
    EXPECT_LT((r.coefficients - truth).cwiseAbs().maxCoeff(), 1e-6);
    for (Eigen::Index i = 0; i < truth.rows(); ++i) {
      for (Eigen::Index j = 0; j < truth.cols(); ++j) {
        EXPECT_EQ(truth(i, j) != 0.0, r.coefficients(i, j) != 0.0);
      }
    }
  }
}

TEST(DynamicsId, OverThresholdingGivesZeroModel) {
  const NetworkSystem sys = LinearSystem(3);
  const auto trajs = SimulatePinchedFamily(sys, SamplePinchMagnitudes(20, 0.1, 0.9, 4), 3);
  const LinearLibrary lib = BuildLinearLibrary(trajs, 3);
  SparseRegressionOptions opts;
  opts.threshold = 100.0;
  const SparseRegressionResult r = SparseRegression(lib.features, lib.targets, opts);
  EXPECT_EQ(r.coefficients, Eigen::MatrixXd::Zero(20, 21));
  EXPECT_NEAR(r.residual, lib.targets.norm(), 1e-12);
}

TEST(DynamicsId, ZeroThresholdIsLeastSquares) {
  const NetworkSystem sys = LinearSystem(6);
  const auto trajs = SimulatePinchedFamily(sys, SamplePinchMagnitudes(20, 0.1, 0.9, 7), 3);
  const LinearLibrary lib = BuildLinearLibrary(trajs, 3);
  SparseRegressionOptions opts;
  opts.threshold = 0.0;
  const SparseRegressionResult r = SparseRegression(lib.features, lib.targets, opts);
  const Eigen::MatrixXd ls =
      lib.features.colPivHouseholderQr().solve(lib.targets).transpose();
  EXPECT_LT((r.coefficients - ls).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DynamicsId, Mse) {
  EXPECT_DOUBLE_EQ(Mse(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2)), 0.0);
  EXPECT_DOUBLE_EQ(Mse(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 1)), 0.5);
  const Eigen::Vector4d a(1, -2, 3, 0.5), b(0, 1, 2, 4);
  const Eigen::Vector4d pa(3, 0.5, 1, -2), pb(2, 4, 0, 1);
  EXPECT_DOUBLE_EQ(Mse(a, b), Mse(pa, pb));
  EXPECT_THROW(Mse(Eigen::Vector2d(1, 2), Eigen::Vector3d(1, 2, 3)), DimensionError);
}

}  // namespace
}  // namespace netrecon
