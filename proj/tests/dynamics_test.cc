#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "netrecon/dynamics.h"
#include "netrecon/errors.h"
#include "netrecon/graph.h"

namespace netrecon {
namespace {

static const double kTolerance = 1e-14;

// Two nodes, node 2 listens to node 1 with weight 1.
NetworkSystem TwoNode(IsolatedKind kind, double r) {
  Graph g(2);
  g.AddEdge(1, 0);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(2, 2);
  alpha(1, 0) = 1.0;
  return NetworkSystem(g, kind, {r, r}, CouplingKind::kDiffusive,
                       CouplingSign::kSelfMinusNeighbor, alpha);
}

TEST(Dynamics, PinchInitial) {
  const StateVector x = PinchInitial(4, 1, 0.7);
  EXPECT_EQ(x.values, Eigen::Vector4d(0, 0.7, 0, 0));
  EXPECT_EQ(x.pinch_index, 1);
  EXPECT_EQ(x.time, 0);
  EXPECT_EQ(PinchInitial(1, 0, -0.5).values(0), -0.5);
  EXPECT_THROW(PinchInitial(3, 2, 0.0), ParameterError);
  EXPECT_THROW(PinchInitial(3, 3, 1.0), ParameterError);
}

TEST(Dynamics, RestingState) {
  const Graph g = GenerateErdosRenyi(20, 0.2, 5);
  for (auto coupling : {CouplingKind::kDiffusive, CouplingKind::kSine}) {
    SystemSpec spec;
    spec.coupling = coupling;
    const NetworkSystem sys = SampleSystem(g, spec, 9);
    EXPECT_EQ(Step(sys, Eigen::VectorXd::Zero(20)), Eigen::VectorXd::Zero(20));
  }
}

TEST(Dynamics, HandEvaluatedStep) {
  const NetworkSystem logistic = TwoNode(IsolatedKind::kLogistic, 2.0);
  const Eigen::VectorXd next = Step(logistic, Eigen::Vector2d(0.5, 0.0));
  EXPECT_NEAR(next(0), 0.5, kTolerance);
  EXPECT_NEAR(next(1), -0.5, kTolerance);

  Graph g(2);
  g.AddEdge(1, 0);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(2, 2);
  alpha(1, 0) = 1.0;
  const NetworkSystem linear(g, IsolatedKind::kLinear, {3.0, 3.0}, CouplingKind::kDiffusive,
                             CouplingSign::kSelfMinusNeighbor, alpha);
  const Eigen::VectorXd lin = Step(linear, Eigen::Vector2d(0.2, 0.0));
  EXPECT_NEAR(lin(0), 0.6, kTolerance);
  EXPECT_NEAR(lin(1), -0.2, kTolerance);
}

TEST(Dynamics, StepAdvancesStateVector) {
  const NetworkSystem sys = TwoNode(IsolatedKind::kLogistic, 2.0);
  const StateVector x1 = Step(sys, PinchInitial(2, 0, 0.5));
  EXPECT_EQ(x1.time, 1);
  EXPECT_EQ(x1.pinch_index, 0);
  EXPECT_NEAR(x1.values(1), -0.5, kTolerance);
}

TEST(Dynamics, CouplingSignAndSine) {
  Graph g(2);
  g.AddEdge(1, 0);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(2, 2);
  alpha(1, 0) = 0.5;
  const NetworkSystem flipped(g, IsolatedKind::kLinear, {1.0, 1.0}, CouplingKind::kDiffusive,
                              CouplingSign::kNeighborMinusSelf, alpha);
  EXPECT_NEAR(Step(flipped, Eigen::Vector2d(0.4, 0.0))(1), 0.5 * 0.4, kTolerance);
  const NetworkSystem sine(g, IsolatedKind::kLinear, {1.0, 1.0}, CouplingKind::kSine,
                           CouplingSign::kNeighborMinusSelf, alpha);
  EXPECT_NEAR(Step(sine, Eigen::Vector2d(0.4, 0.0))(1), 0.5 * std::sin(0.4), kTolerance);
}

TEST(Dynamics, PinchedFamilySmallSystem) {
  const NetworkSystem sys = TwoNode(IsolatedKind::kLogistic, 2.0);
  const std::vector<double> eps = {0.5, 0.5};
  const auto trajs = SimulatePinchedFamily(sys, eps, 1);
  ASSERT_EQ(trajs.size(), 2u);
  EXPECT_NEAR(trajs[0].states[1](0), 0.5, kTolerance);
  EXPECT_NEAR(trajs[0].states[1](1), -0.5, kTolerance);
  // Nobody listens to node 2, but its own coupling to the silent node 1 still fires.
  EXPECT_NEAR(trajs[1].states[1](0), 0.0, kTolerance);
  EXPECT_NEAR(trajs[1].states[1](1), 2.0 * 0.5 * 0.5 + 1.0 * (0.5 - 0.0), kTolerance);
}

TEST(Dynamics, EmptyGraphKeepsSupport) {
  const Graph g(5);
  const NetworkSystem sys(g, IsolatedKind::kLogistic, std::vector<double>(5, 2.0),
                          CouplingKind::kDiffusive, CouplingSign::kSelfMinusNeighbor,
                          Eigen::MatrixXd::Zero(5, 5));
  const std::vector<double> eps(5, 0.3);
  const auto trajs = SimulatePinchedFamily(sys, eps, 1);
  for (int q = 0; q < 5; ++q) {
    EXPECT_EQ(Support(trajs[q].states[1]), VertexSet({q}));
    EXPECT_NEAR(trajs[q].states[1](q), 2.0 * 0.3 * 0.7, kTolerance);
  }
}

TEST(Dynamics, ZeroHorizon) {
  const NetworkSystem sys = SampleSystem(GenerateErdosRenyi(6, 0.4, 1), {}, 2);
  const std::vector<double> eps = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto trajs = SimulatePinchedFamily(sys, eps, 0);
  for (int q = 0; q < 6; ++q) {
    ASSERT_EQ(trajs[q].states.size(), 1u);
    EXPECT_EQ(trajs[q].states[0], PinchInitial(6, q, eps[q]).values);
  }
  const std::vector<double> with_zero = {0.1, 0.0, 0.3, 0.4, 0.5, 0.6};
  EXPECT_THROW(SimulatePinchedFamily(sys, with_zero, 1), ParameterError);
}

TEST(Dynamics, SupportGrowthBound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = GenerateErdosRenyi(30, 0.08, seed);
    const NetworkSystem sys = SampleSystem(g, {}, seed + 100);
    const auto eps = SamplePinchMagnitudes(30, 0.1, 0.9, seed + 200);
    const auto trajs = SimulatePinchedFamily(sys, eps, 3);
    const int delta = g.MaxOutDegree();
    for (const auto& traj : trajs) {
      for (int t = 0; t < 3; ++t) {
        std::vector<bool> reach(30, false);
        for (int j : Support(traj.states[t])) {
          reach[j] = true;
          for (int i : g.LevelSet(j)) reach[i] = true;
        }
        const VertexSet next = Support(traj.states[t + 1]);
        for (int i : next) EXPECT_TRUE(reach[i]);
        EXPECT_LE(static_cast<double>(next.size()), std::pow(delta + 1.0, t + 1));
      }
    }
  }
}

TEST(Dynamics, SampledWeightsArePositiveOnEdges) {
  const Graph g = GenerateErdosRenyi(40, 0.2, 8);
  const NetworkSystem sys = SampleSystem(g, {}, 4);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      if (g.HasEdge(i, j)) {
        EXPECT_GT(sys.alpha()(i, j), 0.0);
        EXPECT_EQ(sys.alpha()(i, j), sys.alpha()(j, i));
      }
    }
    const double r = sys.rates()[i];
    EXPECT_TRUE(r == 1.2 || r == 2.6 || r == 3.0 || r == 3.8);
  }
}

TEST(Dynamics, CustomMapsAreValidated) {
  Graph g(2);
  g.AddEdge(1, 0);
  const NetworkSystem ok(g, [](int, double x) { return 0.5 * x; },
                         [](int, int, double xi, double xj) { return xj - xi; });
  EXPECT_NEAR(Step(ok, Eigen::Vector2d(0.4, 0.0))(1), 0.4, kTolerance);
  EXPECT_THROW(NetworkSystem(g, [](int, double x) { return x + 1.0; },
                             [](int, int, double xi, double xj) { return xj - xi; }),
               ParameterError);
  EXPECT_THROW(NetworkSystem(g, [](int, double x) { return x; },
                             [](int, int, double, double) { return 0.0; }),
               ParameterError);
}

TEST(Dynamics, RejectsNonPositiveEdgeWeight) {
  Graph g(2);
  g.AddEdge(1, 0);
  EXPECT_THROW(NetworkSystem(g, IsolatedKind::kLinear, {1.0, 1.0}, CouplingKind::kDiffusive,
                             CouplingSign::kSelfMinusNeighbor, Eigen::MatrixXd::Zero(2, 2)),
               ParameterError);
}

TEST(Dynamics, ParallelSimulationMatchesSerial) {
  const NetworkSystem sys = SampleSystem(GenerateErdosRenyi(50, 0.05, 2), {}, 3);
  const auto eps = SamplePinchMagnitudes(50, 0.1, 0.9, 4);
  const auto a = SimulatePinchedFamily(sys, eps, 4, 1);
  const auto b = SimulatePinchedFamily(sys, eps, 4, 4);
  for (int q = 0; q < 50; ++q) {
    for (int t = 0; t <= 4; ++t) EXPECT_EQ(a[q].states[t], b[q].states[t]);
  }
}

}  // namespace
}  // namespace netrecon
