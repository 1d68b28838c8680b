#ifndef NETRECON_DYNAMICS_H_
#define NETRECON_DYNAMICS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/graph.h"

namespace netrecon {

enum class IsolatedKind { kLogistic, kLinear };
enum class CouplingKind { kDiffusive, kSine };

// Orientation of the difference inside the coupling term:
//   kSelfMinusNeighbor:  alpha_ij * g(x_i - x_j)
//   kNeighborMinusSelf:  alpha_ij * g(x_j - x_i)
// with g = identity (diffusive) or sin (sine).
enum class CouplingSign { kSelfMinusNeighbor, kNeighborMinusSelf };

// User-supplied maps. Both must vanish at the resting state: f_i(0) = 0,
// h_ij(0, 0) = 0, and h_ij(0, v) != 0 for small v != 0.
using IsolatedMap = std::function<double(int node, double x)>;
using CouplingMap = std::function<double(int i, int j, double xi, double xj)>;

// x_i(t+1) = f_i(x_i(t)) + sum_j A_ij h_ij(x_i(t), x_j(t)).
class NetworkSystem {
 public:
  // Built-in families. alpha is N x N; alpha(i, j) must be > 0 on every edge.
  NetworkSystem(Graph graph, IsolatedKind isolated, std::vector<double> rates,
                CouplingKind coupling, CouplingSign sign, Eigen::MatrixXd alpha);

  // User-defined maps; spot-checks the resting-state conditions and throws
  // ParameterError when they fail.
  NetworkSystem(Graph graph, IsolatedMap isolated, CouplingMap coupling);

  const Graph& graph() const { return graph_; }
  int size() const { return graph_.size(); }
  bool is_custom() const { return custom_isolated_ != nullptr; }
  IsolatedKind isolated_kind() const { return isolated_kind_; }
  CouplingKind coupling_kind() const { return coupling_kind_; }
  CouplingSign coupling_sign() const { return coupling_sign_; }
  const std::vector<double>& rates() const { return rates_; }
  const Eigen::MatrixXd& alpha() const { return alpha_; }
  const VertexSet& in_neighbors(int i) const { return in_neighbors_[i]; }

  double Isolated(int i, double x) const;
  double Coupling(int i, int j, double xi, double xj) const;

 private:
  Graph graph_;
  std::vector<VertexSet> in_neighbors_;
  IsolatedKind isolated_kind_ = IsolatedKind::kLinear;
  CouplingKind coupling_kind_ = CouplingKind::kDiffusive;
  CouplingSign coupling_sign_ = CouplingSign::kSelfMinusNeighbor;
  std::vector<double> rates_;
  Eigen::MatrixXd alpha_;
  IsolatedMap custom_isolated_;
  CouplingMap custom_coupling_;
};

// Checks f_i(0) = 0, h_ij(0,0) = 0 and h_ij(0, v) != 0 at a few small v for
// every node and edge. Returns false on the first violation.
bool SatisfiesRestingStateConditions(const Graph& graph, const IsolatedMap& isolated,
                                     const CouplingMap& coupling);

// Parameter sampling for the built-in families.
struct SystemSpec {
  IsolatedKind isolated = IsolatedKind::kLogistic;
  std::vector<double> rate_choices = {1.2, 2.6, 3.0, 3.8};
  CouplingKind coupling = CouplingKind::kDiffusive;
  CouplingSign sign = CouplingSign::kSelfMinusNeighbor;
  // alpha drawn from Uniform[alpha_lo, alpha_hi); exact zeros are redrawn.
  double alpha_lo = 0.0;
  double alpha_hi = 1.0;
  // Draw the upper triangle and mirror it.
  bool symmetric_alpha = true;
};

// Rates are drawn uniformly from spec.rate_choices.
NetworkSystem SampleSystem(const Graph& graph, const SystemSpec& spec, std::uint64_t seed);

struct StateVector {
  Eigen::VectorXd values;
  std::optional<int> pinch_index;
  int time = 0;
};

struct Trajectory {
  int pinch_index = 0;
  double pinch_magnitude = 0.0;
  // states[t] for t = 0..T.
  std::vector<Eigen::VectorXd> states;

  int horizon() const { return static_cast<int>(states.size()) - 1; }
};

// x_i = eps * delta_iq. Throws ParameterError for eps == 0 or q out of range.
StateVector PinchInitial(int n, int q, double eps);

StateVector Step(const NetworkSystem& sys, const StateVector& x);
Eigen::VectorXd Step(const NetworkSystem& sys, const Eigen::VectorXd& x);

// One trajectory of length T+1 per pinched node q, started at
// PinchInitial(N, q, eps[q]).
std::vector<Trajectory> SimulatePinchedFamily(const NetworkSystem& sys,
                                              std::span<const double> eps, int horizon,
                                              int workers = 1);

// Pinch magnitudes drawn from Uniform[lo, hi).
std::vector<double> SamplePinchMagnitudes(int n, double lo, double hi, std::uint64_t seed);

// Indices with a nonzero entry (exact test).
VertexSet Support(const Eigen::VectorXd& x);

}  // namespace netrecon

#endif  // NETRECON_DYNAMICS_H_
