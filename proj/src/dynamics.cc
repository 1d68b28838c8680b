#include "netrecon/dynamics.h"

#include <cmath>
#include <string>
#include <utility>

#include "netrecon/errors.h"
#include "netrecon/parallel.h"
#include "netrecon/random.h"

namespace netrecon {
namespace {

std::vector<VertexSet> CollectInNeighbors(const Graph& g) {
  std::vector<VertexSet> out(g.size());
  for (int i = 0; i < g.size(); ++i) out[i] = g.InNeighbors(i);
  return out;
}

}  // namespace

NetworkSystem::NetworkSystem(Graph graph, IsolatedKind isolated, std::vector<double> rates,
                             CouplingKind coupling, CouplingSign sign, Eigen::MatrixXd alpha)
    : graph_(std::move(graph)),
      in_neighbors_(CollectInNeighbors(graph_)),
      isolated_kind_(isolated),
      coupling_kind_(coupling),
      coupling_sign_(sign),
      rates_(std::move(rates)),
      alpha_(std::move(alpha)) {
  const int n = graph_.size();
  if (static_cast<int>(rates_.size()) != n) {
    throw DimensionError("need one rate per node");
  }
  if (alpha_.rows() != n || alpha_.cols() != n) {
    throw DimensionError("coupling weights must be N x N");
  }
  for (int i = 0; i < n; ++i) {
    for (int j : in_neighbors_[i]) {
      if (!(alpha_(i, j) > 0.0)) {
        throw ParameterError("coupling weight on edge (" + std::to_string(i + 1) + ", " +
                             std::to_string(j + 1) + ") must be positive");
      }
    }
  }
}

NetworkSystem::NetworkSystem(Graph graph, IsolatedMap isolated, CouplingMap coupling)
    : graph_(std::move(graph)),
      in_neighbors_(CollectInNeighbors(graph_)),
      custom_isolated_(std::move(isolated)),
      custom_coupling_(std::move(coupling)) {
  if (!custom_isolated_ || !custom_coupling_) {
    throw ParameterError("custom system needs both an isolated map and a coupling map");
  }
  if (!SatisfiesRestingStateConditions(graph_, custom_isolated_, custom_coupling_)) {
    throw ParameterError("custom maps violate the resting-state conditions");
  }
}

double NetworkSystem::Isolated(int i, double x) const {
  if (custom_isolated_) return custom_isolated_(i, x);
  const double r = rates_[i];
  switch (isolated_kind_) {
    case IsolatedKind::kLogistic:
      return r * x * (1.0 - x);
    case IsolatedKind::kLinear:
      return r * x;
  }
  return 0.0;
}

double NetworkSystem::Coupling(int i, int j, double xi, double xj) const {
  if (custom_coupling_) return custom_coupling_(i, j, xi, xj);
  const double diff = coupling_sign_ == CouplingSign::kSelfMinusNeighbor ? xi - xj : xj - xi;
  switch (coupling_kind_) {
    case CouplingKind::kDiffusive:
      return alpha_(i, j) * diff;
    case CouplingKind::kSine:
      return alpha_(i, j) * std::sin(diff);
  }
  return 0.0;
}

bool SatisfiesRestingStateConditions(const Graph& graph, const IsolatedMap& isolated,
                                     const CouplingMap& coupling) {
  static constexpr double kProbes[] = {1e-3, -1e-3, 1e-2, -1e-2};
  for (int i = 0; i < graph.size(); ++i) {
    if (isolated(i, 0.0) != 0.0) return false;
    for (int j : graph.InNeighbors(i)) {
      if (coupling(i, j, 0.0, 0.0) != 0.0) return false;
      for (double v : kProbes) {
        if (coupling(i, j, 0.0, v) == 0.0) return false;
      }
    }
  }
  return true;
}

NetworkSystem SampleSystem(const Graph& graph, const SystemSpec& spec, std::uint64_t seed) {
  if (spec.rate_choices.empty()) throw ParameterError("rate choice set is empty");
  if (!(spec.alpha_lo < spec.alpha_hi) || spec.alpha_lo < 0.0) {
    throw ParameterError("coupling weight range must be a nonempty subset of [0, inf)");
  }
  const int n = graph.size();
  Rng rng = MakeRng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, spec.rate_choices.size() - 1);
  std::vector<double> rates(n);
  for (double& r : rates) r = spec.rate_choices[pick(rng)];

  std::uniform_real_distribution<double> weight(spec.alpha_lo, spec.alpha_hi);
  auto draw = [&] {
    double a = weight(rng);
    while (a == 0.0) a = weight(rng);
    return a;
  };
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = spec.symmetric_alpha ? i + 1 : 0; j < n; ++j) {
      if (i == j) continue;
      alpha(i, j) = draw();
      if (spec.symmetric_alpha) alpha(j, i) = alpha(i, j);
    }
  }
  return NetworkSystem(graph, spec.isolated, std::move(rates), spec.coupling, spec.sign,
                       std::move(alpha));
}

StateVector PinchInitial(int n, int q, double eps) {
  if (n < 1) throw ParameterError("state size must be positive");
  if (q < 0 || q >= n) throw ParameterError("pinch index out of range");
  if (eps == 0.0) throw ParameterError("pinch magnitude must be nonzero");
  StateVector s;
  s.values = Eigen::VectorXd::Zero(n);
  s.values(q) = eps;
  s.pinch_index = q;
  s.time = 0;
  return s;
}

Eigen::VectorXd Step(const NetworkSystem& sys, const Eigen::VectorXd& x) {
  const int n = sys.size();
  if (x.size() != n) throw DimensionError("state length does not match the graph");
  Eigen::VectorXd next(n);
  for (int i = 0; i < n; ++i) {
    double v = sys.Isolated(i, x(i));
    for (int j : sys.in_neighbors(i)) v += sys.Coupling(i, j, x(i), x(j));
    next(i) = v;
  }
  return next;
}

StateVector Step(const NetworkSystem& sys, const StateVector& x) {
  StateVector out;
  out.values = Step(sys, x.values);
  out.pinch_index = x.pinch_index;
  out.time = x.time + 1;
  return out;
}

std::vector<Trajectory> SimulatePinchedFamily(const NetworkSystem& sys,
                                              std::span<const double> eps, int horizon,
                                              int workers) {
  const int n = sys.size();
  if (horizon < 0) throw ParameterError("horizon must be nonnegative");
  if (static_cast<int>(eps.size()) != n) throw DimensionError("need one pinch magnitude per node");
  std::vector<Trajectory> out(n);
  // Validate up front so errors do not depend on scheduling.
  for (int q = 0; q < n; ++q) PinchInitial(n, q, eps[q]);
  ParallelFor(static_cast<std::size_t>(n), workers, [&](std::size_t idx) {
    const int q = static_cast<int>(idx);
    Trajectory& traj = out[q];
    traj.pinch_index = q;
    traj.pinch_magnitude = eps[q];
    traj.states.reserve(horizon + 1);
    traj.states.push_back(PinchInitial(n, q, eps[q]).values);
    for (int t = 0; t < horizon; ++t) traj.states.push_back(Step(sys, traj.states.back()));
  });
  return out;
}

std::vector<double> SamplePinchMagnitudes(int n, double lo, double hi, std::uint64_t seed) {
  if (!(lo < hi)) throw ParameterError("pinch magnitude range is empty");
  Rng rng = MakeRng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (double& e : out) {
    e = dist(rng);
    while (e == 0.0) e = dist(rng);
  }
  return out;
}

VertexSet Support(const Eigen::VectorXd& x) {
  VertexSet out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace netrecon
