#ifndef NETRECON_TOPOLOGY_H_
#define NETRECON_TOPOLOGY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/dynamics.h"
#include "netrecon/graph.h"
#include "netrecon/measurement.h"
#include "netrecon/metrics.h"
#include "netrecon/sparse_recovery.h"

namespace netrecon {

// L1(q) = supp(x^q(1)) \ {q} for each q, assembled into an adjacency matrix.
Graph ReconstructTopology(std::span<const VertexSet> supports);

// Contingency over the off-diagonal adjacency entries.
Contingency EdgeContingency(const Graph& truth, const Graph& estimate);
// MCC over the off-diagonal adjacency entries.
double EvaluateReconstruction(const Graph& truth, const Graph& estimate);

struct RecoveryTally {
  int converged = 0;
  int max_iter = 0;
  int infeasible = 0;
  int non_unique = 0;
  long iterations = 0;
  double max_residual = 0.0;

  void Add(const RecoveryResult& r);
};

struct ReconstructionReport {
  Graph adjacency_hat{1};
  std::vector<VertexSet> per_q_supports;
  std::optional<double> mcc_vs_truth;
  int measurements = 0;
  double tau = 0.0;
  RecoveryTally tally;
};

// Measures each state with m and solves basis pursuit; results[k] belongs to
// states[k]. Runs on up to `workers` threads.
std::vector<RecoveryResult> RecoverStates(const BasisPursuitSolver& solver,
                                          const MeasurementMatrix& m,
                                          std::span<const Eigen::VectorXd> states, int workers);

// Thresholds the recovered x^q(1) (index q) at tau and rebuilds the graph.
ReconstructionReport ReconstructFromRecovered(std::span<const RecoveryResult> first_step,
                                              double tau, const Graph* truth = nullptr);

// Fixed network realization whose topology is reconstructed at varying P.
struct TopologyScenario {
  Graph truth{1};
  // x^q(1) for q = 0..N-1.
  std::vector<Eigen::VectorXd> first_step;
  std::uint64_t matrix_seed = 0;
  RecoveryConfig recovery;
};

// Simulates one step from the q-pinched states.
TopologyScenario MakeTopologyScenario(const NetworkSystem& sys, std::span<const double> eps,
                                      std::uint64_t matrix_seed, RecoveryConfig recovery);

struct PcSearchOptions {
  double mcc_target = 0.99;
  std::vector<int> grid;
  // Each grid point is scored at every threshold from one set of recoveries.
  std::vector<double> taus = {1e-9};
  // Independent measurement matrices per grid point; MCC is averaged.
  int repeats = 1;
  // Grid points share one row-nested matrix per repeat (adding rows only
  // shrinks the feasible set); otherwise every P gets an independent draw.
  bool nested = true;
  int workers = 1;
};

struct PcGridPoint {
  int measurements = 0;
  // mcc[k] belongs to taus[k].
  std::vector<double> mcc;
  RecoveryTally tally;
};

struct PcSearchResult {
  std::vector<PcGridPoint> grid;
  // Smallest grid P with MCC > target, per threshold; nullopt if none.
  std::vector<std::optional<int>> critical;
};

// Matrix seed for grid point P and repeat r.
std::uint64_t GridMatrixSeed(std::uint64_t matrix_seed, int measurements, int repeat);

PcSearchResult CriticalMeasurementSearch(const TopologyScenario& scenario,
                                         const PcSearchOptions& opts);

}  // namespace netrecon

#endif  // NETRECON_TOPOLOGY_H_
