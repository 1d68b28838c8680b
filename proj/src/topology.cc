#include "netrecon/topology.h"

#include <algorithm>
#include <string>

#include "netrecon/errors.h"
#include "netrecon/parallel.h"
#include "netrecon/random.h"

namespace netrecon {

Graph ReconstructTopology(std::span<const VertexSet> supports) {
  std::vector<VertexSet> level_sets(supports.begin(), supports.end());
  for (std::size_t q = 0; q < level_sets.size(); ++q) {
    auto& s = level_sets[q];
    s.erase(std::remove(s.begin(), s.end(), static_cast<int>(q)), s.end());
  }
  return AdjacencyFromLevelSets(level_sets);
}

Contingency EdgeContingency(const Graph& truth, const Graph& estimate) {
  if (truth.size() != estimate.size()) {
    throw DimensionError("graphs differ in size");
  }
  Contingency c;
  const int n = truth.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool t = truth.HasEdge(i, j);
      const bool e = estimate.HasEdge(i, j);
      if (t && e) {
        ++c.tp;
      } else if (!t && !e) {
        ++c.tn;
      } else if (e) {
        ++c.fp;
      } else {
        ++c.fn;
      }
    }
  }
  return c;
}

double EvaluateReconstruction(const Graph& truth, const Graph& estimate) {
  return Mcc(EdgeContingency(truth, estimate));
}

void RecoveryTally::Add(const RecoveryResult& r) {
  switch (r.status) {
    case RecoveryStatus::kConverged:
      ++converged;
      break;
    case RecoveryStatus::kMaxIter:
      ++max_iter;
      break;
    case RecoveryStatus::kInfeasible:
      ++infeasible;
      break;
    case RecoveryStatus::kNonUnique:
      ++non_unique;
      break;
  }
  iterations += r.iterations;
  max_residual = std::max(max_residual, r.residual);
}

std::vector<RecoveryResult> RecoverStates(const BasisPursuitSolver& solver,
                                          const MeasurementMatrix& m,
                                          std::span<const Eigen::VectorXd> states, int workers) {
  std::vector<RecoveryResult> out(states.size());
  ParallelFor(states.size(), workers,
              [&](std::size_t k) { out[k] = solver.Solve(Measure(m, states[k])); });
  return out;
}

ReconstructionReport ReconstructFromRecovered(std::span<const RecoveryResult> first_step,
                                              double tau, const Graph* truth) {
  ReconstructionReport report;
  report.tau = tau;
  report.per_q_supports.reserve(first_step.size());
  for (const RecoveryResult& r : first_step) {
    report.per_q_supports.push_back(ThresholdSupport(r.x_hat, tau));
    report.tally.Add(r);
  }
  report.adjacency_hat = ReconstructTopology(report.per_q_supports);
  if (truth != nullptr) report.mcc_vs_truth = EvaluateReconstruction(*truth, report.adjacency_hat);
  return report;
}

TopologyScenario MakeTopologyScenario(const NetworkSystem& sys, std::span<const double> eps,
                                      std::uint64_t matrix_seed, RecoveryConfig recovery) {
  TopologyScenario scenario;
  scenario.truth = sys.graph();
  scenario.matrix_seed = matrix_seed;
  scenario.recovery = recovery;
  for (const Trajectory& traj : SimulatePinchedFamily(sys, eps, 1)) {
    scenario.first_step.push_back(traj.states[1]);
  }
  return scenario;
}

std::uint64_t GridMatrixSeed(std::uint64_t matrix_seed, int measurements, int repeat) {
  return DeriveSeed(DeriveSeed(matrix_seed, static_cast<std::uint64_t>(measurements)),
                    static_cast<std::uint64_t>(repeat));
}

PcSearchResult CriticalMeasurementSearch(const TopologyScenario& scenario,
                                         const PcSearchOptions& opts) {
  const int n = scenario.truth.size();
  if (opts.taus.empty()) throw ParameterError("need at least one support threshold");
  if (opts.repeats < 1) throw ParameterError("repeat count must be positive");
  for (std::size_t k = 0; k < opts.grid.size(); ++k) {
    if (opts.grid[k] < 1 || opts.grid[k] >= n) {
      throw ParameterError("grid values must lie in [1, N-1]");
    }
    if (k > 0 && opts.grid[k] <= opts.grid[k - 1]) {
      throw ParameterError("grid must be strictly increasing");
    }
  }
  if (static_cast<int>(scenario.first_step.size()) != n) {
    throw DimensionError("scenario needs one first-step state per node");
  }

  PcSearchResult result;
  result.critical.assign(opts.taus.size(), std::nullopt);
  for (int p : opts.grid) {
    PcGridPoint point;
    point.measurements = p;
    point.mcc.assign(opts.taus.size(), 0.0);
    for (int rep = 0; rep < opts.repeats; ++rep) {
      const MeasurementMatrix m =
          opts.nested ? NestedGaussianMatrix(p, n, GridMatrixSeed(scenario.matrix_seed, 0, rep))
                      : GaussianMatrix(p, n, GridMatrixSeed(scenario.matrix_seed, p, rep));
      const BasisPursuitSolver solver(m, scenario.recovery);
      const auto recovered = RecoverStates(solver, m, scenario.first_step, opts.workers);
      for (const auto& r : recovered) point.tally.Add(r);
      for (std::size_t k = 0; k < opts.taus.size(); ++k) {
        point.mcc[k] += *ReconstructFromRecovered(recovered, opts.taus[k], &scenario.truth)
                             .mcc_vs_truth;
      }
    }
    for (std::size_t k = 0; k < opts.taus.size(); ++k) {
      point.mcc[k] /= opts.repeats;
      if (!result.critical[k] && point.mcc[k] > opts.mcc_target) result.critical[k] = p;
    }
    result.grid.push_back(std::move(point));
  }
  return result;
}

}  // namespace netrecon
