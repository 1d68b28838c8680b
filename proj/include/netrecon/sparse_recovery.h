#ifndef NETRECON_SPARSE_RECOVERY_H_
#define NETRECON_SPARSE_RECOVERY_H_

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/graph.h"
#include "netrecon/measurement.h"

namespace netrecon {

enum class SolverBackend {
  // Alternating minimization on x = z with soft-thresholding, residual-balanced
  // penalty and support polishing.
  kOperatorSplitting,
  // Primal-dual interior point on the LP  min 1'(u + v)  s.t.  phi (u - v) = y.
  kLinearProgram,
};

struct RecoveryConfig {
  // ||phi x - y||_2 <= feasibility_tol * max(1, ||y||_2).
  double feasibility_tol = 1e-10;
  double objective_tol = 1e-8;
  int max_iterations = 100000;
  // Entries with |x_i| > support_threshold form the support.
  double support_threshold = 1e-9;
  SolverBackend backend = SolverBackend::kOperatorSplitting;
  // Column budget for the exhaustive l0 search.
  int l0_max_columns = 20;
};

enum class RecoveryStatus { kConverged, kMaxIter, kInfeasible, kNonUnique };

std::string ToString(RecoveryStatus status);

struct RecoveryResult {
  Eigen::VectorXd x_hat;
  VertexSet support;
  int iterations = 0;
  // ||phi x_hat - y||_2.
  double residual = 0.0;
  double objective = 0.0;
  RecoveryStatus status = RecoveryStatus::kConverged;
  // Basis pursuit: a dual certificate proving l1 optimality was found.
  bool certified = false;
  // l0 oracle: every distinct minimizer at the minimal sparsity.
  std::vector<Eigen::VectorXd> minimizers;
};

// { i : |x_i| > tau }.
VertexSet ThresholdSupport(const Eigen::VectorXd& x, double tau);

// Exhaustive (P0) search over supports of size 0..s_max. Each support is
// solved by least squares and accepted when its residual meets the
// feasibility tolerance. Returns the sparsest feasible vector; kNonUnique
// (with all minimizers) when several distinct ones share that sparsity,
// kInfeasible when none exists up to s_max.
RecoveryResult L0Oracle(const MeasurementMatrix& m, const Eigen::VectorXd& y, int s_max,
                        const RecoveryConfig& cfg = {});

// Reusable (P1) solver: caches the factorizations of phi so many right-hand
// sides can be solved against one matrix. Solve() is const and may be called
// concurrently.
class BasisPursuitSolver {
 public:
  BasisPursuitSolver(const MeasurementMatrix& m, RecoveryConfig cfg = {});
  ~BasisPursuitSolver();
  BasisPursuitSolver(BasisPursuitSolver&&) noexcept;
  BasisPursuitSolver& operator=(BasisPursuitSolver&&) noexcept;

  // min ||x||_1 s.t. phi x = y.
  RecoveryResult Solve(const Eigen::VectorXd& y) const;
  // min ||x||_1 s.t. ||phi x - y||_2 <= xi.
  RecoveryResult SolveDenoise(const Eigen::VectorXd& y, double xi) const;

  const RecoveryConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RecoveryResult BasisPursuit(const MeasurementMatrix& m, const Eigen::VectorXd& y,
                            const RecoveryConfig& cfg = {});
RecoveryResult BasisPursuitDenoise(const MeasurementMatrix& m, const Eigen::VectorXd& y,
                                   double xi, const RecoveryConfig& cfg = {});

}  // namespace netrecon

#endif  // NETRECON_SPARSE_RECOVERY_H_
