#ifndef NETRECON_L1_ADMM_H_
#define NETRECON_L1_ADMM_H_

#include <Eigen/Dense>

namespace netrecon::internal {

// Solves (phi phi^T + shift I) v = rhs. Falls back to a rank-revealing
// decomposition when the Cholesky factorization fails (rank-deficient phi
// with shift = 0), returning the minimum-norm least-squares solution.
class GramSolver {
 public:
  GramSolver(const Eigen::MatrixXd& phi, double shift);
  Eigen::VectorXd Solve(const Eigen::VectorXd& rhs) const;
  bool full_rank() const { return full_rank_; }

 private:
  bool full_rank_ = true;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
};

struct AdmmOptions {
  int max_iterations = 100000;
  // Stopping tolerances; the absolute part is scaled by the magnitude of the
  // minimum-norm solution so that the iteration is scale-equivariant.
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double over_relaxation = 1.5;
  // Polish the current support every this many iterations.
  int polish_interval = 10;
  // Relative feasibility requirement for accepting a polished point.
  double feasibility_tol = 1e-10;
  // Slack allowed on |phi^T lambda|_inf <= 1 off the support.
  double certificate_slack = 1e-9;
};

struct AdmmResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;
  bool certified = false;
  bool infeasible = false;
};

// min ||x||_1 s.t. phi x = y. `gram` must solve with shift 0.
AdmmResult SolveBasisPursuitAdmm(const Eigen::MatrixXd& phi, const GramSolver& gram,
                                 const Eigen::VectorXd& y, const AdmmOptions& opts);

// min ||x||_1 s.t. ||phi x - y|| <= xi. `shifted` must solve with shift 1.
AdmmResult SolveBasisPursuitDenoiseAdmm(const Eigen::MatrixXd& phi, const GramSolver& shifted,
                                        const Eigen::VectorXd& y, double xi,
                                        const AdmmOptions& opts);

Eigen::VectorXd SoftThreshold(const Eigen::VectorXd& v, double kappa);

}  // namespace netrecon::internal

#endif  // NETRECON_L1_ADMM_H_
