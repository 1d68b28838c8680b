#ifndef NETRECON_LP_INTERIOR_POINT_H_
#define NETRECON_LP_INTERIOR_POINT_H_

#include <Eigen/Dense>

namespace netrecon::internal {

struct LpOptions {
  int max_iterations = 200;
  // Relative primal/dual infeasibility and duality gap at termination.
  double tolerance = 1e-12;
};

struct LpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  int iterations = 0;
  bool converged = false;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

// Mehrotra predictor-corrector for  min c'x  s.t.  A x = b, x >= 0.
// A must have full row rank.
LpResult SolveStandardFormLp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& c, const LpOptions& opts);

}  // namespace netrecon::internal

#endif  // NETRECON_LP_INTERIOR_POINT_H_
