#include "lp_interior_point.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netrecon::internal {
namespace {

// Largest alpha > 0 with v + alpha * dv >= 0 (infinity if unbounded).
double MaxStep(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

}  // namespace

LpResult SolveStandardFormLp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& c, const LpOptions& opts) {
  const Eigen::Index n = a.cols();
  LpResult result;

  // Starting point heuristic (Mehrotra).
  const Eigen::LDLT<Eigen::MatrixXd> aat(a * a.transpose());
  Eigen::VectorXd x = a.transpose() * aat.solve(b);
  Eigen::VectorXd lambda = aat.solve(a * c);
  Eigen::VectorXd s = c - a.transpose() * lambda;
  x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
  s.array() += std::max(-1.5 * s.minCoeff(), 0.0);
  const double xs = x.dot(s);
  x.array() += 0.5 * xs / std::max(s.sum(), std::numeric_limits<double>::min());
  s.array() += 0.5 * xs / std::max(x.sum(), std::numeric_limits<double>::min());
  // Guard degenerate starts such as b = 0.
  if (x.minCoeff() <= 0.0) x.array() += 1.0;
  if (s.minCoeff() <= 0.0) s.array() += 1.0;

  const double b_scale = 1.0 + b.norm();
  const double c_scale = 1.0 + c.norm();

  for (int it = 1; it <= opts.max_iterations; ++it) {
    result.iterations = it;
    const Eigen::VectorXd rb = a * x - b;
    const Eigen::VectorXd rc = a.transpose() * lambda + s - c;
    const double mu = x.dot(s) / static_cast<double>(n);
    const double pobj = c.dot(x);
    const double dobj = b.dot(lambda);
    if (rb.norm() / b_scale < opts.tolerance && rc.norm() / c_scale < opts.tolerance &&
        std::abs(pobj - dobj) / (1.0 + std::abs(pobj)) < opts.tolerance) {
      result.converged = true;
      break;
    }

    const Eigen::VectorXd d = x.cwiseQuotient(s);
    const Eigen::MatrixXd m = a * d.asDiagonal() * a.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    const bool use_llt = llt.info() == Eigen::Success;
    if (!use_llt) ldlt.compute(m);
    auto solve_m = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
      return use_llt ? Eigen::VectorXd(llt.solve(rhs)) : Eigen::VectorXd(ldlt.solve(rhs));
    };

    // Newton step for complementarity right-hand side r_xs.
    auto newton = [&](const Eigen::VectorXd& r_xs, Eigen::VectorXd* dx, Eigen::VectorXd* dl,
                      Eigen::VectorXd* ds) {
      const Eigen::VectorXd r_xs_over_s = r_xs.cwiseQuotient(s);
      *dl = solve_m(-rb - a * (r_xs_over_s + d.cwiseProduct(rc)));
      const Eigen::VectorXd atdl = a.transpose() * *dl;
      *dx = r_xs_over_s + d.cwiseProduct(rc + atdl);
      *ds = -rc - atdl;
    };

    Eigen::VectorXd dx_aff, dl_aff, ds_aff;
    newton(-x.cwiseProduct(s), &dx_aff, &dl_aff, &ds_aff);
    const double ap_aff = std::min(1.0, MaxStep(x, dx_aff));
    const double ad_aff = std::min(1.0, MaxStep(s, ds_aff));
    const double mu_aff =
        (x + ap_aff * dx_aff).dot(s + ad_aff * ds_aff) / static_cast<double>(n);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    Eigen::VectorXd dx, dl, ds;
    const Eigen::VectorXd r_xs =
        -x.cwiseProduct(s) - dx_aff.cwiseProduct(ds_aff) +
        Eigen::VectorXd::Constant(n, sigma * mu);
    newton(r_xs, &dx, &dl, &ds);
    const double ap = std::min(1.0, 0.995 * MaxStep(x, dx));
    const double ad = std::min(1.0, 0.995 * MaxStep(s, ds));
    x += ap * dx;
    lambda += ad * dl;
    s += ad * ds;
  }
  result.x = x;
  result.lambda = lambda;
  result.primal_objective = c.dot(x);
  result.dual_objective = b.dot(lambda);
  return result;
}

}  // namespace netrecon::internal
