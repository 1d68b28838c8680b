#include "l1_admm.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace netrecon::internal {
namespace {

constexpr double kTiny = 1e-300;
// Residual balancing: adapt rho when one normalized residual dominates.
constexpr double kBalanceRatio = 10.0;
constexpr double kRhoFactor = 2.0;
constexpr int kBalanceInterval = 5;
// Balancing may move rho at most this far from its starting value.
constexpr double kRhoRange = 1e4;

std::vector<int> NonzeroIndices(const Eigen::VectorXd& z) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) != 0.0) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

// Least squares on the columns in `support`, then a KKT check: find lambda
// with phi_S^T lambda = sign(x_S) close to `lambda_hint` and verify
// |phi_j^T lambda| <= 1 elsewhere. Success proves x is an l1 minimizer.
bool PolishSupport(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                   const std::vector<int>& support, const Eigen::VectorXd& lambda_hint,
                   const AdmmOptions& opts, Eigen::VectorXd* x_out) {
  const Eigen::Index p = phi.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(support.size());
  if (k == 0 || k > p) return false;
  Eigen::MatrixXd sub(p, k);
  for (Eigen::Index c = 0; c < k; ++c) sub.col(c) = phi.col(support[c]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
  if (qr.rank() < k) return false;
  const Eigen::VectorXd xs = qr.solve(y);
  const double scale = std::max(1.0, y.norm());
  if ((sub * xs - y).norm() > opts.feasibility_tol * scale) return false;

  Eigen::VectorXd sign(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    if (xs(c) == 0.0) return false;
    sign(c) = xs(c) > 0.0 ? 1.0 : -1.0;
  }
  // lambda = hint + sub (sub^T sub)^{-1} (sign - sub^T hint)
  const Eigen::VectorXd gap = sign - sub.transpose() * lambda_hint;
  const Eigen::MatrixXd gram = sub.transpose() * sub;
  const Eigen::VectorXd lambda = lambda_hint + sub * gram.ldlt().solve(gap);
  const Eigen::VectorXd g = phi.transpose() * lambda;
  std::vector<char> on_support(phi.cols(), 0);
  for (int j : support) on_support[j] = 1;
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    if (!on_support[j] && std::abs(g(j)) > 1.0 + opts.certificate_slack) return false;
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    if (std::abs(g(support[c]) - sign(c)) > 1e-8) return false;
  }
  x_out->setZero(phi.cols());
  for (Eigen::Index c = 0; c < k; ++c) (*x_out)(support[c]) = xs(c);
  return true;
}

// Denoising counterpart. With support S and signs fixed, minimizing
// sign^T x_S over the ellipsoid ||phi_S x_S - y|| <= xi is closed form:
// x_S = x_ls - t G^{-1} sign, t chosen so the constraint is tight. The
// multiplier is 1/t, which gives the certificate off the support. Starting
// from the ADMM support, swap indices until the certificate holds.
bool PolishBall(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, double xi,
                const Eigen::VectorXd& z, const AdmmOptions& opts, Eigen::VectorXd* x_out) {
  const Eigen::Index n = phi.cols();
  const Eigen::Index p = phi.rows();
  std::vector<int> support = NonzeroIndices(z);
  std::vector<double> signs;
  for (int j : support) signs.push_back(z(j) > 0.0 ? 1.0 : -1.0);

  for (Eigen::Index step = 0; step < 4 * p; ++step) {
    const Eigen::Index k = static_cast<Eigen::Index>(support.size());
    if (k == 0 || k > p) return false;
    Eigen::MatrixXd sub(p, k);
    Eigen::VectorXd sign(k);
    for (Eigen::Index c = 0; c < k; ++c) {
      sub.col(c) = phi.col(support[c]);
      sign(c) = signs[c];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() < k) return false;
    const Eigen::VectorXd x_ls = qr.solve(y);
    const Eigen::VectorXd ls_residual = y - sub * x_ls;
    std::vector<char> on_support(n, 0);
    for (int j : support) on_support[j] = 1;

    auto add_best = [&](const Eigen::VectorXd& score) {
      Eigen::Index best = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!on_support[j] && (best < 0 || std::abs(score(j)) > std::abs(score(best)))) best = j;
      }
      if (best < 0) return false;
      support.push_back(static_cast<int>(best));
      signs.push_back(score(best) > 0.0 ? 1.0 : -1.0);
      return true;
    };

    if (ls_residual.norm() >= xi) {
      // Support too small to reach the ball.
      if (!add_best(phi.transpose() * ls_residual)) return false;
      continue;
    }
    const Eigen::VectorXd v = (sub.transpose() * sub).ldlt().solve(sign);
    const double q = sign.dot(v);
    if (!(q > 0.0)) return false;
    const double t = std::sqrt((xi * xi - ls_residual.squaredNorm()) / q);
    const Eigen::VectorXd xs = x_ls - t * v;

    Eigen::Index flipped = -1;
    for (Eigen::Index c = 0; c < k; ++c) {
      if (xs(c) * sign(c) <= 0.0) {
        flipped = c;
        break;
      }
    }
    if (flipped >= 0) {
      support.erase(support.begin() + flipped);
      signs.erase(signs.begin() + flipped);
      continue;
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index c = 0; c < k; ++c) x(support[c]) = xs(c);
    const Eigen::VectorXd g = -(phi.transpose() * (phi * x - y)) / t;
    Eigen::VectorXd off = g;
    for (int j : support) off(j) = 0.0;
    if (off.lpNorm<Eigen::Infinity>() <= 1.0 + opts.certificate_slack) {
      *x_out = std::move(x);
      return true;
    }
    if (!add_best(off)) return false;
  }
  return false;
}

}  // namespace

GramSolver::GramSolver(const Eigen::MatrixXd& phi, double shift) {
  Eigen::MatrixXd gram = phi * phi.transpose();
  gram.diagonal().array() += shift;
  llt_.compute(gram);
  if (llt_.info() != Eigen::Success) {
    full_rank_ = false;
    cod_.compute(gram);
    return;
  }
  // LLT can succeed on numerically singular Gram matrices; check the pivots.
  const Eigen::VectorXd diag = llt_.matrixLLT().diagonal();
  if (diag.minCoeff() <= 1e-7 * diag.maxCoeff()) {
    full_rank_ = false;
    cod_.compute(gram);
  }
}

Eigen::VectorXd GramSolver::Solve(const Eigen::VectorXd& rhs) const {
  return full_rank_ ? Eigen::VectorXd(llt_.solve(rhs)) : Eigen::VectorXd(cod_.solve(rhs));
}

Eigen::VectorXd SoftThreshold(const Eigen::VectorXd& v, double kappa) {
  return (v.array() - kappa).max(0.0) - (-v.array() - kappa).max(0.0);
}

AdmmResult SolveBasisPursuitAdmm(const Eigen::MatrixXd& phi, const GramSolver& gram,
                                 const Eigen::VectorXd& y, const AdmmOptions& opts) {
  const Eigen::Index n = phi.cols();
  AdmmResult result;
  result.x = Eigen::VectorXd::Zero(n);
  const double y_scale = std::max(1.0, y.norm());
  if (y.norm() == 0.0) {
    result.converged = true;
    result.certified = true;
    return result;
  }

  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v - phi.transpose() * gram.Solve(phi * v - y);
  };

  const Eigen::VectorXd x0 = project(Eigen::VectorXd::Zero(n));
  if ((phi * x0 - y).norm() > opts.feasibility_tol * y_scale * 1e3) {
    result.infeasible = true;
    result.x = x0;
    return result;
  }
  const double scale = x0.lpNorm<Eigen::Infinity>();
  const double rho0 = 1.0 / scale;
  double rho = rho0;
  const double eps_abs = std::sqrt(static_cast<double>(n)) * opts.abs_tol;

  Eigen::VectorXd x = x0;
  Eigen::VectorXd z = SoftThreshold(x0, 1.0 / rho);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z_old(n);
  std::vector<int> last_support;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    result.iterations = it;
    x = project(z - u);
    const Eigen::VectorXd x_relaxed = opts.over_relaxation * x + (1.0 - opts.over_relaxation) * z;
    z_old = z;
    z = SoftThreshold(x_relaxed + u, 1.0 / rho);
    u += x_relaxed - z;

    const double r = (x - z).norm();
    const double s = rho * (z - z_old).norm();
    const double primal_ref = std::max({x.norm(), z.norm(), kTiny});
    const double dual_ref = std::max(rho * u.norm(), kTiny);
    const bool done = r <= eps_abs * scale + opts.rel_tol * primal_ref &&
                      s <= eps_abs + opts.rel_tol * dual_ref;

    if (done || it % opts.polish_interval == 0) {
      std::vector<int> support = NonzeroIndices(z);
      if (done || support == last_support) {
        // rho * u approximates phi^T lambda; recover lambda by least squares.
        const Eigen::VectorXd lambda_hint = gram.Solve(phi * (rho * u));
        Eigen::VectorXd polished;
        if (PolishSupport(phi, y, support, lambda_hint, opts, &polished)) {
          result.x = std::move(polished);
          result.converged = true;
          result.certified = true;
          return result;
        }
      }
      last_support = std::move(support);
    }
    if (done) {
      result.x = z;
      result.converged = true;
      return result;
    }

    if (it % kBalanceInterval == 0) {
      const double r_norm = r / primal_ref;
      const double s_norm = s / dual_ref;
      if (r_norm > kBalanceRatio * s_norm && rho < rho0 * kRhoRange) {
        rho *= kRhoFactor;
        u /= kRhoFactor;
      } else if (s_norm > kBalanceRatio * r_norm && rho > rho0 / kRhoRange) {
        rho /= kRhoFactor;
        u *= kRhoFactor;
      }
    }
  }
  result.x = z;
  return result;
}

AdmmResult SolveBasisPursuitDenoiseAdmm(const Eigen::MatrixXd& phi, const GramSolver& shifted,
                                        const Eigen::VectorXd& y, double xi,
                                        const AdmmOptions& opts) {
  const Eigen::Index n = phi.cols();
  const Eigen::Index p = phi.rows();
  AdmmResult result;
  result.x = Eigen::VectorXd::Zero(n);
  if (y.norm() <= xi) {
    result.converged = true;
    return result;
  }

  // (I + phi^T phi)^{-1} b = b - phi^T (I + phi phi^T)^{-1} phi b.
  auto solve_x = [&](const Eigen::VectorXd& b) -> Eigen::VectorXd {
    return b - phi.transpose() * shifted.Solve(phi * b);
  };
  auto project_ball = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const Eigen::VectorXd d = v - y;
    const double norm = d.norm();
    return norm <= xi ? v : Eigen::VectorXd(y + d * (xi / norm));
  };

  const double scale = std::max((phi.transpose() * y).lpNorm<Eigen::Infinity>(), kTiny);
  const double rho0 = 1.0 / scale;
  double rho = rho0;
  const double eps_abs = std::sqrt(static_cast<double>(n + p)) * opts.abs_tol;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = x;
  Eigen::VectorXd w = project_ball(Eigen::VectorXd::Zero(p));
  Eigen::VectorXd u1 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u2 = Eigen::VectorXd::Zero(p);
  std::vector<int> last_support;
  std::vector<int> last_polished;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    result.iterations = it;
    x = solve_x(z - u1 + phi.transpose() * (w - u2));
    const Eigen::VectorXd phix = phi * x;
    const Eigen::VectorXd z_old = z;
    const Eigen::VectorXd w_old = w;
    z = SoftThreshold(x + u1, 1.0 / rho);
    w = project_ball(phix + u2);
    u1 += x - z;
    u2 += phix - w;

    const double r = std::sqrt((x - z).squaredNorm() + (phix - w).squaredNorm());
    const double s = rho * ((z - z_old) + phi.transpose() * (w - w_old)).norm();
    const double primal_ref =
        std::max({std::sqrt(x.squaredNorm() + phix.squaredNorm()),
                  std::sqrt(z.squaredNorm() + w.squaredNorm()), kTiny});
    const double dual_ref = std::max(rho * (u1 + phi.transpose() * u2).norm(), kTiny);
    const bool done = r <= eps_abs * scale + opts.rel_tol * primal_ref &&
                      s <= eps_abs + opts.rel_tol * dual_ref;
    if (done || it % opts.polish_interval == 0) {
      std::vector<int> support = NonzeroIndices(z);
      Eigen::VectorXd polished;
      if ((done || support == last_support) && support != last_polished &&
          PolishBall(phi, y, xi, z, opts, &polished)) {
        result.x = std::move(polished);
        result.converged = true;
        result.certified = true;
        return result;
      }
      if (done || support == last_support) last_polished = support;
      last_support = std::move(support);
    }
    if (done) {
      result.converged = true;
      break;
    }
    if (it % kBalanceInterval == 0) {
      const double r_norm = r / primal_ref;
      const double s_norm = s / dual_ref;
      if (r_norm > kBalanceRatio * s_norm && rho < rho0 * kRhoRange) {
        rho *= kRhoFactor;
        u1 /= kRhoFactor;
        u2 /= kRhoFactor;
      } else if (s_norm > kBalanceRatio * r_norm && rho > rho0 / kRhoRange) {
        rho /= kRhoFactor;
        u1 *= kRhoFactor;
        u2 *= kRhoFactor;
      }
    }
  }
  result.x = z;
  return result;
}

}  // namespace netrecon::internal
