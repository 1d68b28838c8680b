#include "netrecon/sparse_recovery.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <mutex>
#include <utility>

#include "l1_admm.h"
#include "lp_interior_point.h"
#include "netrecon/errors.h"

namespace netrecon {

std::string ToString(RecoveryStatus status) {
  switch (status) {
    case RecoveryStatus::kConverged:
      return "converged";
    case RecoveryStatus::kMaxIter:
      return "max_iter";
    case RecoveryStatus::kInfeasible:
      return "infeasible";
    case RecoveryStatus::kNonUnique:
      return "non_unique";
  }
  return "unknown";
}

VertexSet ThresholdSupport(const Eigen::VectorXd& x, double tau) {
  if (tau < 0.0) throw ParameterError("support threshold must be nonnegative");
  VertexSet out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > tau) out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

void ValidateConfig(const RecoveryConfig& cfg) {
  if (!(cfg.feasibility_tol > 0.0) || !(cfg.objective_tol > 0.0) ||
      !(cfg.support_threshold > 0.0) || cfg.max_iterations < 1) {
    throw ParameterError("recovery tolerances and iteration budget must be positive");
  }
}

void CheckRhs(const MeasurementMatrix& m, const Eigen::VectorXd& y) {
  if (y.size() != m.rows()) {
    throw DimensionError("measurement vector length " + std::to_string(y.size()) +
                         " does not match P=" + std::to_string(m.rows()));
  }
  if (!y.allFinite()) throw ParameterError("measurement vector is not finite");
}

void Finish(const MeasurementMatrix& m, const Eigen::VectorXd& y, const RecoveryConfig& cfg,
            RecoveryResult* r) {
  r->residual = (m.phi() * r->x_hat - y).norm();
  r->objective = r->x_hat.lpNorm<1>();
  r->support = ThresholdSupport(r->x_hat, cfg.support_threshold);
}

}  // namespace

RecoveryResult L0Oracle(const MeasurementMatrix& m, const Eigen::VectorXd& y, int s_max,
                        const RecoveryConfig& cfg) {
  ValidateConfig(cfg);
  CheckRhs(m, y);
  const int n = m.cols();
  if (n > cfg.l0_max_columns) {
    throw UnsupportedSizeError("l0 search limited to " + std::to_string(cfg.l0_max_columns) +
                               " columns, got " + std::to_string(n));
  }
  if (s_max < 0) throw ParameterError("s_max must be nonnegative");
  s_max = std::min(s_max, n);

  const double scale = std::max(1.0, y.norm());
  const double accept = cfg.feasibility_tol * scale;
  RecoveryResult result;
  result.x_hat = Eigen::VectorXd::Zero(n);

  if (y.norm() <= accept) {
    result.minimizers.push_back(result.x_hat);
    Finish(m, y, cfg, &result);
    return result;
  }

  for (int s = 1; s <= s_max; ++s) {
    std::vector<Eigen::VectorXd> found;
    ForEachCombination(n, s, [&](const std::vector<int>& cols) {
      ++result.iterations;
      Eigen::MatrixXd sub(m.rows(), s);
      for (int c = 0; c < s; ++c) sub.col(c) = m.phi().col(cols[c]);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
      if (qr.rank() < s) return true;
      const Eigen::VectorXd xs = qr.solve(y);
      if ((sub * xs - y).norm() > accept) return true;
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (int c = 0; c < s; ++c) x(cols[c]) = xs(c);
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Eigen::VectorXd& other) {
        return (other - x).lpNorm<Eigen::Infinity>() <= 1e-9 * scale;
      });
      if (!duplicate) found.push_back(std::move(x));
      return true;
    });
    if (!found.empty()) {
      result.x_hat = found.front();
      result.status = found.size() == 1 ? RecoveryStatus::kConverged : RecoveryStatus::kNonUnique;
      result.minimizers = std::move(found);
      Finish(m, y, cfg, &result);
      return result;
    }
  }
  result.status = RecoveryStatus::kInfeasible;
  Finish(m, y, cfg, &result);
  return result;
}

struct BasisPursuitSolver::Impl {
  Impl(const MeasurementMatrix& matrix, RecoveryConfig c)
      : m(matrix), cfg(c), gram(matrix.phi(), 0.0) {}

  internal::AdmmOptions AdmmOpts() const {
    internal::AdmmOptions o;
    o.max_iterations = cfg.max_iterations;
    o.feasibility_tol = cfg.feasibility_tol;
    return o;
  }

  const internal::GramSolver& Shifted() const {
    std::call_once(shifted_once, [&] {
      shifted = std::make_unique<internal::GramSolver>(m.phi(), 1.0);
    });
    return *shifted;
  }

  MeasurementMatrix m;
  RecoveryConfig cfg;
  internal::GramSolver gram;
  mutable std::once_flag shifted_once;
  mutable std::unique_ptr<internal::GramSolver> shifted;
};

BasisPursuitSolver::BasisPursuitSolver(const MeasurementMatrix& m, RecoveryConfig cfg) {
  ValidateConfig(cfg);
  impl_ = std::make_unique<Impl>(m, cfg);
}

BasisPursuitSolver::~BasisPursuitSolver() = default;
BasisPursuitSolver::BasisPursuitSolver(BasisPursuitSolver&&) noexcept = default;
BasisPursuitSolver& BasisPursuitSolver::operator=(BasisPursuitSolver&&) noexcept = default;

const RecoveryConfig& BasisPursuitSolver::config() const { return impl_->cfg; }

RecoveryResult BasisPursuitSolver::Solve(const Eigen::VectorXd& y) const {
  const MeasurementMatrix& m = impl_->m;
  const RecoveryConfig& cfg = impl_->cfg;
  CheckRhs(m, y);
  const double feasible = cfg.feasibility_tol * std::max(1.0, y.norm());
  RecoveryResult result;

  if (cfg.backend == SolverBackend::kLinearProgram) {
    const int n = m.cols();
    Eigen::MatrixXd a(m.rows(), 2 * n);
    a << m.phi(), -m.phi();
    internal::LpOptions lp;
    lp.max_iterations = std::min(cfg.max_iterations, 500);
    const internal::LpResult lr =
        internal::SolveStandardFormLp(a, y, Eigen::VectorXd::Ones(2 * n), lp);
    result.x_hat = lr.x.head(n) - lr.x.tail(n);
    result.iterations = lr.iterations;
    Finish(m, y, cfg, &result);
    const bool gap_ok = std::abs(lr.primal_objective - lr.dual_objective) <=
                        cfg.objective_tol * std::max(1.0, std::abs(lr.primal_objective));
    result.certified = lr.converged && gap_ok;
    if (result.residual > feasible * 1e3 && !impl_->gram.full_rank()) {
      result.status = RecoveryStatus::kInfeasible;
    } else {
      result.status = lr.converged && result.residual <= feasible * 1e3
                          ? RecoveryStatus::kConverged
                          : RecoveryStatus::kMaxIter;
    }
    return result;
  }

  const internal::AdmmResult ar =
      internal::SolveBasisPursuitAdmm(m.phi(), impl_->gram, y, impl_->AdmmOpts());
  result.x_hat = ar.x;
  result.iterations = ar.iterations;
  result.certified = ar.certified;
  Finish(m, y, cfg, &result);
  if (ar.infeasible) {
    result.status = RecoveryStatus::kInfeasible;
  } else if (ar.converged && result.residual <= feasible) {
    result.status = RecoveryStatus::kConverged;
  } else {
    result.status = RecoveryStatus::kMaxIter;
  }
  return result;
}

RecoveryResult BasisPursuitSolver::SolveDenoise(const Eigen::VectorXd& y, double xi) const {
  const MeasurementMatrix& m = impl_->m;
  const RecoveryConfig& cfg = impl_->cfg;
  CheckRhs(m, y);
  if (!(xi >= 0.0)) throw ParameterError("noise radius must be nonnegative");
  const double feasible = cfg.feasibility_tol * std::max(1.0, y.norm());
  if (xi <= feasible) return Solve(y);

  const internal::AdmmResult ar =
      internal::SolveBasisPursuitDenoiseAdmm(m.phi(), impl_->Shifted(), y, xi, impl_->AdmmOpts());
  RecoveryResult result;
  result.x_hat = ar.x;
  result.iterations = ar.iterations;
  result.certified = ar.certified;
  Finish(m, y, cfg, &result);
  // The ball constraint holds up to the ADMM residual.
  const bool inside = result.residual <= xi + std::sqrt(cfg.objective_tol) * std::max(1.0, y.norm());
  result.status = ar.converged && inside ? RecoveryStatus::kConverged : RecoveryStatus::kMaxIter;
  return result;
}

RecoveryResult BasisPursuit(const MeasurementMatrix& m, const Eigen::VectorXd& y,
                            const RecoveryConfig& cfg) {
  return BasisPursuitSolver(m, cfg).Solve(y);
}

RecoveryResult BasisPursuitDenoise(const MeasurementMatrix& m, const Eigen::VectorXd& y,
                                   double xi, const RecoveryConfig& cfg) {
  return BasisPursuitSolver(m, cfg).SolveDenoise(y, xi);
}

}  // namespace netrecon
