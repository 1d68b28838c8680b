#include "netrecon/dynamics_id.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "netrecon/errors.h"

namespace netrecon {
namespace {

std::string X(int v) { return "x" + std::to_string(v + 1); }

}  // namespace

Basis Basis::Constant() {
  Basis b;
  b.kind_ = Kind::kConstant;
  b.name_ = "1";
  return b;
}

Basis Basis::Linear(int a) {
  Basis b;
  b.kind_ = Kind::kLinear;
  b.a_ = a;
  b.name_ = X(a);
  return b;
}

Basis Basis::Product(int a, int c) {
  Basis b;
  b.kind_ = Kind::kProduct;
  b.a_ = a;
  b.b_ = c;
  b.name_ = a == c ? X(a) + "^2" : X(a) + "*" + X(c);
  return b;
}

Basis Basis::Difference(int a, int c) {
  Basis b;
  b.kind_ = Kind::kDifference;
  b.a_ = a;
  b.b_ = c;
  b.name_ = "(" + X(a) + "-" + X(c) + ")";
  return b;
}

Basis Basis::SineDifference(int a, int c) {
  Basis b;
  b.kind_ = Kind::kSineDifference;
  b.a_ = a;
  b.b_ = c;
  b.name_ = "sin(" + X(a) + "-" + X(c) + ")";
  return b;
}

Basis Basis::DiffusiveSum(int a, VertexSet group) {
  Basis b;
  b.kind_ = Kind::kDiffusiveSum;
  b.a_ = a;
  b.group_ = std::move(group);
  b.name_ = "sum_j(xj-" + X(a) + ")";
  return b;
}

Basis Basis::Custom(std::string name, std::function<double(const Eigen::VectorXd&)> fn) {
  if (!fn) throw ParameterError("custom basis needs a function");
  Basis b;
  b.kind_ = Kind::kCustom;
  b.name_ = std::move(name);
  b.fn_ = std::move(fn);
  return b;
}

double Basis::Evaluate(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case Kind::kConstant:
      return 1.0;
    case Kind::kLinear:
      return x(a_);
    case Kind::kProduct:
      return x(a_) * x(b_);
    case Kind::kDifference:
      return x(a_) - x(b_);
    case Kind::kSineDifference:
      return std::sin(x(a_) - x(b_));
    case Kind::kDiffusiveSum: {
      double s = 0.0;
      for (int j : group_) s += x(j) - x(a_);
      return s;
    }
    case Kind::kCustom:
      return fn_(x);
  }
  return 0.0;
}

Dictionary::Dictionary(std::vector<std::vector<Basis>> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.empty()) throw ParameterError("every node needs at least one dictionary term");
  }
}

int Dictionary::max_term_count() const {
  int best = 0;
  for (const auto& t : terms_) best = std::max(best, static_cast<int>(t.size()));
  return best;
}

OracleModel OracleDictionary(const NetworkSystem& sys) {
  if (sys.is_custom()) throw ParameterError("no oracle dictionary for user-defined maps");
  const int n = sys.size();
  const double coupling_sign =
      sys.coupling_sign() == CouplingSign::kNeighborMinusSelf ? 1.0 : -1.0;
  std::vector<std::vector<Basis>> terms(n);
  std::vector<Eigen::VectorXd> coefs(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> c;
    const double r = sys.rates()[i];
    terms[i].push_back(Basis::Linear(i));
    c.push_back(r);
    if (sys.isolated_kind() == IsolatedKind::kLogistic) {
      terms[i].push_back(Basis::Square(i));
      c.push_back(-r);
    }
    for (int j : sys.in_neighbors(i)) {
      terms[i].push_back(sys.coupling_kind() == CouplingKind::kDiffusive
                             ? Basis::Difference(j, i)
                             : Basis::SineDifference(j, i));
      c.push_back(coupling_sign * sys.alpha()(i, j));
    }
    coefs[i] = Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  }
  return OracleModel{Dictionary(std::move(terms)), std::move(coefs)};
}

namespace {

void CheckHorizon(std::span<const Trajectory> trajs, int horizon) {
  if (horizon < 1) throw ParameterError("horizon must be at least 1");
  for (const Trajectory& t : trajs) {
    if (t.horizon() < horizon) {
      throw ParameterError("trajectory " + std::to_string(t.pinch_index + 1) + " has " +
                           std::to_string(t.states.size()) + " states; need " +
                           std::to_string(horizon + 1));
    }
  }
}

}  // namespace

DictionaryMatrix BuildDictionaryMatrix(const Dictionary& dict, int node,
                                       std::span<const Trajectory> trajs, int horizon) {
  if (node < 0 || node >= dict.size()) throw ParameterError("node out of range");
  CheckHorizon(trajs, horizon);
  const auto& terms = dict.terms(node);
  DictionaryMatrix out;
  out.node = node;
  out.psi.resize(static_cast<Eigen::Index>(trajs.size()) * horizon,
                 static_cast<Eigen::Index>(terms.size()));
  Eigen::Index row = 0;
  for (const Trajectory& traj : trajs) {
    for (int t = 0; t < horizon; ++t, ++row) {
      for (std::size_t l = 0; l < terms.size(); ++l) {
        out.psi(row, static_cast<Eigen::Index>(l)) = terms[l].Evaluate(traj.states[t]);
      }
      out.rows.emplace_back(traj.pinch_index, t);
    }
  }
  return out;
}

Eigen::VectorXd StackTargets(int node, std::span<const Trajectory> trajs, int horizon) {
  CheckHorizon(trajs, horizon);
  Eigen::VectorXd out(static_cast<Eigen::Index>(trajs.size()) * horizon);
  Eigen::Index row = 0;
  for (const Trajectory& traj : trajs) {
    for (int t = 0; t < horizon; ++t) out(row++) = traj.states[t + 1](node);
  }
  return out;
}

int NumericalRank(const Eigen::MatrixXd& psi) {
  if (psi.size() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(psi).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = static_cast<double>(psi.cols()) * sv(0) * 1e-12;
  return static_cast<int>((sv.array() > cutoff).count());
}

Eigen::VectorXd FitCoefficients(const DictionaryMatrix& psi, const Eigen::VectorXd& targets) {
  if (targets.size() != psi.psi.rows()) {
    throw DimensionError("target length does not match dictionary rows");
  }
  const int s = static_cast<int>(psi.psi.cols());
  const int rank = NumericalRank(psi.psi);
  if (rank < s) {
    throw RankDeficiencyError("dictionary matrix of node " + std::to_string(psi.node + 1) +
                              " has rank " + std::to_string(rank) + " < " + std::to_string(s) +
                              " terms; the terms are not identifiable from these trajectories");
  }
  return psi.psi.colPivHouseholderQr().solve(targets);
}

LinearLibrary BuildLinearLibrary(std::span<const Trajectory> trajs, int horizon) {
  CheckHorizon(trajs, horizon);
  if (trajs.empty()) throw ParameterError("need at least one trajectory");
  const Eigen::Index n = trajs.front().states.front().size();
  const Eigen::Index rows = static_cast<Eigen::Index>(trajs.size()) * horizon;
  LinearLibrary lib;
  lib.features.resize(rows, n + 1);
  lib.targets.resize(rows, n);
  Eigen::Index row = 0;
  for (const Trajectory& traj : trajs) {
    for (int t = 0; t < horizon; ++t, ++row) {
      lib.features(row, 0) = 1.0;
      lib.features.row(row).tail(n) = traj.states[t].transpose();
      lib.targets.row(row) = traj.states[t + 1].transpose();
      lib.rows.emplace_back(traj.pinch_index, t);
    }
  }
  return lib;
}

std::vector<std::string> LinearLibraryTermNames(int n) {
  std::vector<std::string> names{"1"};
  for (int j = 0; j < n; ++j) names.push_back(X(j));
  return names;
}

namespace {

// Minimum-norm least squares restricted to the active columns.
Eigen::VectorXd FitActive(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                          const std::vector<int>& active) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(features.cols());
  if (active.empty()) return c;
  Eigen::MatrixXd sub(features.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) sub.col(k) = features.col(active[k]);
  const Eigen::VectorXd ck = sub.completeOrthogonalDecomposition().solve(y);
  for (std::size_t k = 0; k < active.size(); ++k) c(active[k]) = ck(k);
  return c;
}

}  // namespace

SparseRegressionResult SparseRegression(const Eigen::MatrixXd& features,
                                        const Eigen::MatrixXd& targets,
                                        const SparseRegressionOptions& opts) {
  if (features.rows() != targets.rows()) {
    throw DimensionError("features and targets need the same number of rows");
  }
  if (opts.threshold < 0.0 || opts.max_sweeps < 1) {
    throw ParameterError("threshold must be >= 0 and max_sweeps >= 1");
  }
  SparseRegressionResult result;
  result.coefficients.resize(targets.cols(), features.cols());
  std::vector<int> all(features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) all[j] = static_cast<int>(j);

  for (Eigen::Index node = 0; node < targets.cols(); ++node) {
    const Eigen::VectorXd y = targets.col(node);
    std::vector<int> active = all;
    Eigen::VectorXd c = FitActive(features, y, active);
    bool fixed_point = false;
    int sweep = 0;
    while (sweep < opts.max_sweeps) {
      ++sweep;
      std::vector<int> next;
      for (int j : active) {
        if (std::abs(c(j)) >= opts.threshold) next.push_back(j);
      }
      if (next == active) {
        fixed_point = true;
        break;
      }
      active = std::move(next);
      c = FitActive(features, y, active);
    }
    result.converged = result.converged && fixed_point;
    result.sweeps = std::max(result.sweeps, sweep);
    result.coefficients.row(node) = c.transpose();
  }
  result.residual = (features * result.coefficients.transpose() - targets).norm();
  return result;
}

Eigen::MatrixXd TrueLinearCoefficients(const NetworkSystem& sys) {
  if (sys.is_custom() || sys.isolated_kind() != IsolatedKind::kLinear ||
      sys.coupling_kind() != CouplingKind::kDiffusive) {
    throw ParameterError("true linear coefficients need linear dynamics with diffusive coupling");
  }
  const int n = sys.size();
  const double sign = sys.coupling_sign() == CouplingSign::kNeighborMinusSelf ? 1.0 : -1.0;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n + 1);
  for (int i = 0; i < n; ++i) {
    double diag = sys.rates()[i];
    for (int j : sys.in_neighbors(i)) {
      c(i, j + 1) = sign * sys.alpha()(i, j);
      diag -= sign * sys.alpha()(i, j);
    }
    c(i, i + 1) = diag;
  }
  return c;
}

double Mse(const Eigen::Ref<const Eigen::MatrixXd>& truth,
           const Eigen::Ref<const Eigen::MatrixXd>& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw DimensionError("MSE needs equal shapes");
  }
  if (truth.size() == 0) throw ParameterError("MSE of empty input");
  return (truth - estimate).squaredNorm() / static_cast<double>(truth.size());
}

}  // namespace netrecon
