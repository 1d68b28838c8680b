#ifndef NETRECON_DYNAMICS_ID_H_
#define NETRECON_DYNAMICS_ID_H_

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/dynamics.h"
#include "netrecon/graph.h"

namespace netrecon {

// One candidate basis function psi(x) of the full state vector.
class Basis {
 public:
  enum class Kind {
    kConstant,        // 1
    kLinear,          // x_a
    kProduct,         // x_a * x_b (x_a^2 when a == b)
    kDifference,      // x_a - x_b
    kSineDifference,  // sin(x_a - x_b)
    kDiffusiveSum,    // sum_{j in group} (x_j - x_a)
    kCustom,
  };

  static Basis Constant();
  static Basis Linear(int a);
  static Basis Product(int a, int b);
  static Basis Square(int a) { return Product(a, a); }
  static Basis Difference(int a, int b);
  static Basis SineDifference(int a, int b);
  static Basis DiffusiveSum(int a, VertexSet group);
  static Basis Custom(std::string name, std::function<double(const Eigen::VectorXd&)> fn);

  double Evaluate(const Eigen::VectorXd& x) const;
  Kind kind() const { return kind_; }
  // Human-readable term name with 1-based indices, e.g. "x3*x5".
  const std::string& name() const { return name_; }

 private:
  Kind kind_ = Kind::kConstant;
  int a_ = -1;
  int b_ = -1;
  VertexSet group_;
  std::string name_;
  std::function<double(const Eigen::VectorXd&)> fn_;
};

// Per-node candidate terms psi_i^1..psi_i^{s_i}.
class Dictionary {
 public:
  explicit Dictionary(std::vector<std::vector<Basis>> terms);

  int size() const { return static_cast<int>(terms_.size()); }
  const std::vector<Basis>& terms(int node) const { return terms_.at(node); }
  int term_count(int node) const { return static_cast<int>(terms_.at(node).size()); }
  int max_term_count() const;

 private:
  std::vector<std::vector<Basis>> terms_;
};

// Exact dictionary for a built-in system together with its true coefficients.
// Linear/logistic isolated part: {x_i} or {x_i, x_i^2}; diffusive coupling
// adds (x_j - x_i) per in-neighbor, sine coupling sin(x_j - x_i).
struct OracleModel {
  Dictionary dictionary{{}};
  std::vector<Eigen::VectorXd> coefficients;
};
OracleModel OracleDictionary(const NetworkSystem& sys);

// Rows (q, t) for every given trajectory (in order) and t = 0..horizon-1.
struct DictionaryMatrix {
  int node = 0;
  Eigen::MatrixXd psi;
  std::vector<std::pair<int, int>> rows;
};

DictionaryMatrix BuildDictionaryMatrix(const Dictionary& dict, int node,
                                       std::span<const Trajectory> trajs, int horizon);

// x_node^q(t+1) stacked in the same (q, t) order as BuildDictionaryMatrix.
Eigen::VectorXd StackTargets(int node, std::span<const Trajectory> trajs, int horizon);

// Numerical rank with cutoff s_i * sigma_max * 1e-12.
int NumericalRank(const Eigen::MatrixXd& psi);

// Least-squares coefficients psi^+ targets. Throws RankDeficiencyError when
// psi lacks full column rank.
Eigen::VectorXd FitCoefficients(const DictionaryMatrix& psi, const Eigen::VectorXd& targets);

// Library {1, x_1, ..., x_N} over rows (q, t), t = 0..horizon-1, with one
// target column per node holding x(t+1).
struct LinearLibrary {
  Eigen::MatrixXd features;
  Eigen::MatrixXd targets;
  std::vector<std::pair<int, int>> rows;
};
LinearLibrary BuildLinearLibrary(std::span<const Trajectory> trajs, int horizon);
// Names "1", "x1", ..., "xN".
std::vector<std::string> LinearLibraryTermNames(int n);

struct SparseRegressionOptions {
  double threshold = 0.05;
  int max_sweeps = 20;
};

struct SparseRegressionResult {
  // Row i holds the coefficients of node i over the library columns.
  Eigen::MatrixXd coefficients;
  bool converged = true;
  int sweeps = 0;
  // Frobenius norm of features * coefficients^T - targets.
  double residual = 0.0;
};

// Sequentially thresholded least squares, one target column at a time.
SparseRegressionResult SparseRegression(const Eigen::MatrixXd& features,
                                        const Eigen::MatrixXd& targets,
                                        const SparseRegressionOptions& opts = {});

// Coefficient matrix (N x (N+1)) of a linear-coupled built-in system over the
// linear library. Throws ParameterError for non-linear systems.
Eigen::MatrixXd TrueLinearCoefficients(const NetworkSystem& sys);

// Mean squared entrywise error; vectors and matrices alike.
double Mse(const Eigen::Ref<const Eigen::MatrixXd>& truth,
           const Eigen::Ref<const Eigen::MatrixXd>& estimate);

}  // namespace netrecon

#endif  // NETRECON_DYNAMICS_ID_H_
