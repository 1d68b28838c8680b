#ifndef NETRECON_MEASUREMENT_H_
#define NETRECON_MEASUREMENT_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace netrecon {

struct GaussianProvenance {
  std::uint64_t seed = 0;
  double variance = 0.0;
};

// P x N mean-field measurement matrix phi.
class MeasurementMatrix {
 public:
  // Explicit matrix; any shape with at least one row and column.
  explicit MeasurementMatrix(Eigen::MatrixXd phi);

  const Eigen::MatrixXd& phi() const { return phi_; }
  int rows() const { return static_cast<int>(phi_.rows()); }
  int cols() const { return static_cast<int>(phi_.cols()); }
  const std::optional<GaussianProvenance>& gaussian() const { return gaussian_; }

  friend MeasurementMatrix GaussianMatrix(int rows, int cols, std::uint64_t seed);
  friend MeasurementMatrix NestedGaussianMatrix(int rows, int cols, std::uint64_t seed);

 private:
  Eigen::MatrixXd phi_;
  std::optional<GaussianProvenance> gaussian_;
};

// Entries i.i.d. Normal(0, 1/P). Requires 1 <= P < N.
MeasurementMatrix GaussianMatrix(int rows, int cols, std::uint64_t seed);

// Same distribution, drawn row by row: for a fixed seed the first P rows of the
// P' > P matrix are the P-row matrix rescaled by sqrt(P / P').
MeasurementMatrix NestedGaussianMatrix(int rows, int cols, std::uint64_t seed);

// y = phi * x.
Eigen::VectorXd Measure(const MeasurementMatrix& m, const Eigen::VectorXd& x);

struct EnumerationLimits {
  int max_columns = 20;
  int max_sparsity = 6;
  // Relative singular-value cutoff (against sigma_max(phi)) for the
  // linear-dependence test.
  double rank_tolerance = 1e-10;
};

// Size of the smallest linearly dependent column subset. Returns
// min(P, N) + 1 if no such subset exists, so P + 1 for a full-spark matrix.
// Throws UnsupportedSizeError when N > limits.max_columns.
int Spark(const MeasurementMatrix& m, const EnumerationLimits& limits = {});
bool IsFullSpark(const MeasurementMatrix& m, const EnumerationLimits& limits = {});

// Exact restricted isometry constant
//   delta_s = max_{|S| = s} max(sigma_max(phi_S)^2 - 1, 1 - sigma_min(phi_S)^2).
double RipConstantExact(const MeasurementMatrix& m, int s, const EnumerationLimits& limits = {});

// Weak reconstruction condition P > 2 * max_out_degree + 1.
bool WtrcCheck(int measurements, int max_out_degree);

// c1 * P / log(N / P). Requires 1 <= P < N and c1 > 0.
double StrcGaussianBound(int n, int measurements, double c1 = 1.0);

// Erdos-Renyi form: N p + sqrt(2 N p log N) + 1 < c1 P / log(N / P).
bool ErBoundCheck(int n, double p, int measurements, double c1 = 1.0);

// Calls fn(subset) for every k-subset of [0, n) in lexicographic order; stops
// early when fn returns false. Returns false if stopped early.
bool ForEachCombination(int n, int k, const std::function<bool(const std::vector<int>&)>& fn);

// Mean-field records y^q(t), keyed by (q, t) with 0-based q.
class MeanFieldSet {
 public:
  void Add(int q, int t, Eigen::VectorXd y, int matrix_id = 0);
  const Eigen::VectorXd& Get(int q, int t) const;
  bool Contains(int q, int t) const { return records_.count({q, t}) != 0; }
  int MatrixId(int q) const;
  const std::map<std::pair<int, int>, Eigen::VectorXd>& records() const { return records_; }

 private:
  std::map<std::pair<int, int>, Eigen::VectorXd> records_;
  std::map<int, int> matrix_ids_;
};

// Matrix CSV: first line "P,N", then P comma-separated rows of N values.
void WriteMatrixCsv(std::ostream& out, const MeasurementMatrix& m);
MeasurementMatrix ReadMatrixCsv(std::istream& in);

// Mean-field CSV: header "q,t,k,y", 1-based q and k.
void WriteMeanFieldCsv(std::ostream& out, const MeanFieldSet& set);
MeanFieldSet ReadMeanFieldCsv(std::istream& in);

}  // namespace netrecon

#endif  // NETRECON_MEASUREMENT_H_
