#include "netrecon/measurement.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "netrecon/errors.h"
#include "netrecon/io.h"
#include "netrecon/random.h"

namespace netrecon {

MeasurementMatrix::MeasurementMatrix(Eigen::MatrixXd phi) : phi_(std::move(phi)) {
  if (phi_.rows() < 1 || phi_.cols() < 1) {
    throw ParameterError("measurement matrix needs at least one row and one column");
  }
}

MeasurementMatrix GaussianMatrix(int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || rows >= cols) {
    throw ParameterError("Gaussian measurement matrix needs 1 <= P < N (P=" +
                         std::to_string(rows) + ", N=" + std::to_string(cols) + ")");
  }
  Rng rng = MakeRng(seed);
  const double variance = 1.0 / rows;
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  Eigen::MatrixXd phi(rows, cols);
  // Column-major fill keeps the draw order independent of Eigen's storage.
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) phi(i, j) = normal(rng);
  }
  MeasurementMatrix m(std::move(phi));
  m.gaussian_ = GaussianProvenance{seed, variance};
  return m;
}

MeasurementMatrix NestedGaussianMatrix(int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || rows >= cols) {
    throw ParameterError("Gaussian measurement matrix needs 1 <= P < N (P=" +
                         std::to_string(rows) + ", N=" + std::to_string(cols) + ")");
  }
  Rng rng = MakeRng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd phi(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) phi(i, j) = normal(rng);
  }
  const double variance = 1.0 / rows;
  phi *= std::sqrt(variance);
  MeasurementMatrix m(std::move(phi));
  m.gaussian_ = GaussianProvenance{seed, variance};
  return m;
}

Eigen::VectorXd Measure(const MeasurementMatrix& m, const Eigen::VectorXd& x) {
  if (x.size() != m.cols()) {
    throw DimensionError("state length " + std::to_string(x.size()) +
                         " does not match measurement matrix with " +
                         std::to_string(m.cols()) + " columns");
  }
  return m.phi() * x;
}

bool ForEachCombination(int n, int k, const std::function<bool(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return true;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(idx)) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

namespace {

Eigen::MatrixXd Columns(const Eigen::MatrixXd& phi, const std::vector<int>& cols) {
  Eigen::MatrixXd sub(phi.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(c) = phi.col(cols[c]);
  return sub;
}

}  // namespace

int Spark(const MeasurementMatrix& m, const EnumerationLimits& limits) {
  const int n = m.cols();
  const int p = m.rows();
  if (n > limits.max_columns) {
    throw UnsupportedSizeError("spark enumeration limited to " +
                               std::to_string(limits.max_columns) + " columns, got " +
                               std::to_string(n));
  }
  const double sigma_max = Eigen::JacobiSVD<Eigen::MatrixXd>(m.phi()).singularValues()(0);
  if (sigma_max == 0.0) return 1;
  const double cutoff = limits.rank_tolerance * sigma_max;
  const int largest = std::min(p, n);
  for (int k = 1; k <= largest; ++k) {
    bool dependent = false;
    ForEachCombination(n, k, [&](const std::vector<int>& cols) {
      const Eigen::VectorXd sv =
          Eigen::JacobiSVD<Eigen::MatrixXd>(Columns(m.phi(), cols)).singularValues();
      if (sv(sv.size() - 1) <= cutoff) {
        dependent = true;
        return false;
      }
      return true;
    });
    if (dependent) return k;
  }
  return largest + 1;
}

bool IsFullSpark(const MeasurementMatrix& m, const EnumerationLimits& limits) {
  return Spark(m, limits) == m.rows() + 1;
}

double RipConstantExact(const MeasurementMatrix& m, int s, const EnumerationLimits& limits) {
  const int n = m.cols();
  if (s < 1 || s > n) throw ParameterError("sparsity must lie in [1, N]");
  if (n > limits.max_columns || s > limits.max_sparsity) {
    throw UnsupportedSizeError("RIP enumeration limited to N <= " +
                               std::to_string(limits.max_columns) + ", s <= " +
                               std::to_string(limits.max_sparsity));
  }
  double delta = 0.0;
  ForEachCombination(n, s, [&](const std::vector<int>& cols) {
    const Eigen::MatrixXd sub = Columns(m.phi(), cols);
    const Eigen::MatrixXd gram = sub.transpose() * sub;
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                   gram, Eigen::EigenvaluesOnly)
                                   .eigenvalues();
    delta = std::max({delta, ev(ev.size() - 1) - 1.0, 1.0 - ev(0)});
    return true;
  });
  return delta;
}

bool WtrcCheck(int measurements, int max_out_degree) {
  return measurements > 2 * max_out_degree + 1;
}

double StrcGaussianBound(int n, int measurements, double c1) {
  if (measurements < 1 || measurements >= n) {
    throw ParameterError("bound requires 1 <= P < N");
  }
  if (!(c1 > 0.0)) throw ParameterError("c1 must be positive");
  return c1 * measurements / std::log(static_cast<double>(n) / measurements);
}

bool ErBoundCheck(int n, double p, int measurements, double c1) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("edge probability must lie in [0, 1]");
  const double np = n * p;
  const double lhs = np + std::sqrt(2.0 * np * std::log(static_cast<double>(n))) + 1.0;
  return lhs < StrcGaussianBound(n, measurements, c1);
}

void MeanFieldSet::Add(int q, int t, Eigen::VectorXd y, int matrix_id) {
  auto it = matrix_ids_.find(q);
  if (it != matrix_ids_.end() && it->second != matrix_id) {
    throw ParameterError("pinch index already bound to a different matrix");
  }
  if (!records_.empty() && records_.begin()->second.size() != y.size()) {
    throw DimensionError("mean-field records must share one length");
  }
  matrix_ids_[q] = matrix_id;
  records_[{q, t}] = std::move(y);
}

const Eigen::VectorXd& MeanFieldSet::Get(int q, int t) const {
  auto it = records_.find({q, t});
  if (it == records_.end()) {
    throw ParameterError("no mean-field record for q=" + std::to_string(q + 1) +
                         ", t=" + std::to_string(t));
  }
  return it->second;
}

int MeanFieldSet::MatrixId(int q) const {
  auto it = matrix_ids_.find(q);
  return it == matrix_ids_.end() ? 0 : it->second;
}

void WriteMatrixCsv(std::ostream& out, const MeasurementMatrix& m) {
  out << m.rows() << ',' << m.cols() << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << FormatDouble(m.phi()(i, j));
    }
    out << '\n';
  }
}

MeasurementMatrix ReadMatrixCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty matrix file");
  const auto dims = SplitCsvLine(line);
  if (dims.size() != 2) throw FormatError("matrix header must be 'P,N'");
  const long p = ParseInt(dims[0]);
  const long n = ParseInt(dims[1]);
  if (p < 1 || n < 1) throw FormatError("matrix dimensions must be positive");
  Eigen::MatrixXd phi(p, n);
  for (long i = 0; i < p; ++i) {
    if (!std::getline(in, line)) throw FormatError("matrix file ends early");
    const auto f = SplitCsvLine(line);
    if (static_cast<long>(f.size()) != n) {
      throw FormatError("matrix row " + std::to_string(i + 1) + " has wrong length");
    }
    for (long j = 0; j < n; ++j) phi(i, j) = ParseDouble(f[j]);
  }
  return MeasurementMatrix(std::move(phi));
}

void WriteMeanFieldCsv(std::ostream& out, const MeanFieldSet& set) {
  out << "q,t,k,y\n";
  for (const auto& [key, y] : set.records()) {
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      out << (key.first + 1) << ',' << key.second << ',' << (k + 1) << ','
          << FormatDouble(y(k)) << '\n';
    }
  }
}

MeanFieldSet ReadMeanFieldCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty mean-field file");
  std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> raw;
  int length = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 4) throw FormatError("mean-field rows need 4 fields");
    const int q = static_cast<int>(ParseInt(f[0]));
    const int t = static_cast<int>(ParseInt(f[1]));
    const int k = static_cast<int>(ParseInt(f[2]));
    if (q < 1 || t < 0 || k < 1) throw FormatError("bad mean-field index");
    raw[{q - 1, t}].emplace_back(k - 1, ParseDouble(f[3]));
    length = std::max(length, k);
  }
  MeanFieldSet set;
  for (auto& [key, entries] : raw) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(length);
    for (auto [k, v] : entries) y(k) = v;
    set.Add(key.first, key.second, std::move(y));
  }
  return set;
}

}  // namespace netrecon
