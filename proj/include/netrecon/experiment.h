#ifndef NETRECON_EXPERIMENT_H_
#define NETRECON_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "netrecon/dynamics.h"
#include "netrecon/sparse_recovery.h"
#include "netrecon/topology.h"

namespace netrecon {

inline constexpr int kConfigVersion = 1;

enum class ExperimentId { kExp1, kExp2, kExp3, kCustom };
enum class Profile { kSmoke, kPaper };

std::string ToString(ExperimentId id);
ExperimentId ParseExperimentId(const std::string& s);
std::string ToString(Profile p);
Profile ParseProfile(const std::string& s);

struct SeedSet {
  std::uint64_t graph = 0;
  std::uint64_t dynamics = 0;
  std::uint64_t pinch = 0;
  std::uint64_t matrix = 0;
};

struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::kCustom;
  Profile profile = Profile::kSmoke;
  int n = 200;
  // Edge probability p = (log N / N)(1 + sign * eps) per regime; "minus" is
  // the supercritical side, "plus" the connected side.
  std::vector<std::string> regimes = {"minus"};
  std::vector<double> epsilons = {0.5};
  // Overrides the regime formula when set.
  std::optional<double> edge_probability;
  bool directed = false;
  SystemSpec dynamics;
  double pinch_lo = 0.5;
  double pinch_hi = 1.0;
  std::vector<int> p_grid;
  // Fixed P = round(fraction * N) (experiment 3).
  std::optional<double> p_fraction;
  std::vector<double> taus = {1e-9};
  // Largest trajectory length T (experiment 3 sweeps T = 1..horizon).
  int horizon = 1;
  std::uint64_t master_seed = 0;
  SeedSet seeds;
  double c1 = 1.0;
  int repeats = 1;
  int workers = 1;
  double mcc_target = 0.99;
  bool nested_matrices = true;
  RecoveryConfig recovery;
  double regression_threshold = 0.05;
  int regression_max_sweeps = 20;
};

// Profile defaults for an experiment, with seeds expanded from the master seed.
ExperimentConfig DefaultConfig(ExperimentId id, Profile profile);

// Applies a versioned JSON document on top of the defaults of its experiment
// and the given profile. Unknown keys raise FormatError.
ExperimentConfig ParseConfig(const nlohmann::json& doc, Profile profile);
ExperimentConfig ParseConfig(const nlohmann::json& doc, std::optional<ExperimentId> fallback,
                             Profile profile);

// Full echo including every derived seed.
nlohmann::json ToJson(const ExperimentConfig& cfg);

// Throws ParameterError on empty ranges, N < 2 and similar.
void ValidateConfig(const ExperimentConfig& cfg);

double EdgeProbability(const ExperimentConfig& cfg, const std::string& regime, double eps);

struct TopologyCase {
  std::string regime;
  double epsilon = 0.0;
  double edge_probability = 0.0;
  int max_out_degree = 0;
  long edges = 0;
  PcSearchResult search;
};

struct Experiment1Result {
  std::vector<TopologyCase> cases;
};

struct Experiment2Result {
  std::vector<TopologyCase> cases;
  // monotone[regime][tau index]: P_c nondecreasing in edge probability.
  std::map<std::string, std::vector<bool>> monotone;
  // P_c at the smallest threshold >= P_c at the largest, for every case.
  bool robust = true;
};

struct Experiment3Result {
  int measurements = 0;
  double edge_probability = 0.0;
  int max_out_degree = 0;
  // Index T-1 holds the value for horizon T.
  std::vector<double> cumulative_mcc;
  std::vector<double> mse;
  std::vector<bool> regression_converged;
  std::vector<Eigen::MatrixXd> coefficients;
  Eigen::MatrixXd true_coefficients;
  // Largest true support size of x^q(t) per t (index t-1).
  std::vector<int> max_support;
  RecoveryTally tally;
};

// One network realization per (regime, epsilon) with the P grid search.
std::vector<TopologyCase> RunTopologyCases(const ExperimentConfig& cfg);

Experiment1Result RunExperiment1(const ExperimentConfig& cfg);
Experiment2Result RunExperiment2(const ExperimentConfig& cfg);
Experiment3Result RunExperiment3(const ExperimentConfig& cfg);

// Runs the configured experiment and writes its CSV/JSON files into out_dir.
// Returns the summary document that is also written as <exp>_summary.json.
nlohmann::json RunAndWrite(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace netrecon

#endif  // NETRECON_EXPERIMENT_H_
