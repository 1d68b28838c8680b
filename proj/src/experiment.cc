#include "netrecon/experiment.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "netrecon/dynamics_id.h"
#include "netrecon/errors.h"
#include "netrecon/graph.h"
#include "netrecon/io.h"
#include "netrecon/measurement.h"
#include "netrecon/metrics.h"
#include "netrecon/parallel.h"
#include "netrecon/random.h"

namespace netrecon {

using nlohmann::json;

std::string ToString(ExperimentId id) {
  switch (id) {
    case ExperimentId::kExp1:
      return "exp1";
    case ExperimentId::kExp2:
      return "exp2";
    case ExperimentId::kExp3:
      return "exp3";
    case ExperimentId::kCustom:
      return "custom";
  }
  return "custom";
}

ExperimentId ParseExperimentId(const std::string& s) {
  if (s == "exp1") return ExperimentId::kExp1;
  if (s == "exp2") return ExperimentId::kExp2;
  if (s == "exp3") return ExperimentId::kExp3;
  if (s == "custom") return ExperimentId::kCustom;
  throw FormatError("unknown experiment id '" + s + "'");
}

std::string ToString(Profile p) { return p == Profile::kPaper ? "paper" : "smoke"; }

Profile ParseProfile(const std::string& s) {
  if (s == "smoke") return Profile::kSmoke;
  if (s == "paper") return Profile::kPaper;
  throw FormatError("unknown profile '" + s + "'");
}

namespace {

constexpr std::uint64_t kDefaultMasterSeed = 20250101;

SeedSet ExpandSeeds(std::uint64_t master) {
  return SeedSet{DeriveSeed(master, SeedStream::kGraph), DeriveSeed(master, SeedStream::kDynamics),
                 DeriveSeed(master, SeedStream::kPinch), DeriveSeed(master, SeedStream::kMatrix)};
}

std::vector<int> StepGrid(int start, int stop, int step) {
  if (step < 1 || start < 1 || stop < start) throw ParameterError("bad P grid range");
  std::vector<int> grid;
  for (int p = start; p <= stop; p += step) grid.push_back(p);
  return grid;
}

// Grid step N/100 from N/100 to N/2.
std::vector<int> DefaultGrid(int n) {
  const int step = std::max(1, n / 100);
  return StepGrid(step, std::max(step, n / 2), step);
}

std::string ToString(IsolatedKind k) { return k == IsolatedKind::kLogistic ? "logistic" : "linear"; }
std::string ToString(CouplingKind k) { return k == CouplingKind::kDiffusive ? "diffusive" : "sine"; }
std::string ToString(CouplingSign s) {
  return s == CouplingSign::kSelfMinusNeighbor ? "self_minus_neighbor" : "neighbor_minus_self";
}

IsolatedKind ParseIsolated(const std::string& s) {
  if (s == "logistic") return IsolatedKind::kLogistic;
  if (s == "linear") return IsolatedKind::kLinear;
  throw FormatError("unknown isolated dynamics '" + s + "'");
}

CouplingKind ParseCoupling(const std::string& s) {
  if (s == "diffusive") return CouplingKind::kDiffusive;
  if (s == "sine") return CouplingKind::kSine;
  throw FormatError("unknown coupling '" + s + "'");
}

CouplingSign ParseSign(const std::string& s) {
  if (s == "self_minus_neighbor") return CouplingSign::kSelfMinusNeighbor;
  if (s == "neighbor_minus_self") return CouplingSign::kNeighborMinusSelf;
  throw FormatError("unknown coupling sign '" + s + "'");
}

void RejectUnknownKeys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!obj.is_object()) throw FormatError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw FormatError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

std::pair<double, double> ParseRange(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) throw FormatError(what + " must be [lo, hi]");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::string Pc(const std::optional<int>& p) { return p ? std::to_string(*p) : "NA"; }

}  // namespace

ExperimentConfig DefaultConfig(ExperimentId id, Profile profile) {
  ExperimentConfig cfg;
  cfg.experiment = id;
  cfg.profile = profile;
  cfg.master_seed = kDefaultMasterSeed;
  cfg.seeds = ExpandSeeds(cfg.master_seed);
  cfg.workers = DefaultWorkerCount();
  const bool paper = profile == Profile::kPaper;
  switch (id) {
    case ExperimentId::kExp1:
      cfg.n = paper ? 1000 : 200;
      cfg.regimes = {"minus"};
      cfg.epsilons = {0.5, 0.2};
      cfg.taus = {1e-9};
      break;
    case ExperimentId::kExp2:
      cfg.n = paper ? 1000 : 200;
      cfg.regimes = {"minus", "plus"};
      cfg.epsilons = paper ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9}
                           : std::vector<double>{0.2, 0.5, 0.8};
      cfg.taus = {1e-9, 1e-10};
      break;
    case ExperimentId::kExp3:
      cfg.n = 100;
      cfg.regimes = {"minus"};
      cfg.epsilons = {0.5};
      cfg.edge_probability = 0.014;
      cfg.dynamics.isolated = IsolatedKind::kLinear;
      cfg.dynamics.sign = CouplingSign::kNeighborMinusSelf;
      cfg.p_fraction = 0.6;
      cfg.horizon = 7;
      cfg.taus = {1e-9};
      break;
    case ExperimentId::kCustom:
      cfg.n = 200;
      break;
  }
  cfg.p_grid = DefaultGrid(cfg.n);
  return cfg;
}

ExperimentConfig ParseConfig(const json& doc, Profile profile) {
  return ParseConfig(doc, std::nullopt, profile);
}

ExperimentConfig ParseConfig(const json& doc, std::optional<ExperimentId> fallback,
                             Profile profile) {
  RejectUnknownKeys(doc,
                    {"version", "experiment", "profile", "n", "regimes", "epsilons", "edge_probability",
                     "directed", "dynamics", "pinch_range", "p_grid", "p_fraction", "taus",
                     "horizon", "seed", "seeds", "c1", "repeats", "workers", "mcc_target",
                     "solver", "regression", "nested_matrices"},
                    "config");
  if (!doc.contains("version") || doc["version"].get<int>() != kConfigVersion) {
    throw FormatError("config must declare \"version\": " + std::to_string(kConfigVersion));
  }
  ExperimentId id = fallback.value_or(ExperimentId::kCustom);
  if (doc.contains("experiment")) id = ParseExperimentId(doc["experiment"].get<std::string>());
  // A profile named in the document wins over the caller's default.
  if (doc.contains("profile")) profile = ParseProfile(doc["profile"].get<std::string>());
  ExperimentConfig cfg = DefaultConfig(id, profile);

  if (doc.contains("n")) {
    cfg.n = doc["n"].get<int>();
    cfg.p_grid = DefaultGrid(std::max(cfg.n, 2));
  }
  if (doc.contains("regimes")) cfg.regimes = doc["regimes"].get<std::vector<std::string>>();
  if (doc.contains("epsilons")) cfg.epsilons = doc["epsilons"].get<std::vector<double>>();
  if (doc.contains("edge_probability")) {
    if (doc["edge_probability"].is_null()) {
      cfg.edge_probability.reset();
    } else {
      cfg.edge_probability = doc["edge_probability"].get<double>();
    }
  }
  if (doc.contains("directed")) cfg.directed = doc["directed"].get<bool>();
  if (doc.contains("dynamics")) {
    const json& d = doc["dynamics"];
    RejectUnknownKeys(d, {"isolated", "rates", "coupling", "coupling_sign", "alpha_range",
                          "symmetric_alpha"},
                      "dynamics");
    if (d.contains("isolated")) cfg.dynamics.isolated = ParseIsolated(d["isolated"]);
    if (d.contains("rates")) cfg.dynamics.rate_choices = d["rates"].get<std::vector<double>>();
    if (d.contains("coupling")) cfg.dynamics.coupling = ParseCoupling(d["coupling"]);
    if (d.contains("coupling_sign")) cfg.dynamics.sign = ParseSign(d["coupling_sign"]);
    if (d.contains("alpha_range")) {
      std::tie(cfg.dynamics.alpha_lo, cfg.dynamics.alpha_hi) =
          ParseRange(d["alpha_range"], "alpha_range");
    }
    if (d.contains("symmetric_alpha")) cfg.dynamics.symmetric_alpha = d["symmetric_alpha"];
  }
  if (doc.contains("pinch_range")) {
    std::tie(cfg.pinch_lo, cfg.pinch_hi) = ParseRange(doc["pinch_range"], "pinch_range");
  }
  if (doc.contains("p_grid")) {
    const json& g = doc["p_grid"];
    if (g.is_array()) {
      cfg.p_grid = g.get<std::vector<int>>();
    } else {
      RejectUnknownKeys(g, {"start", "stop", "step"}, "p_grid");
      cfg.p_grid = StepGrid(g.at("start").get<int>(), g.at("stop").get<int>(),
                            g.at("step").get<int>());
    }
  }
  if (doc.contains("p_fraction")) {
    if (doc["p_fraction"].is_null()) {
      cfg.p_fraction.reset();
    } else {
      cfg.p_fraction = doc["p_fraction"].get<double>();
    }
  }
  if (doc.contains("taus")) cfg.taus = doc["taus"].get<std::vector<double>>();
  if (doc.contains("horizon")) cfg.horizon = doc["horizon"].get<int>();
  if (doc.contains("seed")) {
    cfg.master_seed = doc["seed"].get<std::uint64_t>();
    cfg.seeds = ExpandSeeds(cfg.master_seed);
  }
  if (doc.contains("seeds")) {
    const json& s = doc["seeds"];
    RejectUnknownKeys(s, {"graph", "dynamics", "pinch", "matrix"}, "seeds");
    if (s.contains("graph")) cfg.seeds.graph = s["graph"].get<std::uint64_t>();
    if (s.contains("dynamics")) cfg.seeds.dynamics = s["dynamics"].get<std::uint64_t>();
    if (s.contains("pinch")) cfg.seeds.pinch = s["pinch"].get<std::uint64_t>();
    if (s.contains("matrix")) cfg.seeds.matrix = s["matrix"].get<std::uint64_t>();
  }
  if (doc.contains("c1")) cfg.c1 = doc["c1"].get<double>();
  if (doc.contains("repeats")) cfg.repeats = doc["repeats"].get<int>();
  if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
  if (doc.contains("nested_matrices")) cfg.nested_matrices = doc["nested_matrices"].get<bool>();
  if (doc.contains("mcc_target")) cfg.mcc_target = doc["mcc_target"].get<double>();
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    RejectUnknownKeys(s, {"feasibility_tol", "objective_tol", "max_iterations"}, "solver");
    if (s.contains("feasibility_tol")) cfg.recovery.feasibility_tol = s["feasibility_tol"];
    if (s.contains("objective_tol")) cfg.recovery.objective_tol = s["objective_tol"];
    if (s.contains("max_iterations")) cfg.recovery.max_iterations = s["max_iterations"];
  }
  if (doc.contains("regression")) {
    const json& r = doc["regression"];
    RejectUnknownKeys(r, {"threshold", "max_sweeps"}, "regression");
    if (r.contains("threshold")) cfg.regression_threshold = r["threshold"];
    if (r.contains("max_sweeps")) cfg.regression_max_sweeps = r["max_sweeps"];
  }
  ValidateConfig(cfg);
  return cfg;
}

json ToJson(const ExperimentConfig& cfg) {
  json j;
  j["version"] = kConfigVersion;
  j["experiment"] = ToString(cfg.experiment);
  j["profile"] = ToString(cfg.profile);
  j["n"] = cfg.n;
  j["regimes"] = cfg.regimes;
  j["epsilons"] = cfg.epsilons;
  j["edge_probability"] = cfg.edge_probability ? json(*cfg.edge_probability) : json(nullptr);
  j["directed"] = cfg.directed;
  j["dynamics"] = {{"isolated", ToString(cfg.dynamics.isolated)},
                   {"rates", cfg.dynamics.rate_choices},
                   {"coupling", ToString(cfg.dynamics.coupling)},
                   {"coupling_sign", ToString(cfg.dynamics.sign)},
                   {"alpha_range", {cfg.dynamics.alpha_lo, cfg.dynamics.alpha_hi}},
                   {"symmetric_alpha", cfg.dynamics.symmetric_alpha}};
  j["pinch_range"] = {cfg.pinch_lo, cfg.pinch_hi};
  j["p_grid"] = cfg.p_grid;
  j["p_fraction"] = cfg.p_fraction ? json(*cfg.p_fraction) : json(nullptr);
  j["taus"] = cfg.taus;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.master_seed;
  j["seeds"] = {{"graph", cfg.seeds.graph},
                {"dynamics", cfg.seeds.dynamics},
                {"pinch", cfg.seeds.pinch},
                {"matrix", cfg.seeds.matrix}};
  j["c1"] = cfg.c1;
  j["repeats"] = cfg.repeats;
  j["mcc_target"] = cfg.mcc_target;
  j["nested_matrices"] = cfg.nested_matrices;
  j["solver"] = {{"feasibility_tol", cfg.recovery.feasibility_tol},
                 {"objective_tol", cfg.recovery.objective_tol},
                 {"max_iterations", cfg.recovery.max_iterations}};
  j["regression"] = {{"threshold", cfg.regression_threshold},
                     {"max_sweeps", cfg.regression_max_sweeps}};
  return j;
}

void ValidateConfig(const ExperimentConfig& cfg) {
  if (cfg.n < 2) throw ParameterError("experiments need N >= 2");
  if (cfg.regimes.empty() || cfg.epsilons.empty()) {
    throw ParameterError("regime and epsilon lists must be nonempty");
  }
  for (const auto& r : cfg.regimes) {
    if (r != "minus" && r != "plus") throw ParameterError("regime must be 'minus' or 'plus'");
  }
  for (double e : cfg.epsilons) {
    if (!(e >= 0.0 && e < 1.0)) throw ParameterError("epsilon must lie in [0, 1)");
  }
  if (cfg.edge_probability && !(*cfg.edge_probability >= 0.0 && *cfg.edge_probability <= 1.0)) {
    throw ParameterError("edge probability must lie in [0, 1]");
  }
  if (cfg.dynamics.rate_choices.empty()) throw ParameterError("rate set must be nonempty");
  if (!(cfg.dynamics.alpha_lo < cfg.dynamics.alpha_hi)) throw ParameterError("empty alpha range");
  if (!(cfg.pinch_lo < cfg.pinch_hi)) throw ParameterError("empty pinch range");
  if (cfg.p_fraction) {
    const int p = static_cast<int>(std::lround(*cfg.p_fraction * cfg.n));
    if (p < 1 || p >= cfg.n) throw ParameterError("P fraction must give 1 <= P < N");
  } else if (cfg.p_grid.empty()) {
    throw ParameterError("P grid must be nonempty");
  }
  for (std::size_t k = 0; k < cfg.p_grid.size(); ++k) {
    if (cfg.p_grid[k] < 1 || cfg.p_grid[k] >= cfg.n) {
      throw ParameterError("P grid values must lie in [1, N-1]");
    }
    if (k && cfg.p_grid[k] <= cfg.p_grid[k - 1]) throw ParameterError("P grid must increase");
  }
  if (cfg.taus.empty()) throw ParameterError("threshold list must be nonempty");
  for (double t : cfg.taus) {
    if (!(t > 0.0)) throw ParameterError("thresholds must be positive");
  }
  if (cfg.horizon < 1) throw ParameterError("horizon must be >= 1");
  if (cfg.repeats < 1) throw ParameterError("repeats must be >= 1");
  if (cfg.workers < 1) throw ParameterError("workers must be >= 1");
  if (!(cfg.c1 > 0.0)) throw ParameterError("c1 must be positive");
}

double EdgeProbability(const ExperimentConfig& cfg, const std::string& regime, double eps) {
  if (cfg.edge_probability) return *cfg.edge_probability;
  const double base = std::log(static_cast<double>(cfg.n)) / cfg.n;
  const double sign = regime == "plus" ? 1.0 : -1.0;
  return std::clamp(base * (1.0 + sign * eps), 0.0, 1.0);
}

std::vector<TopologyCase> RunTopologyCases(const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  std::vector<TopologyCase> cases;
  for (std::size_t r = 0; r < cfg.regimes.size(); ++r) {
    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
      // Keyed by (regime, epsilon) so a single case reruns identically on its own.
      const std::uint64_t key =
          DeriveSeed(std::bit_cast<std::uint64_t>(cfg.epsilons[e]), cfg.regimes[r] == "plus" ? 2 : 1);
      TopologyCase c;
      c.regime = cfg.regimes[r];
      c.epsilon = cfg.epsilons[e];
      c.edge_probability = EdgeProbability(cfg, c.regime, c.epsilon);
      const Graph g = GenerateErdosRenyi(cfg.n, c.edge_probability,
                                         DeriveSeed(cfg.seeds.graph, key), cfg.directed);
      c.max_out_degree = g.MaxOutDegree();
      c.edges = g.EdgeCount();
      const NetworkSystem sys = SampleSystem(g, cfg.dynamics, DeriveSeed(cfg.seeds.dynamics, key));
      const std::vector<double> eps =
          SamplePinchMagnitudes(cfg.n, cfg.pinch_lo, cfg.pinch_hi, DeriveSeed(cfg.seeds.pinch, key));
      const TopologyScenario scenario =
          MakeTopologyScenario(sys, eps, DeriveSeed(cfg.seeds.matrix, key), cfg.recovery);
      PcSearchOptions opts;
      opts.mcc_target = cfg.mcc_target;
      opts.grid = cfg.p_grid;
      opts.taus = cfg.taus;
      opts.repeats = cfg.repeats;
      opts.workers = cfg.workers;
      opts.nested = cfg.nested_matrices;
      c.search = CriticalMeasurementSearch(scenario, opts);
      cases.push_back(std::move(c));
    }
  }
  return cases;
}

Experiment1Result RunExperiment1(const ExperimentConfig& cfg) {
  return Experiment1Result{RunTopologyCases(cfg)};
}

Experiment2Result RunExperiment2(const ExperimentConfig& cfg) {
  Experiment2Result result;
  result.cases = RunTopologyCases(cfg);
  const std::size_t n_tau = cfg.taus.size();
  const auto infinity = std::numeric_limits<int>::max();
  for (const auto& regime : cfg.regimes) {
    std::vector<const TopologyCase*> sorted;
    for (const auto& c : result.cases) {
      if (c.regime == regime) sorted.push_back(&c);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
      return a->edge_probability < b->edge_probability;
    });
    std::vector<bool> flags(n_tau, true);
    for (std::size_t k = 0; k < n_tau; ++k) {
      for (std::size_t i = 1; i < sorted.size(); ++i) {
        const int prev = sorted[i - 1]->search.critical[k].value_or(infinity);
        const int cur = sorted[i]->search.critical[k].value_or(infinity);
        if (cur < prev) flags[k] = false;
      }
    }
    result.monotone[regime] = flags;
  }
  const auto [lo, hi] = std::minmax_element(cfg.taus.begin(), cfg.taus.end());
  const std::size_t strict = static_cast<std::size_t>(lo - cfg.taus.begin());
  const std::size_t loose = static_cast<std::size_t>(hi - cfg.taus.begin());
  for (const auto& c : result.cases) {
    if (c.search.critical[strict].value_or(infinity) < c.search.critical[loose].value_or(infinity)) {
      result.robust = false;
    }
  }
  return result;
}

Experiment3Result RunExperiment3(const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  const int n = cfg.n;
  const int horizon = cfg.horizon;
  const std::uint64_t key = 0;
  Experiment3Result result;
  result.edge_probability = EdgeProbability(cfg, cfg.regimes.front(), cfg.epsilons.front());
  result.measurements = cfg.p_fraction ? static_cast<int>(std::lround(*cfg.p_fraction * n))
                                       : cfg.p_grid.front();
  const Graph g = GenerateErdosRenyi(n, result.edge_probability,
                                     DeriveSeed(cfg.seeds.graph, key), cfg.directed);
  result.max_out_degree = g.MaxOutDegree();
  const NetworkSystem sys = SampleSystem(g, cfg.dynamics, DeriveSeed(cfg.seeds.dynamics, key));
  result.true_coefficients = TrueLinearCoefficients(sys);
  const std::vector<double> eps =
      SamplePinchMagnitudes(n, cfg.pinch_lo, cfg.pinch_hi, DeriveSeed(cfg.seeds.pinch, key));
  const std::vector<Trajectory> truth = SimulatePinchedFamily(sys, eps, horizon, cfg.workers);

  const MeasurementMatrix m = GaussianMatrix(
      result.measurements, n, GridMatrixSeed(DeriveSeed(cfg.seeds.matrix, key), result.measurements, 0));
  const BasisPursuitSolver solver(m, cfg.recovery);

  // Flatten (q, t) for t = 1..horizon.
  std::vector<Eigen::VectorXd> states;
  states.reserve(static_cast<std::size_t>(n) * horizon);
  for (const Trajectory& traj : truth) {
    for (int t = 1; t <= horizon; ++t) states.push_back(traj.states[t]);
  }
  const std::vector<RecoveryResult> recovered = RecoverStates(solver, m, states, cfg.workers);
  const double tau = cfg.taus.front();

  std::vector<Trajectory> estimate(n);
  SupportRecords true_supports;
  SupportRecords est_supports;
  result.max_support.assign(horizon, 0);
  for (int q = 0; q < n; ++q) {
    Trajectory& traj = estimate[q];
    traj.pinch_index = q;
    traj.pinch_magnitude = eps[q];
    traj.states.push_back(truth[q].states[0]);
    for (int t = 1; t <= horizon; ++t) {
      const RecoveryResult& r = recovered[static_cast<std::size_t>(q) * horizon + (t - 1)];
      result.tally.Add(r);
      Eigen::VectorXd x = r.x_hat;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x(i)) <= tau) x(i) = 0.0;
      }
      est_supports[{q, t}] = ThresholdSupport(r.x_hat, tau);
      true_supports[{q, t}] = Support(truth[q].states[t]);
      result.max_support[t - 1] =
          std::max(result.max_support[t - 1], static_cast<int>(true_supports[{q, t}].size()));
      traj.states.push_back(std::move(x));
    }
  }

  SparseRegressionOptions reg;
  reg.threshold = cfg.regression_threshold;
  reg.max_sweeps = cfg.regression_max_sweeps;
  for (int t_max = 1; t_max <= horizon; ++t_max) {
    result.cumulative_mcc.push_back(CumulativeMcc(true_supports, est_supports, n, t_max));
    const LinearLibrary lib = BuildLinearLibrary(estimate, t_max);
    SparseRegressionResult fit = SparseRegression(lib.features, lib.targets, reg);
    result.mse.push_back(Mse(result.true_coefficients, fit.coefficients));
    result.regression_converged.push_back(fit.converged);
    result.coefficients.push_back(std::move(fit.coefficients));
  }
  return result;
}

namespace {

void WriteConfigComment(std::ostream& out, const json& echo) {
  out << "# config=" << echo.dump() << "\n";
}

json TallyJson(const RecoveryTally& t) {
  return {{"converged", t.converged}, {"max_iter", t.max_iter},     {"infeasible", t.infeasible},
          {"non_unique", t.non_unique}, {"iterations", t.iterations}, {"max_residual", t.max_residual}};
}

json CaseJson(const TopologyCase& c, const ExperimentConfig& cfg) {
  json j;
  j["regime"] = c.regime;
  j["epsilon"] = c.epsilon;
  j["edge_probability"] = c.edge_probability;
  j["max_out_degree"] = c.max_out_degree;
  j["edges"] = c.edges;
  json pcs = json::array();
  for (std::size_t k = 0; k < cfg.taus.size(); ++k) {
    const auto& pc = c.search.critical[k];
    json entry{{"tau", cfg.taus[k]},
               {"P_c", pc ? json(*pc) : json(nullptr)},
               {"P_c_over_N", pc ? json(static_cast<double>(*pc) / cfg.n) : json(nullptr)}};
    if (pc && *pc < cfg.n) {
      entry["c1"] = cfg.c1;
      entry["gaussian_bound_at_P_c"] = StrcGaussianBound(cfg.n, *pc, cfg.c1);
      entry["er_bound_holds_at_P_c"] = ErBoundCheck(cfg.n, c.edge_probability, *pc, cfg.c1);
      // MCC stays at 1 for every grid point from P_c on.
      bool plateau = true;
      for (const auto& g : c.search.grid) {
        if (g.measurements >= *pc && g.mcc[k] != 1.0) plateau = false;
      }
      entry["mcc_plateau_from_P_c"] = plateau;
    }
    pcs.push_back(entry);
  }
  j["critical"] = pcs;
  json grid = json::array();
  RecoveryTally total;
  for (const auto& g : c.search.grid) {
    grid.push_back({{"P", g.measurements}, {"mcc", g.mcc}, {"solver", TallyJson(g.tally)}});
    total.converged += g.tally.converged;
    total.max_iter += g.tally.max_iter;
    total.infeasible += g.tally.infeasible;
    total.non_unique += g.tally.non_unique;
    total.iterations += g.tally.iterations;
    total.max_residual = std::max(total.max_residual, g.tally.max_residual);
  }
  j["grid"] = grid;
  j["solver"] = TallyJson(total);
  return j;
}

void WriteGridCsv(const std::filesystem::path& path, const std::vector<TopologyCase>& cases,
                  const ExperimentConfig& cfg, const json& echo) {
  std::ofstream out = OpenForWrite(path);
  WriteConfigComment(out, echo);
  out << "regime,epsilon,edge_probability,tau,P,mcc\n";
  for (const auto& c : cases) {
    for (std::size_t k = 0; k < cfg.taus.size(); ++k) {
      for (const auto& g : c.search.grid) {
        out << c.regime << ',' << FormatDouble(c.epsilon) << ',' << FormatDouble(c.edge_probability)
            << ',' << FormatDouble(cfg.taus[k]) << ',' << g.measurements << ','
            << FormatDouble(g.mcc[k]) << '\n';
      }
    }
  }
}

void WritePcCsv(const std::filesystem::path& path, const std::vector<TopologyCase>& cases,
                const ExperimentConfig& cfg, const json& echo) {
  std::ofstream out = OpenForWrite(path);
  WriteConfigComment(out, echo);
  out << "regime,epsilon,edge_probability,max_out_degree,tau,P_c\n";
  for (const auto& c : cases) {
    for (std::size_t k = 0; k < cfg.taus.size(); ++k) {
      out << c.regime << ',' << FormatDouble(c.epsilon) << ',' << FormatDouble(c.edge_probability)
          << ',' << c.max_out_degree << ',' << FormatDouble(cfg.taus[k]) << ','
          << Pc(c.search.critical[k]) << '\n';
    }
  }
}

void WriteMatrixPlain(const std::filesystem::path& path, const Eigen::MatrixXd& mat,
                      const std::vector<std::string>& header, const json& echo) {
  std::ofstream out = OpenForWrite(path);
  WriteConfigComment(out, echo);
  out << "node";
  for (const auto& h : header) out << ',' << h;
  out << '\n';
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    out << (i + 1);
    for (Eigen::Index j = 0; j < mat.cols(); ++j) out << ',' << FormatDouble(mat(i, j));
    out << '\n';
  }
}

}  // namespace

json RunAndWrite(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const json echo = ToJson(cfg);
  const std::string tag = ToString(cfg.experiment);
  json summary;
  summary["config"] = echo;

  if (cfg.experiment == ExperimentId::kExp3) {
    const Experiment3Result r = RunExperiment3(cfg);
    summary["P"] = r.measurements;
    summary["edge_probability"] = r.edge_probability;
    summary["max_out_degree"] = r.max_out_degree;
    summary["cumulative_mcc"] = r.cumulative_mcc;
    summary["mse"] = r.mse;
    summary["regression_converged"] = r.regression_converged;
    summary["max_true_support"] = r.max_support;
    summary["solver"] = TallyJson(r.tally);
    {
      std::ofstream out = OpenForWrite(out_dir / (tag + "_mcc_mse.csv"));
      WriteConfigComment(out, echo);
      out << "T,cumulative_mcc,mse,max_true_support\n";
      for (std::size_t k = 0; k < r.mse.size(); ++k) {
        out << (k + 1) << ',' << FormatDouble(r.cumulative_mcc[k]) << ',' << FormatDouble(r.mse[k])
            << ',' << r.max_support[k] << '\n';
      }
    }
    const auto names = LinearLibraryTermNames(cfg.n);
    WriteMatrixPlain(out_dir / (tag + "_coefficients_true.csv"), r.true_coefficients, names, echo);
    for (std::size_t k = 0; k < r.coefficients.size(); ++k) {
      WriteMatrixPlain(out_dir / (tag + "_coefficients_T" + std::to_string(k + 1) + ".csv"),
                       r.coefficients[k], names, echo);
    }
  } else {
    std::vector<TopologyCase> cases;
    if (cfg.experiment == ExperimentId::kExp2) {
      Experiment2Result r = RunExperiment2(cfg);
      json mono;
      for (const auto& [regime, flags] : r.monotone) mono[regime] = flags;
      summary["monotone_in_density"] = mono;
      summary["robust_to_threshold"] = r.robust;
      cases = std::move(r.cases);
    } else {
      cases = RunTopologyCases(cfg);
    }
    json js = json::array();
    for (const auto& c : cases) js.push_back(CaseJson(c, cfg));
    summary["cases"] = js;
    WriteGridCsv(out_dir / (tag + "_grid.csv"), cases, cfg, echo);
    WritePcCsv(out_dir / (tag + "_pc.csv"), cases, cfg, echo);
  }
  std::ofstream out = OpenForWrite(out_dir / (tag + "_summary.json"));
  out << summary.dump(2) << '\n';
  return summary;
}

}  // namespace netrecon
