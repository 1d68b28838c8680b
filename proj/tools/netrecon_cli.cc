// Command-line front end for the reconstruction pipeline.
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netrecon/dynamics.h"
#include "netrecon/dynamics_id.h"
#include "netrecon/errors.h"
#include "netrecon/experiment.h"
#include "netrecon/graph.h"
#include "netrecon/io.h"
#include "netrecon/measurement.h"
#include "netrecon/parallel.h"
#include "netrecon/random.h"
#include "netrecon/sparse_recovery.h"
#include "netrecon/topology.h"

namespace {

using netrecon::FormatDouble;
using nlohmann::json;

void WriteJsonFile(const std::string& path, const json& j) {
  std::ofstream out = netrecon::OpenForWrite(path);
  out << j.dump(2) << '\n';
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in = netrecon::OpenForRead(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw netrecon::FormatError(path + ": " + e.what());
  }
}

netrecon::Graph LoadGraph(const std::string& path) {
  std::ifstream in = netrecon::OpenForRead(path);
  return netrecon::ReadGraph(in);
}

netrecon::MeasurementMatrix LoadMatrix(const std::string& path) {
  std::ifstream in = netrecon::OpenForRead(path);
  return netrecon::ReadMatrixCsv(in);
}

std::vector<netrecon::Trajectory> LoadTrajectories(const std::string& path) {
  std::ifstream in = netrecon::OpenForRead(path);
  return netrecon::ReadTrajectoriesCsv(in);
}

std::string SidecarPath(const std::string& out) { return out + ".json"; }

// System parameters as written next to a trajectory dump.
json SystemJson(const netrecon::NetworkSystem& sys, const std::vector<double>& eps,
                std::uint64_t seed, bool directed) {
  json j;
  j["n"] = sys.size();
  j["directed"] = directed;
  j["seed"] = seed;
  j["isolated"] = sys.isolated_kind() == netrecon::IsolatedKind::kLogistic ? "logistic" : "linear";
  j["coupling"] = sys.coupling_kind() == netrecon::CouplingKind::kDiffusive ? "diffusive" : "sine";
  j["coupling_sign"] = sys.coupling_sign() == netrecon::CouplingSign::kSelfMinusNeighbor
                           ? "self_minus_neighbor"
                           : "neighbor_minus_self";
  j["rates"] = sys.rates();
  json edges = json::array();
  for (int i = 0; i < sys.size(); ++i) {
    for (int k : sys.in_neighbors(i)) edges.push_back({i + 1, k + 1, sys.alpha()(i, k)});
  }
  j["alpha"] = edges;
  j["pinch_magnitudes"] = eps;
  return j;
}

netrecon::NetworkSystem SystemFromJson(const json& j) {
  const int n = j.at("n").get<int>();
  netrecon::Graph g(n);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : j.at("alpha")) {
    const int i = e.at(0).get<int>() - 1;
    const int k = e.at(1).get<int>() - 1;
    g.AddEdge(i, k);
    alpha(i, k) = e.at(2).get<double>();
  }
  const auto iso = j.at("isolated").get<std::string>() == "logistic"
                       ? netrecon::IsolatedKind::kLogistic
                       : netrecon::IsolatedKind::kLinear;
  const auto coup = j.at("coupling").get<std::string>() == "diffusive"
                        ? netrecon::CouplingKind::kDiffusive
                        : netrecon::CouplingKind::kSine;
  const auto sign = j.at("coupling_sign").get<std::string>() == "self_minus_neighbor"
                        ? netrecon::CouplingSign::kSelfMinusNeighbor
                        : netrecon::CouplingSign::kNeighborMinusSelf;
  return netrecon::NetworkSystem(std::move(g), iso, j.at("rates").get<std::vector<double>>(),
                                 coup, sign, std::move(alpha));
}

int ResolveWorkers(int flag) { return flag > 0 ? flag : netrecon::DefaultWorkerCount(); }

netrecon::Profile ProfileOf(const std::string& s) { return netrecon::ParseProfile(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network topology and dynamics reconstruction from mean-field measurements"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: NETRECON_WORKERS, else hardware threads)");

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "Sample an Erdos-Renyi graph");
  int gen_n = 0;
  double gen_p = 0.0;
  std::uint64_t gen_seed = 0;
  bool gen_directed = false;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Vertex count")->required();
  gen->add_option("--p", gen_p, "Edge probability")->required();
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_flag("--directed", gen_directed, "Sample each ordered pair independently");
  gen->add_option("--out", gen_out, "Edge-list output")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate the N pinched trajectories");
  std::string sim_graph, sim_dyn = "logistic", sim_coupling = "diffusive",
                         sim_sign = "self_minus_neighbor", sim_out;
  std::uint64_t sim_seed = 0;
  int sim_t = 1;
  std::vector<double> sim_eps{0.5, 1.0};
  sim->add_option("--graph", sim_graph, "Graph edge list")->required();
  sim->add_option("--dynamics", sim_dyn, "Isolated dynamics")
      ->check(CLI::IsMember({"logistic", "linear"}));
  sim->add_option("--coupling", sim_coupling, "Coupling function")
      ->check(CLI::IsMember({"diffusive", "sine"}));
  sim->add_option("--sign", sim_sign, "Coupling argument order")
      ->check(CLI::IsMember({"self_minus_neighbor", "neighbor_minus_self"}));
  sim->add_option("--seed", sim_seed, "Seed for parameters and pinch magnitudes")->required();
  sim->add_option("--T", sim_t, "Horizon")->check(CLI::PositiveNumber);
  sim->add_option("--eps-range", sim_eps, "Pinch magnitude range lo hi")->expected(2);
  sim->add_option("--out", sim_out, "Trajectory CSV (sidecar written to <out>.json)")->required();

  // measure
  auto* meas = app.add_subcommand("measure", "Apply a measurement matrix to trajectories");
  std::string meas_states, meas_phi, meas_out, meas_phi_out;
  int meas_gauss = 0;
  std::uint64_t meas_seed = 0;
  meas->add_option("--graph-states", meas_states, "Trajectory CSV")->required();
  auto* phi_opt = meas->add_option("--phi", meas_phi, "Matrix CSV");
  auto* gauss_opt = meas->add_option("--gaussian", meas_gauss, "Draw a Gaussian P x N matrix");
  phi_opt->excludes(gauss_opt);
  meas->add_option("--seed", meas_seed, "Gaussian matrix seed");
  meas->add_option("--phi-out", meas_phi_out, "Write the Gaussian matrix here");
  meas->add_option("--out", meas_out, "Mean-field CSV")->required();

  // certify
  auto* cert = app.add_subcommand("certify", "Spark and RIP certificates of a small matrix");
  std::string cert_phi;
  bool cert_spark = false;
  int cert_rip = 0;
  cert->add_option("--phi", cert_phi, "Matrix CSV")->required();
  cert->add_flag("--spark", cert_spark, "Compute the spark");
  cert->add_option("--rip", cert_rip, "Compute delta_s for this s");

  // recover
  auto* rec = app.add_subcommand("recover", "Recover sparse states from mean-field measurements");
  std::string rec_phi, rec_mf, rec_method = "bp", rec_out, rec_backend = "admm";
  double rec_tau = 1e-9, rec_tol = 1e-10, rec_xi = 0.0;
  int rec_smax = 6;
  rec->add_option("--phi", rec_phi, "Matrix CSV")->required();
  rec->add_option("--meanfields", rec_mf, "Mean-field CSV")->required();
  rec->add_option("--method", rec_method, "Recovery program")
      ->check(CLI::IsMember({"bp", "bpdn", "l0"}));
  rec->add_option("--backend", rec_backend, "Basis pursuit solver")
      ->check(CLI::IsMember({"admm", "lp"}));
  rec->add_option("--tau", rec_tau, "Support threshold");
  rec->add_option("--tol", rec_tol, "Relative feasibility tolerance");
  rec->add_option("--xi", rec_xi, "Noise radius for bpdn");
  rec->add_option("--smax", rec_smax, "Largest support for l0");
  rec->add_option("--out", rec_out, "Recovered CSV (diagnostics in <out>.json)")->required();

  // topology
  auto* topo = app.add_subcommand("topology", "Assemble the adjacency from recovered x^q(1)");
  std::string topo_supports, topo_truth, topo_out, topo_graph_out;
  double topo_tau = 1e-9;
  topo->add_option("--supports", topo_supports, "Recovered CSV from 'recover'")->required();
  topo->add_option("--truth", topo_truth, "True graph for scoring");
  topo->add_option("--tau", topo_tau, "Support threshold");
  topo->add_option("--graph-out", topo_graph_out, "Write the reconstructed edge list");
  topo->add_option("--out", topo_out, "Report JSON")->required();

  // pc-search
  auto* pcs = app.add_subcommand("pc-search", "Critical measurement search over a P grid");
  std::string pcs_config, pcs_profile = "smoke", pcs_out = "results";
  pcs->add_option("--config", pcs_config, "Experiment config JSON")->required();
  pcs->add_option("--profile", pcs_profile, "Defaults profile")
      ->check(CLI::IsMember({"smoke", "paper"}));
  pcs->add_option("--out-dir", pcs_out, "Output directory");

  // fit-dynamics
  auto* fit = app.add_subcommand("fit-dynamics", "Identify local dynamics from trajectories");
  std::string fit_states, fit_library = "linear", fit_system, fit_out;
  double fit_threshold = 0.05;
  int fit_t = 0;
  fit->add_option("--states", fit_states, "Trajectory CSV")->required();
  fit->add_option("--library", fit_library, "Feature library")
      ->check(CLI::IsMember({"linear", "custom"}));
  fit->add_option("--system", fit_system, "System sidecar JSON (oracle dictionary for 'custom')");
  fit->add_option("--threshold", fit_threshold, "Sparse regression threshold");
  fit->add_option("--T", fit_t, "Use steps 0..T-1 (default: full horizon)");
  fit->add_option("--out", fit_out, "Coefficient CSV (heatmap in <out>.matrix.csv)")->required();

  // exp1..exp3
  std::map<std::string, std::pair<CLI::App*, netrecon::ExperimentId>> exps;
  std::string exp_config, exp_profile = "smoke", exp_out = "results";
  for (auto [name, id] : {std::pair{"exp1", netrecon::ExperimentId::kExp1},
                          std::pair{"exp2", netrecon::ExperimentId::kExp2},
                          std::pair{"exp3", netrecon::ExperimentId::kExp3}}) {
    auto* sub = app.add_subcommand(name, std::string("Run ") + name);
    sub->add_option("--config", exp_config, "Experiment config JSON");
    sub->add_option("--profile", exp_profile, "Defaults profile")
        ->check(CLI::IsMember({"smoke", "paper"}));
    sub->add_option("--out-dir", exp_out, "Output directory");
    exps[name] = {sub, id};
  }

  CLI11_PARSE(app, argc, argv);
  const int nworkers = ResolveWorkers(workers);

  try {
    if (*gen) {
      const netrecon::Graph g =
          netrecon::GenerateErdosRenyi(gen_n, gen_p, gen_seed, gen_directed);
      std::ofstream out = netrecon::OpenForWrite(gen_out);
      netrecon::WriteGraph(out, g, gen_directed);
    } else if (*sim) {
      const netrecon::Graph g = LoadGraph(sim_graph);
      netrecon::SystemSpec spec;
      spec.isolated = sim_dyn == "logistic" ? netrecon::IsolatedKind::kLogistic
                                            : netrecon::IsolatedKind::kLinear;
      spec.coupling = sim_coupling == "diffusive" ? netrecon::CouplingKind::kDiffusive
                                                  : netrecon::CouplingKind::kSine;
      spec.sign = sim_sign == "self_minus_neighbor" ? netrecon::CouplingSign::kSelfMinusNeighbor
                                                    : netrecon::CouplingSign::kNeighborMinusSelf;
      spec.symmetric_alpha = g.IsSymmetric();
      const auto sys = netrecon::SampleSystem(
          g, spec, netrecon::DeriveSeed(sim_seed, netrecon::SeedStream::kDynamics));
      const auto eps = netrecon::SamplePinchMagnitudes(
          g.size(), sim_eps[0], sim_eps[1],
          netrecon::DeriveSeed(sim_seed, netrecon::SeedStream::kPinch));
      const auto trajs = netrecon::SimulatePinchedFamily(sys, eps, sim_t, nworkers);
      std::ofstream out = netrecon::OpenForWrite(sim_out);
      netrecon::WriteTrajectoriesCsv(out, trajs);
      WriteJsonFile(SidecarPath(sim_out), SystemJson(sys, eps, sim_seed, !g.IsSymmetric()));
    } else if (*meas) {
      const auto trajs = LoadTrajectories(meas_states);
      if (trajs.empty()) throw netrecon::FormatError("no trajectories in " + meas_states);
      const int n = static_cast<int>(trajs.front().states.front().size());
      std::optional<netrecon::MeasurementMatrix> m;
      if (!meas_phi.empty()) {
        m = LoadMatrix(meas_phi);
      } else if (meas_gauss > 0) {
        m = netrecon::GaussianMatrix(meas_gauss, n, meas_seed);
      } else {
        throw netrecon::ParameterError("measure needs --phi or --gaussian");
      }
      if (!meas_phi_out.empty()) {
        std::ofstream out = netrecon::OpenForWrite(meas_phi_out);
        netrecon::WriteMatrixCsv(out, *m);
      }
      netrecon::MeanFieldSet set;
      for (const auto& traj : trajs) {
        for (int t = 0; t <= traj.horizon(); ++t) {
          set.Add(traj.pinch_index, t, netrecon::Measure(*m, traj.states[t]));
        }
      }
      std::ofstream out = netrecon::OpenForWrite(meas_out);
      netrecon::WriteMeanFieldCsv(out, set);
    } else if (*cert) {
      const auto m = LoadMatrix(cert_phi);
      json j{{"P", m.rows()}, {"N", m.cols()}};
      if (cert_spark) {
        const int spark = netrecon::Spark(m);
        j["spark"] = spark;
        j["full_spark"] = spark == m.rows() + 1;
      }
      if (cert_rip > 0) {
        const double delta = netrecon::RipConstantExact(m, cert_rip);
        j["rip_s"] = cert_rip;
        j["rip_delta"] = delta;
        j["strc_holds"] = delta < std::sqrt(2.0) - 1.0;
      }
      std::cout << j.dump(2) << '\n';
    } else if (*rec) {
      const auto m = LoadMatrix(rec_phi);
      std::ifstream in = netrecon::OpenForRead(rec_mf);
      const auto set = netrecon::ReadMeanFieldCsv(in);
      netrecon::RecoveryConfig cfg;
      cfg.feasibility_tol = rec_tol;
      cfg.support_threshold = rec_tau;
      cfg.backend = rec_backend == "lp" ? netrecon::SolverBackend::kLinearProgram
                                        : netrecon::SolverBackend::kOperatorSplitting;
      std::vector<std::pair<int, int>> keys;
      std::vector<Eigen::VectorXd> ys;
      for (const auto& [key, y] : set.records()) {
        keys.push_back(key);
        ys.push_back(y);
      }
      std::vector<netrecon::RecoveryResult> results(ys.size());
      if (rec_method == "l0") {
        netrecon::ParallelFor(ys.size(), nworkers, [&](std::size_t k) {
          results[k] = netrecon::L0Oracle(m, ys[k], rec_smax, cfg);
        });
      } else {
        const netrecon::BasisPursuitSolver solver(m, cfg);
        netrecon::ParallelFor(ys.size(), nworkers, [&](std::size_t k) {
          results[k] = rec_method == "bp" ? solver.Solve(ys[k]) : solver.SolveDenoise(ys[k], rec_xi);
        });
      }
      std::ofstream out = netrecon::OpenForWrite(rec_out);
      out << "q,t,i,x_hat\n";
      json diag = json::array();
      for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& r = results[k];
        const auto [q, t] = keys[k];
        for (Eigen::Index i = 0; i < r.x_hat.size(); ++i) {
          const double v = std::abs(r.x_hat(i)) > rec_tau ? r.x_hat(i) : 0.0;
          out << q + 1 << ',' << t << ',' << i + 1 << ',' << FormatDouble(v) << '\n';
        }
        json d{{"q", q + 1},
               {"t", t},
               {"status", netrecon::ToString(r.status)},
               {"iterations", r.iterations},
               {"residual", r.residual},
               {"objective", r.objective},
               {"support_size", r.support.size()}};
        if (rec_method == "bp") d["certified"] = r.certified;
        if (rec_method == "l0") d["minimizers"] = r.minimizers.size();
        diag.push_back(d);
      }
      WriteJsonFile(SidecarPath(rec_out),
                    {{"method", rec_method}, {"tau", rec_tau}, {"tol", rec_tol}, {"records", diag}});
    } else if (*topo) {
      std::ifstream in = netrecon::OpenForRead(topo_supports);
      // Reuse the trajectory reader: the recovered CSV has the same layout.
      const auto recovered = netrecon::ReadTrajectoriesCsv(in);
      std::vector<netrecon::VertexSet> supports;
      for (const auto& traj : recovered) {
        if (traj.horizon() < 1) throw netrecon::FormatError("recovered CSV lacks t = 1 rows");
        supports.push_back(netrecon::ThresholdSupport(traj.states[1], topo_tau));
      }
      const netrecon::Graph g = netrecon::ReconstructTopology(supports);
      json report{{"n", g.size()}, {"tau", topo_tau}, {"edges", g.EdgeCount()}};
      if (!topo_truth.empty()) {
        const netrecon::Graph truth = LoadGraph(topo_truth);
        const auto c = netrecon::EdgeContingency(truth, g);
        report["mcc"] = netrecon::EvaluateReconstruction(truth, g);
        report["contingency"] = {{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
        report["exact"] = truth == g;
      }
      if (!topo_graph_out.empty()) {
        std::ofstream out = netrecon::OpenForWrite(topo_graph_out);
        netrecon::WriteGraph(out, g, !g.IsSymmetric());
      }
      WriteJsonFile(topo_out, report);
    } else if (*pcs) {
      auto cfg = netrecon::ParseConfig(ReadJsonFile(pcs_config), netrecon::ExperimentId::kCustom,
                                       ProfileOf(pcs_profile));
      if (workers > 0) cfg.workers = workers;
      if (cfg.experiment == netrecon::ExperimentId::kExp3) {
        throw netrecon::ParameterError("pc-search runs topology experiments only");
      }
      const json summary = netrecon::RunAndWrite(cfg, pcs_out);
      std::cout << summary.dump(2) << '\n';
    } else if (*fit) {
      auto trajs = LoadTrajectories(fit_states);
      if (trajs.empty()) throw netrecon::FormatError("no trajectories in " + fit_states);
      const int horizon = fit_t > 0 ? fit_t : trajs.front().horizon();
      std::ofstream out = netrecon::OpenForWrite(fit_out);
      out << "node,term_name,value\n";
      if (fit_library == "linear") {
        const auto lib = netrecon::BuildLinearLibrary(trajs, horizon);
        netrecon::SparseRegressionOptions opts;
        opts.threshold = fit_threshold;
        const auto res = netrecon::SparseRegression(lib.features, lib.targets, opts);
        const auto names = netrecon::LinearLibraryTermNames(static_cast<int>(res.coefficients.rows()));
        for (Eigen::Index i = 0; i < res.coefficients.rows(); ++i) {
          for (Eigen::Index k = 0; k < res.coefficients.cols(); ++k) {
            out << i + 1 << ',' << names[k] << ',' << FormatDouble(res.coefficients(i, k)) << '\n';
          }
        }
        std::ofstream heat = netrecon::OpenForWrite(fit_out + ".matrix.csv");
        heat << "node";
        for (const auto& nm : names) heat << ',' << nm;
        heat << '\n';
        for (Eigen::Index i = 0; i < res.coefficients.rows(); ++i) {
          heat << i + 1;
          for (Eigen::Index k = 0; k < res.coefficients.cols(); ++k) {
            heat << ',' << FormatDouble(res.coefficients(i, k));
          }
          heat << '\n';
        }
      } else {
        if (fit_system.empty()) throw netrecon::ParameterError("custom library needs --system");
        const auto sys = SystemFromJson(ReadJsonFile(fit_system));
        const auto model = netrecon::OracleDictionary(sys);
        for (int i = 0; i < sys.size(); ++i) {
          const auto psi = netrecon::BuildDictionaryMatrix(model.dictionary, i, trajs, horizon);
          const Eigen::VectorXd target = netrecon::StackTargets(i, trajs, horizon);
          const Eigen::VectorXd coef = netrecon::FitCoefficients(psi, target);
          const auto& terms = model.dictionary.terms(i);
          for (std::size_t k = 0; k < terms.size(); ++k) {
            out << i + 1 << ',' << terms[k].name() << ',' << FormatDouble(coef(k)) << '\n';
          }
        }
      }
    } else {
      for (const auto& [name, entry] : exps) {
        if (!*entry.first) continue;
        const netrecon::Profile profile = ProfileOf(exp_profile);
        netrecon::ExperimentConfig cfg =
            exp_config.empty()
                ? netrecon::DefaultConfig(entry.second, profile)
                : netrecon::ParseConfig(ReadJsonFile(exp_config), entry.second, profile);
        if (cfg.experiment != entry.second) {
          throw netrecon::ParameterError("config declares experiment '" +
                                         netrecon::ToString(cfg.experiment) + "', not " + name);
        }
        if (workers > 0) cfg.workers = workers;
        const json summary = netrecon::RunAndWrite(cfg, exp_out);
        std::cout << summary.dump(2) << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
