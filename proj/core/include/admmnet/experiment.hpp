#ifndef ADMMNET_EXPERIMENT_HPP
#define ADMMNET_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "admmnet/costs.hpp"
#include "admmnet/engine.hpp"
#include "admmnet/road.hpp"
#include "admmnet/theory.hpp"

namespace admmnet {

enum class TopologyKind { Path, Ring, Complete, RandomConnected, Explicit };
enum class ProblemKind { Regression, Svm };
enum class AlgoKind { Admm, Road };

struct ExperimentConfig {
  TopologyKind topology = TopologyKind::RandomConnected;
  double edge_prob = 0.5;
  std::uint64_t topo_seed = 7;
  std::vector<std::pair<int, int>> edges;  // Explicit only

  ProblemKind problem = ProblemKind::Regression;
  int D = 10;
  int T = 300;
  int record_every = 1;
  std::string c_spec = "opt";  // "opt" or a positive number
  AlgoKind algo = AlgoKind::Admm;
  std::uint64_t seed = 1;  // instance seed

  // Error model
  std::string error_kind = "none";  // none|gaussian|bounded|linear-decay|scripted
  int unreliable = 0;
  double mu_b = 0.0, sigma_b = 0.0;
  double e_cap = 0.0;
  double e0 = 0.0, decay_rate = 0.0;
  std::string scripted_csv;
  std::uint64_t error_seed = 99;

  std::string out_dir = ".";

  void validate() const;
};

/// Parses a JSON config file (keys mirror the fields above, kebab-case).
ExperimentConfig load_config_json(const std::string& path);

struct RegressionInstance {
  std::vector<Mat> B;  // one 3x3 block per agent
  std::vector<Vec> y;
  Vec x_true;
  CostList costs;
};

struct SvmInstance {
  std::vector<SmoothedHingeSvmCost::Sample> samples;  // all 1000 points
  CostList costs;                                     // 10 balanced shards
};

RegressionInstance synth_regression(std::uint64_t seed, int D = 10);
SvmInstance synth_svm(std::uint64_t seed, double reg_weight = 1.0,
                      double smoothing = 0.1);

struct ExperimentResult {
  ExperimentConfig config;
  Topology topo;
  ConsensusOperators ops;
  CostList costs;
  Vec x_star;        // consensus-stacked minimizer
  double f_star = 0.0;
  GlobalCostProfile profile;
  std::optional<TheoryConstants> constants;  // present when c_spec == "opt"
  double c = 0.0;
  double U = 0.0;  // ROAD threshold (always computed)
  Vec r_star;
  ErrorModel model;
  Trace trace;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Median objective gap over the last 20% of recorded iterations.
double plateau_estimate(const Trace& trace, double f_star);

/// First recorded k with f(x^k) - f* <= tol, or -1.
int iterations_to_tol(const Trace& trace, double f_star, double tol);

struct SweepRow {
  std::string algo;
  double c = 0.0, mu_b = 0.0;
  double final_gap = 0.0, plateau = 0.0;
  int iters_to_tol = -1;
  int flagged_arcs = 0;
};

std::vector<SweepRow> sweep(const ExperimentConfig& base,
                            const std::vector<AlgoKind>& algos,
                            const std::vector<std::string>& c_specs,
                            const std::vector<double>& mu_bs);

/// Deterministic shortest round-trip double formatting (printf %.17g).
std::string fmt_double(double x);

void write_trace_csv(const std::string& path, const ExperimentResult& result);
void write_constants_json(const std::string& path,
                          const ExperimentResult& result);
void write_bound_reports_csv(const std::string& path,
                             const std::vector<BoundReport>& reports);
void write_plot_csv(const std::string& path,
                    const std::map<std::string, std::vector<std::pair<int, double>>>&
                        series);
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows);
void write_svm_samples_csv(
    const std::string& path,
    const std::vector<SmoothedHingeSvmCost::Sample>& samples);

/// Runs every bound report applicable to the result's configuration.
/// Strongly convex + c == c_opt adds the contraction family; all runs get
/// the convex family; ROAD runs get the robust running-average bound.
std::vector<BoundReport> verify_result(const ExperimentResult& result);

}  // namespace admmnet

#endif
