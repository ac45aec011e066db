#include "admmnet/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "admmnet/rng.hpp"

namespace admmnet {

void ExperimentConfig::validate() const {
  if (D < 2) throw DomainError("ExperimentConfig: need at least two agents");
  if (T < 1) throw DomainError("ExperimentConfig: need a positive horizon");
  if (record_every < 1) throw DomainError("ExperimentConfig: bad record stride");
  if (topology == TopologyKind::RandomConnected &&
      (edge_prob <= 0 || edge_prob > 1))
    throw DomainError("ExperimentConfig: edge probability outside (0, 1]");
  if (topology == TopologyKind::Explicit && edges.empty())
    throw DomainError("ExperimentConfig: explicit topology without edges");
  if (c_spec != "opt") {
    try {
      if (std::stod(c_spec) <= 0) throw DomainError("");
    } catch (...) {
      throw DomainError("ExperimentConfig: c must be 'opt' or a positive number");
    }
  }
  if (unreliable < 0 || unreliable > D)
    throw DomainError("ExperimentConfig: bad unreliable count");
  static const std::vector<std::string> kinds = {
      "none", "gaussian", "bounded", "linear-decay", "scripted"};
  if (std::find(kinds.begin(), kinds.end(), error_kind) == kinds.end())
    throw DomainError("ExperimentConfig: unknown error kind " + error_kind);
  if (error_kind != "none" && error_kind != "scripted" && unreliable == 0)
    throw DomainError("ExperimentConfig: error model needs unreliable agents");
  if (error_kind == "scripted" && scripted_csv.empty())
    throw DomainError("ExperimentConfig: scripted errors need a CSV path");
  if (error_kind == "linear-decay" &&
      (decay_rate <= 0 || decay_rate >= 1 || e0 <= 0))
    throw DomainError("ExperimentConfig: decay needs e0 > 0, rate in (0, 1)");
}

namespace {

TopologyKind topology_from_string(const std::string& s) {
  if (s == "path") return TopologyKind::Path;
  if (s == "ring") return TopologyKind::Ring;
  if (s == "complete") return TopologyKind::Complete;
  if (s == "random-connected") return TopologyKind::RandomConnected;
  if (s == "explicit") return TopologyKind::Explicit;
  throw DomainError("unknown topology " + s);
}

std::string topology_to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::Path: return "path";
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Complete: return "complete";
    case TopologyKind::RandomConnected: return "random-connected";
    default: return "explicit";
  }
}

}  // namespace

ExperimentConfig load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_config_json: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error("load_config_json: " + std::string(ex.what()));
  }

  ExperimentConfig c;
  try {
    if (j.contains("topology")) c.topology = topology_from_string(j["topology"]);
    if (j.contains("edge-prob")) c.edge_prob = j["edge-prob"];
    if (j.contains("topo-seed")) c.topo_seed = j["topo-seed"];
    if (j.contains("edges"))
      for (const auto& e : j["edges"])
        c.edges.push_back({e.at(0), e.at(1)});
    if (j.contains("problem"))
      c.problem = j["problem"] == "svm" ? ProblemKind::Svm
                                        : ProblemKind::Regression;
    if (j.contains("agents")) c.D = j["agents"];
    if (j.contains("iterations")) c.T = j["iterations"];
    if (j.contains("record-every")) c.record_every = j["record-every"];
    if (j.contains("c")) {
      if (j["c"].is_string())
        c.c_spec = j["c"];
      else
        c.c_spec = fmt_double(j["c"].get<double>());
    }
    if (j.contains("algo"))
      c.algo = j["algo"] == "road" ? AlgoKind::Road : AlgoKind::Admm;
    if (j.contains("seed")) c.seed = j["seed"];
    if (j.contains("error-kind")) c.error_kind = j["error-kind"];
    if (j.contains("unreliable")) c.unreliable = j["unreliable"];
    if (j.contains("mu-b")) c.mu_b = j["mu-b"];
    if (j.contains("sigma-b")) c.sigma_b = j["sigma-b"];
    if (j.contains("e-cap")) c.e_cap = j["e-cap"];
    if (j.contains("e0")) c.e0 = j["e0"];
    if (j.contains("decay-rate")) c.decay_rate = j["decay-rate"];
    if (j.contains("scripted-csv")) c.scripted_csv = j["scripted-csv"];
    if (j.contains("error-seed")) c.error_seed = j["error-seed"];
    if (j.contains("out-dir")) c.out_dir = j["out-dir"];
  } catch (const nlohmann::json::exception& ex) {
    throw Error("load_config_json: bad field: " + std::string(ex.what()));
  }
  return c;
}

RegressionInstance synth_regression(std::uint64_t seed, int D) {
  RegressionInstance inst;
  inst.x_true = Vec(3);
  for (int d = 0; d < 3; ++d)
    inst.x_true[d] = rng::normal(seed, 0xA11A, 0, d);
  for (int i = 0; i < D; ++i) {
    Mat B(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int cidx = 0; cidx < 3; ++cidx)
        B(r, cidx) = rng::normal(seed, i, r, cidx);
    Vec noise(3);
    for (int d = 0; d < 3; ++d) noise[d] = rng::normal(seed, 0xB0B0, i, d);
    inst.B.push_back(B);
    inst.y.push_back(B * inst.x_true + noise);
    inst.costs.push_back(std::make_shared<LeastSquaresCost>(B, inst.y.back()));
  }
  return inst;
}

SvmInstance synth_svm(std::uint64_t seed, double reg_weight,
                      double smoothing) {
  SvmInstance inst;
  for (int t = 0; t < 1000; ++t) {
    SmoothedHingeSvmCost::Sample s;
    s.label = t % 2 == 0 ? 1 : -1;
    s.feature = Vec(2);
    for (int d = 0; d < 2; ++d)
      s.feature[d] = (s.label == 1 ? 2.8 : 0.0) + rng::normal(seed, 1, t, d);
    inst.samples.push_back(std::move(s));
  }
  // Consecutive blocks of 100 alternate labels, so every shard is 50/50.
  for (int i = 0; i < 10; ++i) {
    std::vector<SmoothedHingeSvmCost::Sample> shard(
        inst.samples.begin() + i * 100, inst.samples.begin() + (i + 1) * 100);
    inst.costs.push_back(std::make_shared<SmoothedHingeSvmCost>(
        std::move(shard), reg_weight / 10.0, smoothing));
  }
  return inst;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();

  ExperimentResult res;
  res.config = config;

  std::vector<std::pair<int, int>> edges;
  switch (config.topology) {
    case TopologyKind::Path: edges = path_edges(config.D); break;
    case TopologyKind::Ring: edges = ring_edges(config.D); break;
    case TopologyKind::Complete: edges = complete_edges(config.D); break;
    case TopologyKind::RandomConnected:
      edges = random_connected_edges(config.D, config.edge_prob,
                                     config.topo_seed);
      break;
    case TopologyKind::Explicit: edges = config.edges; break;
  }

  if (config.problem == ProblemKind::Regression) {
    auto inst = synth_regression(config.seed, config.D);
    res.costs = inst.costs;
  } else {
    if (config.D != 10)
      throw DomainError("run_experiment: the svm problem is sharded for 10 agents");
    auto inst = synth_svm(config.seed);
    res.costs = inst.costs;
  }
  const int N = static_cast<int>(res.costs.front()->dim());

  res.topo = build_topology(config.D, N, std::move(edges));
  res.ops = build_operators(res.topo);

  const Vec x_point = centralized_minimizer(res.costs, N);
  res.x_star = stack_consensus(x_point, config.D);
  res.f_star = stacked_value(res.costs, res.x_star);
  res.profile = estimate_constants(res.costs, x_point);

  if (config.c_spec == "opt") {
    if (res.profile.v <= 0)
      throw NotStronglyConvex(
          "run_experiment: c='opt' needs a strongly convex problem");
    res.constants = optimal_params(res.ops, res.profile.v, res.profile.L);
    res.c = res.constants->c_opt;
  } else {
    res.c = std::stod(config.c_spec);
  }

  res.U = road_threshold(res.ops, res.profile.V1, res.profile.V2, res.c);
  if (res.constants) res.constants->U = res.U;
  res.r_star =
      compute_r_star(res.ops, stacked_gradient(res.costs, res.x_star), res.c);

  res.model = ErrorModel{};
  if (config.error_kind != "none") {
    std::set<int> bad = pick_unreliable(
        config.D, config.unreliable, config.error_seed,
        config.algo == AlgoKind::Road ? &res.topo : nullptr);
    if (config.error_kind == "gaussian")
      res.model = ErrorModel::gaussian(bad, config.mu_b, config.sigma_b,
                                       config.error_seed);
    else if (config.error_kind == "bounded")
      res.model = ErrorModel::bounded(bad, config.e_cap, config.error_seed);
    else if (config.error_kind == "linear-decay")
      res.model = ErrorModel::linear_decay(bad, config.e0, config.decay_rate,
                                           config.error_seed);
    else
      res.model = ErrorModel::scripted(
          bad, load_scripted_errors_csv(config.scripted_csv));
  }

  AdmmConfig run_cfg;
  run_cfg.c = res.c;
  run_cfg.T = config.T;
  run_cfg.record_every = config.record_every;
  res.trace = config.algo == AlgoKind::Road
                  ? run_road(res.costs, res.ops, run_cfg, res.model, res.U)
                  : run(res.costs, res.ops, run_cfg, res.model);
  return res;
}

double plateau_estimate(const Trace& trace, double f_star) {
  const size_t n = trace.rows.size();
  if (n < 2) throw MissingFields("plateau_estimate: empty trace");
  const size_t window = std::max<size_t>(1, (n - 1) / 5);
  std::vector<double> gaps;
  for (size_t i = n - window; i < n; ++i)
    gaps.push_back(trace.rows[i].f - f_star);
  std::sort(gaps.begin(), gaps.end());
  const size_t m = gaps.size();
  return m % 2 ? gaps[m / 2] : 0.5 * (gaps[m / 2 - 1] + gaps[m / 2]);
}

int iterations_to_tol(const Trace& trace, double f_star, double tol) {
  for (const auto& row : trace.rows)
    if (row.k > 0 && row.f - f_star <= tol) return row.k;
  return -1;
}

std::vector<SweepRow> sweep(const ExperimentConfig& base,
                            const std::vector<AlgoKind>& algos,
                            const std::vector<std::string>& c_specs,
                            const std::vector<double>& mu_bs) {
  if (algos.empty() || c_specs.empty() || mu_bs.empty())
    throw DomainError("sweep: empty grid");
  std::vector<SweepRow> rows;
  for (AlgoKind algo : algos)
    for (const std::string& c_spec : c_specs)
      for (double mu : mu_bs) {
        ExperimentConfig cfg = base;
        cfg.algo = algo;
        cfg.c_spec = c_spec;
        cfg.mu_b = mu;
        if (mu == 0.0) {
          // mu_b = 0 denotes the error-free baseline row.
          cfg.error_kind = "none";
          cfg.unreliable = 0;
        }
        ExperimentResult r = run_experiment(cfg);
        SweepRow row;
        row.algo = algo == AlgoKind::Road ? "road" : "admm";
        row.c = r.c;
        row.mu_b = mu;
        row.final_gap = r.trace.final_row().f - r.f_star;
        row.plateau = plateau_estimate(r.trace, r.f_star);
        row.iters_to_tol = iterations_to_tol(r.trace, r.f_star, 1e-4);
        row.flagged_arcs = r.trace.final_row().flagged_arcs;
        rows.push_back(std::move(row));
      }
  return rows;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_trace_csv(const std::string& path, const ExperimentResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_trace_csv: cannot open " + path);
  out << "k,f_gap,consensus_violation,g_dist,lemma1_residual,flags,"
         "plateau_window\n";

  const GMetric metric{result.c, result.ops.L_plus};
  std::vector<double> gaps;
  for (const auto& row : result.trace.rows) {
    const double gap = row.f - result.f_star;
    gaps.push_back(gap);
    // Running plateau estimate: median gap over the trailing 20% of the
    // rows recorded so far.
    const size_t window = std::max<size_t>(1, gaps.size() / 5);
    std::vector<double> tail(gaps.end() - window, gaps.end());
    std::sort(tail.begin(), tail.end());
    const double plateau = tail.size() % 2
                               ? tail[tail.size() / 2]
                               : 0.5 * (tail[tail.size() / 2 - 1] +
                                        tail[tail.size() / 2]);
    const double g_dist =
        metric.norm_sq(row.r - result.r_star, row.z - result.x_star);
    out << row.k << ',' << fmt_double(gap) << ','
        << fmt_double((result.ops.Q * row.x).norm()) << ','
        << fmt_double(g_dist) << ',' << fmt_double(row.lemma1_residual) << ','
        << row.flagged_arcs << ',' << fmt_double(plateau) << '\n';
  }
}

void write_constants_json(const std::string& path,
                          const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["topology"] = topology_to_string(result.config.topology);
  j["agents"] = result.topo.D;
  j["dimension"] = result.topo.N;
  j["edges"] = result.topo.E();
  j["c"] = result.c;
  j["U"] = result.U;
  j["f_star"] = result.f_star;
  j["profile"] = {{"v", result.profile.v},
                  {"L", result.profile.L},
                  {"V1", result.profile.V1},
                  {"V2", result.profile.V2}};
  j["spectra"] = {
      {"W", {{"sigma_min", result.ops.w_stats.sigma_min_nonzero},
             {"sigma_max", result.ops.w_stats.sigma_max}}},
      {"L_plus", {{"sigma_min", result.ops.l_plus_stats.sigma_min_nonzero},
                  {"sigma_max", result.ops.l_plus_stats.sigma_max}}},
      {"L_minus", {{"sigma_min", result.ops.l_minus_stats.sigma_min_nonzero},
                   {"sigma_max", result.ops.l_minus_stats.sigma_max}}},
      {"Q", {{"sigma_min", result.ops.q_stats.sigma_min_nonzero},
             {"sigma_max", result.ops.q_stats.sigma_max}}}};
  if (result.constants) {
    const TheoryConstants& t = *result.constants;
    j["constants"] = {
        {"v", t.v},         {"L", t.L},
        {"lambda1", t.lambda1}, {"lambda2", t.lambda2},
        {"lambda3", t.lambda3}, {"lambda4", t.lambda4},
        {"b", t.b},         {"beta", t.beta},
        {"delta", t.delta}, {"P", t.P},
        {"A1", t.A1},       {"A2", t.A2},
        {"B", t.B},         {"C", t.C},
        {"c_opt", t.c_opt}, {"U", t.U},
        {"condition9_ok", t.condition9_ok}};
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_constants_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

void write_bound_reports_csv(const std::string& path,
                             const std::vector<BoundReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_bound_reports_csv: cannot open " + path);
  out << "report,k,slack\n";
  for (const auto& rep : reports)
    for (const auto& [k, slack] : rep.slacks)
      out << rep.name << ',' << k << ',' << fmt_double(slack) << '\n';
}

void write_plot_csv(
    const std::string& path,
    const std::map<std::string, std::vector<std::pair<int, double>>>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_plot_csv: cannot open " + path);
  out << "series,k,value\n";
  for (const auto& [name, points] : series)
    for (const auto& [k, value] : points)
      out << name << ',' << k << ',' << fmt_double(value) << '\n';
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_sweep_csv: cannot open " + path);
  out << "algo,c,mu_b,final_gap,plateau,iters_to_1e-4,flagged_arcs\n";
  for (const auto& r : rows)
    out << r.algo << ',' << fmt_double(r.c) << ',' << fmt_double(r.mu_b)
        << ',' << fmt_double(r.final_gap) << ',' << fmt_double(r.plateau)
        << ',' << r.iters_to_tol << ',' << r.flagged_arcs << '\n';
}

void write_svm_samples_csv(
    const std::string& path,
    const std::vector<SmoothedHingeSvmCost::Sample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_svm_samples_csv: cannot open " + path);
  for (const auto& s : samples) {
    for (long d = 0; d < s.feature.size(); ++d)
      out << fmt_double(s.feature[d]) << ',';
    out << s.label << '\n';
  }
}

std::vector<BoundReport> verify_result(const ExperimentResult& result) {
  std::vector<BoundReport> reports;
  if (result.config.record_every != 1) return reports;  // cumulative checks need stride 1

  // Theorem-1 style checks are statements about the plain update map; a
  // robust trace only answers to the robust running-average bound.
  if (result.config.algo == AlgoKind::Admm) {
    ConvexReport convex = convex_report(result.trace, result.ops, result.c,
                                        result.x_star, result.costs);
    reports.push_back(std::move(convex.last_iterate));
    reports.push_back(std::move(convex.averaged));
  }

  if (result.constants && result.config.algo == AlgoKind::Admm) {
    ContractionReport con =
        contraction_report(result.trace, *result.constants, result.ops,
                           result.r_star, result.x_star, result.costs);
    reports.push_back(std::move(con.theorem2));
    reports.push_back(std::move(con.theorem3_a1));
    reports.push_back(std::move(con.theorem3_a2));
    Corollary1Report cor =
        corollary1_monitor(result.trace, *result.constants, result.ops,
                           result.r_star, result.x_star);
    if (cor.satisfied != Corollary1Case::None)
      reports.push_back(std::move(cor.conclusion));
  }

  if (result.config.algo == AlgoKind::Road)
    reports.push_back(theorem5_report(result.trace, result.ops, result.c,
                                      result.U, result.topo.E(),
                                      result.x_star, result.costs));
  if (result.config.error_kind == "none")
    reports.push_back(lemma8_report(result.trace, result.ops,
                                    result.profile.V1, result.profile.V2,
                                    result.c));
  return reports;
}

}  // namespace admmnet
