#include "admmnet/road.hpp"

namespace admmnet {

std::optional<double> DeviationTracker::record(int i, int j,
                                               double deviation) {
  if (deviation < 0) throw DomainError("DeviationTracker: negative deviation");
  double& s = stat[{i, j}];
  s += deviation;
  if (s > U && !flagged.count({i, j})) {
    flagged.insert({i, j});
    return s;
  }
  return std::nullopt;
}

double road_step(NetworkState& state, DeviationTracker& tracker,
                 const CostList& costs, const ConsensusOperators& ops,
                 const AdmmConfig& config, const ErrorModel& model,
                 std::vector<std::tuple<int, int, double>>* new_flags) {
  config.validate();
  const int D = ops.topo.D, N = ops.topo.N;
  if (static_cast<int>(costs.size()) != D)
    throw DimensionMismatch("road_step: one cost per agent required");

  const Vec z_prev = state.z;
  Vec x_next(static_cast<long>(D) * N);
  for (int i = 0; i < D; ++i) {
    // A flagged neighbor's broadcast is replaced by the agent's own
    // broadcast value, so the substitution is invisible whenever the agent
    // itself is reliable and cancels inside the Laplacian rows otherwise.
    Vec neighbor_sum = Vec::Zero(N);
    for (int j : ops.topo.neighbors[i])
      neighbor_sum += tracker.is_flagged(i, j) ? z_prev.segment(i * N, N)
                                               : z_prev.segment(j * N, N);
    try {
      x_next.segment(i * N, N) = x_update_solve(
          *costs[i], ops.topo.degree(i), config.c,
          state.alpha.segment(i * N, N), neighbor_sum,
          z_prev.segment(i * N, N));
    } catch (const SolverDivergence& ex) {
      throw SolverDivergence("agent " + std::to_string(i) + " at iteration " +
                             std::to_string(state.k + 1) + ": " + ex.what());
    }
  }

  state.e = sample_error(model, state.k + 1, D, N, x_next);
  state.x = x_next;
  state.z = state.x + state.e;

  // Multiplier rows with flagged broadcasts redirected to the agent's own
  // iterate; flags in force are still the round-start ones.
  for (int i = 0; i < D; ++i) {
    Vec row = static_cast<double>(ops.topo.degree(i)) *
              state.z.segment(i * N, N);
    for (int j : ops.topo.neighbors[i])
      row -= tracker.is_flagged(i, j) ? state.z.segment(i * N, N)
                                      : state.z.segment(j * N, N);
    state.alpha.segment(i * N, N) += config.c * row;
  }

  state.r += ops.Q * state.z;
  state.z_sum += state.z;
  state.k += 1;

  const bool clean = tracker.flagged.empty();
  // Statistics use the fresh broadcasts; new flags apply from the next round.
  for (int i = 0; i < D; ++i)
    for (int j : ops.topo.neighbors[i]) {
      const double dev =
          (state.x.segment(i * N, N) - state.z.segment(j * N, N)).norm();
      if (auto s = tracker.record(i, j, dev); s && new_flags)
        new_flags->push_back({i, j, *s});
    }

  if (!config.verify_identities || !clean) return 0.0;
  return verify_lemma1(state.x, z_prev, state.z_sum - state.z, costs, ops,
                       config.c);
}

Trace run_road(const CostList& costs, const ConsensusOperators& ops,
               const AdmmConfig& config, const ErrorModel& model, double U) {
  config.validate();
  Trace trace;
  trace.c = config.c;
  trace.record_every = config.record_every;
  trace.model = model;

  DeviationTracker tracker(U);
  NetworkState state = init_state(ops, model, config.c);
  double sum_f = 0.0, sum_qx = 0.0, err_accum = 0.0;
  Vec x_sum = Vec::Zero(state.x.size());

  auto make_row = [&](double res,
                      std::vector<std::tuple<int, int, double>> flags) {
    TraceRow row;
    row.k = state.k;
    row.x = state.x;
    row.z = state.z;
    row.alpha = state.alpha;
    row.r = state.r;
    row.e = state.e;
    row.f = stacked_value(costs, state.x);
    row.lemma1_residual = res;
    row.sum_f = sum_f;
    row.sum_qx_norm = sum_qx;
    row.err_accum = err_accum;
    row.x_sum = x_sum;
    row.flagged_arcs = static_cast<int>(tracker.flagged.size());
    row.new_flags = std::move(flags);
    return row;
  };
  trace.rows.push_back(make_row(0.0, {}));

  const double err_coef = ops.l_plus_stats.sigma_max *
                          ops.l_plus_stats.sigma_max /
                          (2.0 * ops.l_minus_stats.sigma_min_nonzero);
  std::vector<std::tuple<int, int, double>> pending;
  for (int k = 1; k <= config.T; ++k) {
    std::vector<std::tuple<int, int, double>> flags;
    const double res =
        road_step(state, tracker, costs, ops, config, model, &flags);
    sum_f += stacked_value(costs, state.x);
    sum_qx += (ops.Q * state.x).norm();
    err_accum += err_coef * state.e.squaredNorm() +
                 state.e.dot(2.0 * (ops.Q * state.r));
    x_sum += state.x;
    pending.insert(pending.end(), flags.begin(), flags.end());
    if (k % config.record_every == 0 || k == config.T) {
      trace.rows.push_back(make_row(res, std::move(pending)));
      pending.clear();
    }
  }
  return trace;
}

}  // namespace admmnet
