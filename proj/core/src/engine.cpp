#include "admmnet/engine.hpp"

namespace admmnet {

double GMetric::norm_sq(const Vec& r_part, const Vec& x_part) const {
  if (r_part.size() != L_plus.rows() || x_part.size() != L_plus.rows())
    throw DimensionMismatch("GMetric: stacked dimensions disagree");
  return c * r_part.squaredNorm() +
         0.5 * c * x_part.dot(L_plus * x_part);
}

double g_norm_sq(const GMetric& metric, const Vec& r_part, const Vec& x_part) {
  return metric.norm_sq(r_part, x_part);
}

NetworkState init_state(const ConsensusOperators& ops, const ErrorModel& model,
                        double c) {
  const int D = ops.topo.D, N = ops.topo.N;
  NetworkState s;
  s.x = Vec::Zero(D * N);
  s.e = sample_error(model, 0, D, N, s.x);
  s.z = s.x + s.e;
  // alpha^0 = c L_- z^0 keeps the telescoped multiplier identity
  // alpha^k = c L_- sum_{s<=k} z^s exact even when e^0 != 0; it reduces to
  // the usual alpha^0 = 0 in error-free runs.
  s.alpha = c * (ops.L_minus * s.z);
  s.r = ops.Q * s.z;  // r^0 includes the k = 0 term
  s.z_sum = s.z;
  s.k = 0;
  return s;
}

double step(NetworkState& state, const CostList& costs,
            const ConsensusOperators& ops, const AdmmConfig& config,
            const ErrorModel& model) {
  config.validate();
  const int D = ops.topo.D, N = ops.topo.N;
  if (static_cast<int>(costs.size()) != D)
    throw DimensionMismatch("step: one cost per agent required");

  const Vec z_prev = state.z;
  Vec x_next(D * N);
  for (int i = 0; i < D; ++i) {
    Vec neighbor_sum = Vec::Zero(N);
    for (int j : ops.topo.neighbors[i]) neighbor_sum += z_prev.segment(j * N, N);
    try {
      x_next.segment(i * N, N) = x_update_solve(
          *costs[i], ops.topo.degree(i), config.c,
          state.alpha.segment(i * N, N), neighbor_sum, z_prev.segment(i * N, N));
    } catch (const SolverDivergence& ex) {
      throw SolverDivergence("agent " + std::to_string(i) + " at iteration " +
                             std::to_string(state.k + 1) + ": " + ex.what());
    }
  }

  state.e = sample_error(model, state.k + 1, D, N, x_next);
  state.x = x_next;
  state.z = state.x + state.e;
  state.alpha += config.c * (ops.L_minus * state.z);
  state.r += ops.Q * state.z;
  state.z_sum += state.z;
  state.k += 1;

  if (!config.verify_identities) return 0.0;
  return verify_lemma1(state.x, z_prev, state.z_sum - state.z, costs, ops,
                       config.c);
}

namespace {

TraceRow make_row(const NetworkState& s, const CostList& costs,
                  double lemma1_res, double sum_f, double sum_qx,
                  double err_accum, const Vec& x_sum) {
  TraceRow row;
  row.k = s.k;
  row.x = s.x;
  row.z = s.z;
  row.alpha = s.alpha;
  row.r = s.r;
  row.e = s.e;
  row.f = stacked_value(costs, s.x);
  row.lemma1_residual = lemma1_res;
  row.sum_f = sum_f;
  row.sum_qx_norm = sum_qx;
  row.err_accum = err_accum;
  row.x_sum = x_sum;
  return row;
}

}  // namespace

Trace run(const CostList& costs, const ConsensusOperators& ops,
          const AdmmConfig& config, const ErrorModel& model) {
  config.validate();
  Trace trace;
  trace.c = config.c;
  trace.record_every = config.record_every;
  trace.model = model;

  NetworkState state = init_state(ops, model, config.c);
  double sum_f = 0.0, sum_qx = 0.0, err_accum = 0.0;
  Vec x_sum = Vec::Zero(state.x.size());
  trace.rows.push_back(make_row(state, costs, 0.0, sum_f, sum_qx, err_accum,
                                x_sum));

  const double err_coef = ops.l_plus_stats.sigma_max *
                          ops.l_plus_stats.sigma_max /
                          (2.0 * ops.l_minus_stats.sigma_min_nonzero);
  for (int k = 1; k <= config.T; ++k) {
    const double res = step(state, costs, ops, config, model);
    sum_f += stacked_value(costs, state.x);
    sum_qx += (ops.Q * state.x).norm();
    err_accum += err_coef * state.e.squaredNorm() +
                 state.e.dot(2.0 * (ops.Q * state.r));
    x_sum += state.x;
    if (k % config.record_every == 0 || k == config.T)
      trace.rows.push_back(
          make_row(state, costs, res, sum_f, sum_qx, err_accum, x_sum));
  }
  return trace;
}

double verify_lemma1(const Vec& x_next, const Vec& z_prev,
                     const Vec& z_sum_through_k, const CostList& costs,
                     const ConsensusOperators& ops, double c) {
  const Mat W_inv = ops.W.inverse();  // diagonal with positive degrees
  const Vec rhs = -(0.5 / c) * (W_inv * stacked_gradient(costs, x_next)) +
                  0.5 * (W_inv * (ops.L_plus * z_prev)) -
                  0.5 * (W_inv * (ops.L_minus * z_sum_through_k));
  return (x_next - rhs).norm() / (x_next.norm() + 1.0);
}

double verify_lemma2_4(const NetworkState& state, const Vec& z_prev,
                       const ConsensusOperators& ops, double c,
                       const Vec& r_star, const Vec& x_star,
                       const CostList& costs) {
  const Vec lhs = 0.5 * (ops.L_plus * (state.z - z_prev)) - ops.W * state.e +
                  ops.Q * (state.r - r_star) +
                  (0.5 / c) * (stacked_gradient(costs, state.x) -
                               stacked_gradient(costs, x_star));
  const double scale = state.z.norm() + state.r.norm() + 1.0;
  return lhs.norm() / scale;
}

}  // namespace admmnet
