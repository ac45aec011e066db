#include "admmnet/theory.hpp"

#include <cmath>

namespace admmnet {

namespace {

struct Sq {
  double min_q, max_lp, min_lp, max_w, min_lm, max_lm;  // squared eigenvalues
  double raw_max_lp, raw_min_lm;                        // unsquared, for U
};

Sq squares(const ConsensusOperators& ops) {
  auto sq = [](double x) { return x * x; };
  Sq s;
  s.min_q = sq(ops.q_stats.sigma_min_nonzero);
  s.max_lp = sq(ops.l_plus_stats.sigma_max);
  s.min_lp = sq(ops.l_plus_stats.sigma_min_nonzero);
  s.max_w = sq(ops.w_stats.sigma_max);
  s.min_lm = sq(ops.l_minus_stats.sigma_min_nonzero);
  s.max_lm = sq(ops.l_minus_stats.sigma_max);
  s.raw_max_lp = ops.l_plus_stats.sigma_max;
  s.raw_min_lm = ops.l_minus_stats.sigma_min_nonzero;
  return s;
}

}  // namespace

void BoundReport::add(int k, double lhs, double rhs, double tol) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  const double slack = (rhs - lhs) / scale;
  slacks.push_back({k, slack});
  if (slack < min_slack) min_slack = slack;
  if (slack < -tol && !violated) {
    violated = true;
    first_violation_k = k;
  }
}

double delta_general(double lambda1, double lambda2, double lambda3, double c,
                     double v, double L, const ConsensusOperators& ops) {
  if (lambda1 <= 1 || lambda2 <= 1 || lambda3 <= 1)
    throw DomainError("delta_general: every lambda must exceed 1");
  if (c <= 0 || v <= 0 || L <= 0)
    throw DomainError("delta_general: c, v, L must be positive");
  const Sq s = squares(ops);
  const double branch1 = (lambda1 - 1) * (lambda2 - 1) * s.min_q * s.min_lp /
                         (lambda1 * lambda2 * s.max_lp);
  const double branch2 =
      4 * v * (lambda2 - 1) * (lambda3 - 1) * s.min_q /
      (lambda1 * lambda2 * (lambda3 - 1) * L * L +
       c * c * lambda3 * (lambda2 - 1) * s.max_lp * s.min_q);
  return std::min(branch1, branch2);
}

double condition9_rhs(double v, double L, double lambda2,
                      const ConsensusOperators& ops) {
  if (lambda2 <= 1) throw DomainError("condition9_rhs: lambda2 <= 1");
  const Sq s = squares(ops);
  const double t = (lambda2 - 1) / lambda2;
  const double L2 = L * L;
  return 4 * v /
         (std::sqrt((L2 + 2 * v) * (L2 + 2 * v) + 16 * v * v * t * s.min_q) -
          L2 + 2 * v);
}

bool check_condition9(const ConsensusOperators& ops, double v, double L,
                      double lambda2) {
  const Sq s = squares(ops);
  return s.min_lp / s.max_lp > condition9_rhs(v, L, lambda2, ops);
}

double remark2_bound(double v, double L) {
  return 4 * v /
         ((std::sqrt(2.0) - 1) * L * L + (2 * std::sqrt(2.0) + 2) * v);
}

TheoryConstants optimal_params(const ConsensusOperators& ops, double v,
                               double L, const OptimalParamsOptions& opts) {
  if (v <= 0)
    throw NotStronglyConvex("optimal_params: needs a strongly convex cost");
  if (L <= 0 || opts.b <= 0 || opts.b >= 1 || opts.lambda4 <= 1)
    throw DomainError("optimal_params: bad inputs");
  const Sq s = squares(ops);
  const double L2 = L * L;

  TheoryConstants tc;
  tc.v = v;
  tc.L = L;
  tc.lambda4 = opts.lambda4;
  tc.lambda1 = 1 + 2 * v * s.max_lp / (L2 * s.min_lp);

  auto delta_of = [&](double lambda2) {
    return (lambda2 - 1) / lambda2 * 2 * v * s.min_q * s.min_lp /
           (L2 * s.min_lp + 2 * v * s.max_lp);
  };
  auto feasible = [&](double delta, double b) {
    return (1 - b) * (1 + delta) * s.min_lp > s.max_lp;
  };

  // delta is increasing in lambda2, so scanning the log grid keeps the
  // largest feasible pair; b falls back to a coarse scan when the caller's
  // value leaves condition (8) infeasible.
  double best_delta = -1, best_l2 = 0, best_b = 0;
  for (int g = 0; g < opts.lambda2_grid; ++g) {
    const double lambda2 =
        1.0 + std::pow(99.0, (g + 1.0) / opts.lambda2_grid);
    const double delta = delta_of(lambda2);
    double b_used = -1;
    if (feasible(delta, opts.b)) {
      b_used = opts.b;
    } else {
      for (double b = 0.05; b <= 0.9 + 1e-12; b += 0.05)
        if (feasible(delta, b)) {
          b_used = b;
          break;
        }
    }
    if (b_used > 0 && delta > best_delta) {
      best_delta = delta;
      best_l2 = lambda2;
      best_b = b_used;
    }
  }

  if (best_delta > 0) {
    tc.condition9_ok = true;
    tc.lambda2 = best_l2;
    tc.b = best_b;
    tc.delta = best_delta;
  } else {
    if (opts.require_feasible)
      throw ConditionInfeasible(
          "optimal_params: condition (8) fails over the whole grid");
    tc.condition9_ok = false;
    tc.lambda2 = 1.0 + std::pow(99.0, 1.0);  // grid max
    tc.b = opts.b;
    tc.delta = delta_of(tc.lambda2);
  }

  const double cap1 =
      tc.b * (1 + tc.delta) * s.min_lp * (1 - 1 / tc.lambda4) /
      (4 * tc.b * s.min_lp * (1 - 1 / tc.lambda4) + 16 * s.max_w);
  const double cap2 =
      ((1 - tc.b) * (1 + tc.delta) * s.min_lp - s.max_lp) /
      (4 * s.max_lp + 4 * (1 - tc.b) * s.min_lp);
  // cap2 is the exact value at which the contraction factor reaches 1, so
  // take a strictly interior point on that branch to keep B < 1.
  tc.beta = cap2 > 0 ? std::min(cap1, 0.999 * cap2) : cap1;

  tc.lambda3 = 1 + std::sqrt((L2 * s.min_lp + 2 * v * s.max_lp) /
                             (tc.beta * tc.lambda1 * L2 * v * s.min_lp));
  tc.c_opt = std::sqrt(tc.lambda1 * tc.lambda2 * (tc.lambda3 - 1) * L2 /
                       (tc.lambda3 * (tc.lambda2 - 1) * s.max_lp * s.min_q));

  const double c2 = tc.c_opt * tc.c_opt;
  tc.P = c2 * tc.delta * tc.lambda2 * s.max_w / s.min_q +
         c2 * tc.delta * tc.lambda3 * s.max_lp / 4;
  tc.A1 = 4 / ((1 - tc.b) * s.min_lp);
  tc.A2 = 4 / ((1 + 4 * tc.beta) * s.max_lp);
  tc.B = (1 + 4 * tc.beta) * s.max_lp /
         ((1 - tc.b) * (1 + tc.delta - 4 * tc.beta) * s.min_lp);
  tc.C = (4 * tc.P + 2 / tc.beta) /
             (c2 * (1 - tc.b) * (1 + tc.delta - 4 * tc.beta) * s.min_lp) +
         tc.b * (tc.lambda4 - 1) / (1 - tc.b);
  return tc;
}

Vec compute_r_star(const ConsensusOperators& ops, const Vec& grad_at_xstar,
                   double c) {
  if (c <= 0) throw DomainError("compute_r_star: c must be positive");
  const Vec consensus =
      consensus_component(grad_at_xstar, ops.topo.D, ops.topo.N);
  if (consensus.norm() > 1e-8 * (1.0 + grad_at_xstar.norm()))
    throw InconsistentSystem(
        "compute_r_star: gradient has a consensus-direction component");

  const Vec r_star = -(0.5 / c) * (ops.Q_pinv * grad_at_xstar);
  const double residual =
      (ops.Q * r_star + (0.5 / c) * grad_at_xstar).norm();
  if (residual > 1e-9 * (1.0 + grad_at_xstar.norm()))
    throw InconsistentSystem("compute_r_star: pseudo-inverse solve residual");
  return r_star;
}

double road_threshold(const ConsensusOperators& ops, double V1, double V2,
                      double c) {
  if (V1 <= 0 || V2 <= 0 || c <= 0)
    throw DomainError("road_threshold: V1, V2, c must be positive");
  const Sq s = squares(ops);
  return (s.raw_max_lp * V1 * V1 + 2 * V2 * V2 / (s.raw_min_lm * c * c) + 4) /
         (2 * std::sqrt(2.0));
}

namespace {

void require_step_trace(const Trace& trace, const char* who) {
  if (trace.rows.size() < 2 || trace.record_every != 1)
    throw MissingFields(std::string(who) +
                        ": needs a stride-1 trace with at least one step");
  if (trace.rows.front().z.size() == 0)
    throw MissingFields(std::string(who) + ": trace lacks state vectors");
}

}  // namespace

ContractionReport contraction_report(const Trace& trace,
                                     const TheoryConstants& constants,
                                     const ConsensusOperators& ops,
                                     const Vec& r_star, const Vec& x_star,
                                     const CostList& costs) {
  require_step_trace(trace, "contraction_report");
  if (std::abs(trace.c - constants.c_opt) >
      1e-12 * std::max(1.0, constants.c_opt))
    throw MissingFields("contraction_report: trace c != constants c");
  (void)costs;

  const double c = trace.c;
  const GMetric metric{c, ops.L_plus};
  const Vec z_star = x_star;

  ContractionReport rep;
  rep.theorem2.name = "theorem2_single_step";
  rep.theorem3_a1.name = "theorem3_cumulative_a1";
  rep.theorem3_a2.name = "theorem3_cumulative_a2";

  const auto& r0 = trace.rows.front();
  double acc_a1 = (r0.z - z_star).squaredNorm() +
                  constants.A1 * (r0.r - r_star).squaredNorm();
  double acc_a2 = (r0.z - z_star).squaredNorm() +
                  constants.A2 * (r0.r - r_star).squaredNorm();
  double prev_g = metric.norm_sq(r0.r - r_star, r0.z - z_star);
  const double g_scale = prev_g + 1.0;

  for (size_t i = 1; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    const auto& prev = trace.rows[i - 1];

    const double lhs_g = metric.norm_sq(row.r - r_star, row.z - z_star);
    const Vec s_vec = c * (ops.L_plus * (row.z - prev.z)) +
                      2 * c * (ops.Q * (row.r - r_star)) +
                      2 * c * (ops.W * (row.x - x_star));
    const double rhs_g = (prev_g + constants.P * row.e.squaredNorm() +
                          row.e.dot(s_vec)) /
                         (1 + constants.delta);
    rep.theorem2.add(row.k, lhs_g, rhs_g);

    if (row.e.norm() == 0.0 && prev_g > 1e-16 * g_scale)
      rep.max_contraction = std::max(rep.max_contraction, lhs_g / prev_g);

    acc_a1 = constants.B * acc_a1 + constants.C * row.e.squaredNorm();
    acc_a2 = constants.B * acc_a2 + constants.C * row.e.squaredNorm();
    rep.theorem3_a1.add(row.k, (row.z - z_star).squaredNorm(), acc_a1);
    rep.theorem3_a2.add(row.k, (row.z - z_star).squaredNorm(), acc_a2);

    prev_g = lhs_g;
  }
  return rep;
}

ConvexReport convex_report(const Trace& trace, const ConsensusOperators& ops,
                           double c, const Vec& x_star,
                           const CostList& costs) {
  require_step_trace(trace, "convex_report");
  if (std::abs(trace.c - c) > 1e-12 * std::max(1.0, c))
    throw MissingFields("convex_report: trace c mismatch");

  const GMetric metric{c, ops.L_plus};
  const double f_star = stacked_value(costs, x_star);
  const auto& r0 = trace.rows.front();
  const double p0_dist = metric.norm_sq(r0.r, r0.x - x_star);  // p = (0, x*)

  ConvexReport rep;
  rep.last_iterate.name = "theorem1_last_iterate";
  rep.averaged.name = "theorem1_averaged";
  for (size_t i = 1; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    const auto& prev = trace.rows[i - 1];
    // f(x^T) - f* <= ||q^{T-1} - p||_G^2 with q = (r, z), p = (0, x*)
    rep.last_iterate.add(row.k, row.f - f_star,
                         metric.norm_sq(prev.r, prev.z - x_star));
    const double avg_gap = row.sum_f / row.k - f_star;
    rep.averaged.add(row.k, avg_gap,
                     p0_dist / row.k + c / row.k * row.err_accum);
  }
  return rep;
}

Corollary1Report corollary1_monitor(const Trace& trace,
                                    const TheoryConstants& constants,
                                    const ConsensusOperators& ops,
                                    const Vec& r_star, const Vec& x_star) {
  require_step_trace(trace, "corollary1_monitor");
  (void)ops;
  Corollary1Report rep;
  rep.conclusion.name = "corollary1_conclusion";
  const double B = constants.B, C = constants.C;
  if (!(B > 0 && B < 1)) return rep;  // no case applies without contraction

  const auto& r0 = trace.rows.front();
  const Vec z_star = x_star;
  const double A_a1 = (r0.z - z_star).squaredNorm() +
                      constants.A1 * (r0.r - r_star).squaredNorm();

  const ErrorModel& m = trace.model;
  switch (m.kind) {
    case ErrorKind::None:
      rep.satisfied = Corollary1Case::BoundedError;  // e = 0 bound
      break;
    case ErrorKind::Bounded:
      rep.satisfied = Corollary1Case::BoundedError;
      break;
    case ErrorKind::LinearDecay:
      if (m.decay_rate > 0 && m.decay_rate < B)
        rep.satisfied = Corollary1Case::LinearDecay;
      break;
    default: {
      bool ok = true;
      for (size_t i = 1; i < trace.rows.size() && ok; ++i) {
        const auto& prev = trace.rows[i - 1];
        if (C * trace.rows[i].e.squaredNorm() >
            B * (constants.A1 - constants.A2) *
                (prev.r - r_star).squaredNorm())
          ok = false;
      }
      if (ok) rep.satisfied = Corollary1Case::PastErrorCap;
      break;
    }
  }
  if (rep.satisfied == Corollary1Case::None) return rep;

  double Bk = 1.0;
  for (size_t i = 1; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    Bk *= B;
    double rhs = 0.0;
    switch (rep.satisfied) {
      case Corollary1Case::BoundedError: {
        const double e_cap = m.kind == ErrorKind::Bounded ? m.e_cap : 0.0;
        rhs = Bk * A_a1 + C * e_cap / (1 - B);
        break;
      }
      case Corollary1Case::LinearDecay: {
        const double R = m.decay_rate;
        rhs = Bk * (A_a1 + R * C * m.e0 / (B - R));
        break;
      }
      case Corollary1Case::PastErrorCap:
        rhs = Bk * A_a1;
        break;
      default:
        break;
    }
    rep.conclusion.add(row.k, (row.z - z_star).squaredNorm(), rhs);
  }
  return rep;
}

BoundReport theorem5_report(const Trace& trace, const ConsensusOperators& ops,
                            double c, double U, int E, const Vec& x_star,
                            const CostList& costs) {
  require_step_trace(trace, "theorem5_report");
  const Sq s = squares(ops);
  const GMetric metric{c, ops.L_plus};
  const double f_star = stacked_value(costs, x_star);
  const auto& r0 = trace.rows.front();
  const double p0_dist = metric.norm_sq(r0.r, r0.x - x_star);
  const double extra =
      8 * c * s.max_lp / s.min_lm * static_cast<double>(E) * E * U * U;

  BoundReport rep;
  rep.name = "theorem5_running_average";
  for (size_t i = 1; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    const Vec x_hat = row.x_sum / row.k;
    rep.add(row.k, stacked_value(costs, x_hat) - f_star,
            (p0_dist + extra) / row.k);
  }
  return rep;
}

BoundReport lemma8_report(const Trace& trace, const ConsensusOperators& ops,
                          double V1, double V2, double c) {
  require_step_trace(trace, "lemma8_report");
  const Sq s = squares(ops);
  const double cap =
      0.25 * (s.raw_max_lp * V1 * V1 + 2 * V2 * V2 / (s.raw_min_lm * c * c) +
              4);
  BoundReport rep;
  rep.name = "lemma8_average_consensus";
  for (size_t i = 1; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    rep.add(row.k, row.sum_qx_norm / row.k, cap / row.k);
  }
  return rep;
}

}  // namespace admmnet
