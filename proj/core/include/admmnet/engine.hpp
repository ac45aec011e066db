#ifndef ADMMNET_ENGINE_HPP
#define ADMMNET_ENGINE_HPP

#include <tuple>
#include <vector>

#include "admmnet/costs.hpp"
#include "admmnet/error_model.hpp"
#include "admmnet/operators.hpp"

namespace admmnet {

struct AdmmConfig {
  double c = 1.0;       // penalty parameter
  int T = 100;          // iteration budget
  int record_every = 1;
  bool verify_identities = true;

  void validate() const {
    if (c <= 0) throw DomainError("AdmmConfig: c must be positive");
    if (T < 0) throw DomainError("AdmmConfig: negative iteration budget");
    if (record_every < 1) throw DomainError("AdmmConfig: bad record stride");
  }
};

struct NetworkState {
  Vec x, alpha, z, r;
  Vec e;      // error applied to the current broadcast
  Vec z_sum;  // sum of z^s for s <= k, feeds the Lemma-1 style identity
  int k = 0;
};

/// Per-iteration record. Running accumulators cover s = 1..k so cumulative
/// bounds stay exact even when rows are recorded with a stride.
struct TraceRow {
  int k = 0;
  Vec x, z, alpha, r, e;
  double f = 0.0;
  double lemma1_residual = 0.0;
  double sum_f = 0.0;        // sum_{s=1..k} f(x^s)
  double sum_qx_norm = 0.0;  // sum_{s=1..k} ||Q x^s||
  double err_accum = 0.0;    // Theorem-1 error accumulator up to k
  Vec x_sum;                 // sum_{s=1..k} x^s
  int flagged_arcs = 0;
  std::vector<std::tuple<int, int, double>> new_flags;  // (i, j, statistic)
};

struct Trace {
  double c = 0.0;
  int record_every = 1;
  ErrorModel model;
  std::vector<TraceRow> rows;

  const TraceRow& final_row() const { return rows.back(); }
};

/// G = blockdiag(c I, c L_plus / 2); the semi-norm the bounds are stated in.
struct GMetric {
  double c = 0.0;
  Mat L_plus;

  double norm_sq(const Vec& r_part, const Vec& x_part) const;
};

double g_norm_sq(const GMetric& metric, const Vec& r_part, const Vec& x_part);

NetworkState init_state(const ConsensusOperators& ops, const ErrorModel& model,
                        double c);

/// One synchronous round: per-agent x-solve against the round-start z,
/// error injection, broadcast, multiplier and r updates.
/// Returns the Lemma-1 identity residual when verification is on.
double step(NetworkState& state, const CostList& costs,
            const ConsensusOperators& ops, const AdmmConfig& config,
            const ErrorModel& model);

Trace run(const CostList& costs, const ConsensusOperators& ops,
          const AdmmConfig& config, const ErrorModel& model);

/// Relative residual of the telescoped update identity
/// x^{k+1} = -(1/2c) W^{-1} grad f(x^{k+1}) + (1/2) W^{-1} L_+ z^k
///           - (1/2) W^{-1} L_- sum_{s<=k} z^s.
double verify_lemma1(const Vec& x_next, const Vec& z_prev,
                     const Vec& z_sum_through_k, const CostList& costs,
                     const ConsensusOperators& ops, double c);

/// Relative residual of
/// (L_+/2)(z^{k+1}-z^k) - W e^{k+1} + Q(r^{k+1}-r*)
///   + (1/2c)(grad f(x^{k+1}) - grad f(x*)).
double verify_lemma2_4(const NetworkState& state, const Vec& z_prev,
                       const ConsensusOperators& ops, double c,
                       const Vec& r_star, const Vec& x_star,
                       const CostList& costs);

}  // namespace admmnet

#endif
