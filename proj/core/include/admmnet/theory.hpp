#ifndef ADMMNET_THEORY_HPP
#define ADMMNET_THEORY_HPP

#include <optional>
#include <string>
#include <vector>

#include "admmnet/costs.hpp"
#include "admmnet/engine.hpp"
#include "admmnet/operators.hpp"

namespace admmnet {

/// Every constant of the linear-rate analysis plus the robust threshold U.
struct TheoryConstants {
  double v = 0.0, L = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, lambda4 = 0.0;
  double b = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double P = 0.0;
  double A1 = 0.0, A2 = 0.0;  // weights on the r-distance term
  double B = 0.0, C = 0.0;
  double c_opt = 0.0;
  double U = 0.0;
  bool condition9_ok = false;  // network/cost condition for B in (0,1)
};

/// Slack trail of one checked inequality family over a trace.
struct BoundReport {
  std::string name;
  std::vector<std::pair<int, double>> slacks;  // (k, relative slack)
  double min_slack = std::numeric_limits<double>::infinity();
  bool violated = false;
  int first_violation_k = -1;

  void add(int k, double lhs, double rhs, double tol = 1e-7);
};

/// Theorem-2 delta: min of the two printed branches; every lambda must
/// exceed 1. Sigma-squared factors are applied exactly as printed.
double delta_general(double lambda1, double lambda2, double lambda3, double c,
                     double v, double L, const ConsensusOperators& ops);

/// Condition (9): sigma^2_min(L_+)/sigma^2_max(L_+) above the printed RHS.
double condition9_rhs(double v, double L, double lambda2,
                      const ConsensusOperators& ops);
bool check_condition9(const ConsensusOperators& ops, double v, double L,
                      double lambda2);

/// Remark-2 cap on the RHS of condition (9).
double remark2_bound(double v, double L);

struct OptimalParamsOptions {
  double b = 0.1;
  double lambda4 = 2.0;
  int lambda2_grid = 64;          // log-spaced in (1, 100]
  bool require_feasible = false;  // throw ConditionInfeasible when (8) fails
};

/// Theorem-4 parameter assembly: lambda1 from the equalizing formula, the
/// largest feasible delta over the lambda2 grid, beta from the two printed
/// caps, lambda3 and c_opt from the printed radicals, then P, B, C.
TheoryConstants optimal_params(const ConsensusOperators& ops, double v,
                               double L,
                               const OptimalParamsOptions& opts = {});

/// Minimum-norm r* with Q r* = -(1/2c) grad f(x*), in range(Q).
Vec compute_r_star(const ConsensusOperators& ops, const Vec& grad_at_xstar,
                   double c);

/// ROAD threshold, exactly as printed:
/// U = (sigma_max(L_+) V1^2 + 2 V2^2/(sigma_min(L_-) c^2) + 4) / (2 sqrt 2).
double road_threshold(const ConsensusOperators& ops, double V1, double V2,
                      double c);

struct ContractionReport {
  BoundReport theorem2;       // single-step G-distance inequality
  BoundReport theorem3_a1;    // cumulative bound, appendix A1 weighting
  BoundReport theorem3_a2;    // cumulative bound, statement A2 weighting
  double max_contraction = 0.0;  // measured G-ratio, meaningful when e = 0
};

ContractionReport contraction_report(const Trace& trace,
                                     const TheoryConstants& constants,
                                     const ConsensusOperators& ops,
                                     const Vec& r_star, const Vec& x_star,
                                     const CostList& costs);

struct ConvexReport {
  BoundReport last_iterate;  // f(x^T) - f* <= ||q^{T-1} - p||_G^2
  BoundReport averaged;      // running-average bound with the error accumulator
};

ConvexReport convex_report(const Trace& trace, const ConsensusOperators& ops,
                           double c, const Vec& x_star, const CostList& costs);

enum class Corollary1Case { None, BoundedError, LinearDecay, PastErrorCap };

struct Corollary1Report {
  Corollary1Case satisfied = Corollary1Case::None;
  BoundReport conclusion;
};

Corollary1Report corollary1_monitor(const Trace& trace,
                                    const TheoryConstants& constants,
                                    const ConsensusOperators& ops,
                                    const Vec& r_star, const Vec& x_star);

/// Theorem-5 sub-linear bound on the running average of a ROAD trace.
BoundReport theorem5_report(const Trace& trace, const ConsensusOperators& ops,
                            double c, double U, int E, const Vec& x_star,
                            const CostList& costs);

/// Lemma-8 style average-consensus bound for error-free runs from x^0 = 0:
/// (1/T) sum ||Q x^k|| <= (1/4T)(sigma_max(L_+) V1^2
///                               + 2 V2^2/(sigma_min(L_-) c^2) + 4).
BoundReport lemma8_report(const Trace& trace, const ConsensusOperators& ops,
                          double V1, double V2, double c);

}  // namespace admmnet

#endif
