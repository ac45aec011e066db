#ifndef ADMMNET_TESTS_HELPERS_HPP
#define ADMMNET_TESTS_HELPERS_HPP

#include "admmnet/costs.hpp"
#include "admmnet/operators.hpp"
#include "admmnet/rng.hpp"
#include "admmnet/theory.hpp"
#include "admmnet/topology.hpp"

namespace admmnet::testing {

/// Two agents on a single edge with well-conditioned scaled-identity
/// quadratics. This is the family whose L_+ spectrum is flat
/// (sigma_min = sigma_max), so the linear-rate feasibility condition holds
/// and the assembled B lands in (0, 1).
struct EdgeInstance {
  Topology topo;
  ConsensusOperators ops;
  CostList costs;
  Vec x_star;       // consensus-stacked
  double f_star = 0.0;
  GlobalCostProfile profile;
  TheoryConstants constants;
  Vec r_star;
};

inline EdgeInstance make_edge_instance(std::uint64_t seed, int N = 3) {
  EdgeInstance inst;
  inst.topo = build_topology(2, N, {{0, 1}});
  inst.ops = build_operators(inst.topo);
  for (int i = 0; i < 2; ++i) {
    const double a = 0.85 + 0.3 * rng::uniform(seed, i, 0, 0);
    Mat B = Mat::Identity(N, N) * std::sqrt(a);
    Vec y(N);
    for (int d = 0; d < N; ++d) y[d] = std::sqrt(a) * rng::normal(seed, i, 1, d);
    inst.costs.push_back(std::make_shared<LeastSquaresCost>(B, y));
  }
  const Vec point = centralized_minimizer(inst.costs, N);
  inst.x_star = stack_consensus(point, 2);
  inst.f_star = stacked_value(inst.costs, inst.x_star);
  inst.profile = estimate_constants(inst.costs, point);
  inst.constants = optimal_params(inst.ops, inst.profile.v, inst.profile.L);
  inst.r_star = compute_r_star(inst.ops, stacked_gradient(inst.costs, inst.x_star),
                               inst.constants.c_opt);
  return inst;
}

/// Complete graph with near-uniform scalar quadratics 1/2 a_i (x - m_i)^2.
/// The flat cost spectrum maximizes the printed delta, which is the only way
/// the printed feasibility condition holds on dense graphs.
struct CompleteInstance {
  Topology topo;
  ConsensusOperators ops;
  CostList costs;
  Vec x_star;
  double f_star = 0.0;
  GlobalCostProfile profile;
  TheoryConstants constants;
  Vec r_star;
};

inline CompleteInstance make_complete_instance(std::uint64_t seed, int D = 40) {
  CompleteInstance inst;
  inst.topo = build_topology(D, 1, complete_edges(D));
  inst.ops = build_operators(inst.topo);
  for (int i = 0; i < D; ++i) {
    const double a = 0.95 + 0.1 * rng::uniform(seed, i, 0, 0);
    const double m = rng::normal(seed, i, 1, 0);
    Mat B(1, 1);
    B(0, 0) = std::sqrt(a);
    Vec y(1);
    y[0] = std::sqrt(a) * m;
    inst.costs.push_back(std::make_shared<LeastSquaresCost>(B, y));
  }
  const Vec point = centralized_minimizer(inst.costs, 1);
  inst.x_star = stack_consensus(point, D);
  inst.f_star = stacked_value(inst.costs, inst.x_star);
  inst.profile = estimate_constants(inst.costs, point);
  inst.constants = optimal_params(inst.ops, inst.profile.v, inst.profile.L);
  inst.r_star = compute_r_star(inst.ops, stacked_gradient(inst.costs, inst.x_star),
                               inst.constants.c_opt);
  return inst;
}

}  // namespace admmnet::testing

#endif
