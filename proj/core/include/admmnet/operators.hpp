#ifndef ADMMNET_OPERATORS_HPP
#define ADMMNET_OPERATORS_HPP

#include "admmnet/common.hpp"
#include "admmnet/topology.hpp"

namespace admmnet {

/// Smallest-nonzero and largest eigenvalue of a symmetric PSD matrix.
/// "Nonzero" uses the relative cutoff 1e-10 * sigma_max.
struct SpectralStats {
  double sigma_min_nonzero = 0.0;
  double sigma_max = 0.0;
};

SpectralStats spectral_stats(const Mat& M);

/// The graph-derived matrix family every other module consumes.
/// All matrices are dense; DN stays small at desk scale.
struct ConsensusOperators {
  Topology topo;

  Mat A1, A2;            // (2E*N) x (D*N) arc incidence blocks
  Mat M_plus, M_minus;   // (D*N) x (2E*N)
  Mat W;                 // block-diagonal degree matrix
  Mat L_plus, L_minus;   // signless / ordinary Laplacian (tensored with I_N)
  Mat Q;                 // symmetric PSD square root of L_minus / 2
  Mat Q_pinv;            // pseudo-inverse of Q, shares the eigenbasis

  SpectralStats w_stats, l_plus_stats, l_minus_stats, q_stats;
};

ConsensusOperators build_operators(const Topology& t);

/// Consensus projection (1 1^T / D) tensored with I_N, applied to a stacked
/// vector: the per-coordinate mean over agents, replicated.
Vec consensus_component(const Vec& v, int D, int N);

}  // namespace admmnet

#endif
