#include "admmnet/operators.hpp"

namespace admmnet {

SpectralStats spectral_stats(const Mat& M) {
  if (M.rows() != M.cols())
    throw NotSymmetric("spectral_stats: matrix is not square");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NotSymmetric("spectral_stats: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  const Vec ev = es.eigenvalues();
  const double sigma_max = std::max(0.0, ev.maxCoeff());
  if (sigma_max <= 0.0)
    throw AllZeroSpectrum("spectral_stats: zero matrix");

  const double cutoff = 1e-10 * sigma_max;
  double sigma_min = sigma_max;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > cutoff) {
      sigma_min = ev[i];
      break;  // eigenvalues are sorted ascending
    }
  return {sigma_min, sigma_max};
}

ConsensusOperators build_operators(const Topology& t) {
  const int D = t.D, N = t.N, E = t.E();
  const int rows = 2 * E * N, cols = D * N;

  ConsensusOperators ops;
  ops.topo = t;
  ops.A1 = Mat::Zero(rows, cols);
  ops.A2 = Mat::Zero(rows, cols);
  for (int q = 0; q < 2 * E; ++q) {
    const auto [i, j] = t.arcs[q];
    ops.A1.block(q * N, i * N, N, N) = Mat::Identity(N, N);
    ops.A2.block(q * N, j * N, N, N) = Mat::Identity(N, N);
  }
  ops.M_plus = ops.A1.transpose() + ops.A2.transpose();
  ops.M_minus = ops.A1.transpose() - ops.A2.transpose();
  ops.L_plus = 0.5 * ops.M_plus * ops.M_plus.transpose();
  ops.L_minus = 0.5 * ops.M_minus * ops.M_minus.transpose();

  ops.W = Mat::Zero(cols, cols);
  for (int i = 0; i < D; ++i)
    ops.W.block(i * N, i * N, N, N) =
        static_cast<double>(t.degree(i)) * Mat::Identity(N, N);

  // Q = V Sigma^(1/2) V^T from the eigendecomposition of L_minus / 2.
  // Eigenvalues below the relative cutoff are clamped to zero so round-off
  // cannot produce a complex square root.
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * ops.L_minus);
  const Vec ev = es.eigenvalues();
  const Mat& V = es.eigenvectors();
  const double cutoff = 1e-10 * std::max(0.0, ev.maxCoeff());
  Vec sqrt_ev = Vec::Zero(ev.size());
  Vec inv_sqrt_ev = Vec::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > cutoff) {
      sqrt_ev[i] = std::sqrt(ev[i]);
      inv_sqrt_ev[i] = 1.0 / sqrt_ev[i];
    }
  ops.Q = V * sqrt_ev.asDiagonal() * V.transpose();
  ops.Q_pinv = V * inv_sqrt_ev.asDiagonal() * V.transpose();

  ops.w_stats = spectral_stats(ops.W);
  ops.l_plus_stats = spectral_stats(ops.L_plus);
  ops.l_minus_stats = spectral_stats(ops.L_minus);
  ops.q_stats = spectral_stats(ops.Q);
  return ops;
}

Vec consensus_component(const Vec& v, int D, int N) {
  if (v.size() != static_cast<long>(D) * N)
    throw DimensionMismatch("consensus_component: bad stacked dimension");
  Vec mean = Vec::Zero(N);
  for (int i = 0; i < D; ++i) mean += v.segment(i * N, N);
  mean /= static_cast<double>(D);
  Vec out(v.size());
  for (int i = 0; i < D; ++i) out.segment(i * N, N) = mean;
  return out;
}

}  // namespace admmnet
