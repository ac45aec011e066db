#include "admmnet/costs.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "admmnet/rng.hpp"

namespace admmnet {

namespace {

// Damped Newton on phi(x) = f(x) + (a/2)||x||^2 - <b, x>. Armijo
// backtracking with factor 0.5 and slope 1e-4, at most 100 iterations.
Vec newton_resolve(const LocalCost& cost, double a, const Vec& b,
                   double tol_scale) {
  Vec x = Vec::Zero(cost.dim());
  const double tol = 1e-10 * tol_scale;
  for (int it = 0; it < 100; ++it) {
    const Vec g = cost.gradient(x) + a * x - b;
    if (g.norm() <= tol) return x;
    Mat H = cost.hessian(x) + a * Mat::Identity(cost.dim(), cost.dim());
    Vec step = H.ldlt().solve(-g);
    if (!step.allFinite() || g.dot(step) >= 0) step = -g;

    const double phi0 = cost.evaluate(x) + 0.5 * a * x.squaredNorm() - b.dot(x);
    const double slope = g.dot(step);
    double t = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec xt = x + t * step;
      const double phit =
          cost.evaluate(xt) + 0.5 * a * xt.squaredNorm() - b.dot(xt);
      if (phit <= phi0 + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    x += t * step;
  }
  if ((cost.gradient(x) + a * x - b).norm() > 1e-9 * tol_scale)
    throw SolverDivergence("resolve: Newton failed to reach residual target");
  return x;
}

}  // namespace

Vec LocalCost::resolve(double a, const Vec& b) const {
  return newton_resolve(*this, a, b, 1.0 + b.norm());
}

LeastSquaresCost::LeastSquaresCost(Mat B, Vec y)
    : B_(std::move(B)), y_(std::move(y)) {
  if (B_.rows() != y_.size())
    throw DimensionMismatch("LeastSquaresCost: B and y disagree");
  BtB_ = B_.transpose() * B_;
  Bty_ = B_.transpose() * y_;
  Eigen::SelfAdjointEigenSolver<Mat> es(BtB_);
  lambda_min_ = std::max(0.0, es.eigenvalues().minCoeff());
  lambda_max_ = std::max(0.0, es.eigenvalues().maxCoeff());
}

double LeastSquaresCost::evaluate(const Vec& x) const {
  return 0.5 * (y_ - B_ * x).squaredNorm();
}

Vec LeastSquaresCost::gradient(const Vec& x) const { return BtB_ * x - Bty_; }

Mat LeastSquaresCost::hessian(const Vec&) const { return BtB_; }

Vec LeastSquaresCost::resolve(double a, const Vec& b) const {
  const Mat A = BtB_ + a * Mat::Identity(dim(), dim());
  return A.ldlt().solve(Bty_ + b);
}

SmoothedHingeSvmCost::SmoothedHingeSvmCost(std::vector<Sample> samples,
                                           double reg_weight, double smoothing)
    : samples_(std::move(samples)),
      reg_weight_(reg_weight),
      smoothing_(smoothing) {
  if (samples_.empty()) throw Error("SmoothedHingeSvmCost: no samples");
  if (smoothing_ <= 0) throw DomainError("SmoothedHingeSvmCost: smoothing <= 0");
  feat_dim_ = static_cast<int>(samples_.front().feature.size());
  for (const auto& s : samples_) {
    if (s.feature.size() != feat_dim_)
      throw DimensionMismatch("SmoothedHingeSvmCost: ragged features");
    if (s.label != 1 && s.label != -1)
      throw Error("SmoothedHingeSvmCost: labels must be +-1");
  }
}

// Huberized hinge: quadratic on (1 - mu, 1), linear below, zero above 1.
namespace {
double huber_hinge(double margin, double mu) {
  const double g = 1.0 - margin;
  if (g <= 0) return 0.0;
  if (g >= mu) return g - 0.5 * mu;
  return g * g / (2.0 * mu);
}
double huber_hinge_d(double margin, double mu) {
  const double g = 1.0 - margin;
  if (g <= 0) return 0.0;
  if (g >= mu) return -1.0;
  return -g / mu;
}
double huber_hinge_dd(double margin, double mu) {
  const double g = 1.0 - margin;
  if (g <= 0 || g >= mu) return 0.0;
  return 1.0 / mu;
}
}  // namespace

double SmoothedHingeSvmCost::evaluate(const Vec& x) const {
  const Vec w = x.head(feat_dim_);
  const double b = x[feat_dim_];
  double loss = 0.0;
  for (const auto& s : samples_)
    loss += huber_hinge(s.label * (w.dot(s.feature) + b), smoothing_);
  return 0.5 * w.squaredNorm() + reg_weight_ * loss;
}

Vec SmoothedHingeSvmCost::gradient(const Vec& x) const {
  const Vec w = x.head(feat_dim_);
  const double b = x[feat_dim_];
  Vec g = Vec::Zero(dim());
  g.head(feat_dim_) = w;
  for (const auto& s : samples_) {
    const double m = s.label * (w.dot(s.feature) + b);
    const double d = huber_hinge_d(m, smoothing_) * s.label;
    g.head(feat_dim_) += reg_weight_ * d * s.feature;
    g[feat_dim_] += reg_weight_ * d;
  }
  return g;
}

Mat SmoothedHingeSvmCost::hessian(const Vec& x) const {
  const Vec w = x.head(feat_dim_);
  const double b = x[feat_dim_];
  Mat H = Mat::Zero(dim(), dim());
  H.topLeftCorner(feat_dim_, feat_dim_) = Mat::Identity(feat_dim_, feat_dim_);
  Vec u(dim());
  for (const auto& s : samples_) {
    const double m = s.label * (w.dot(s.feature) + b);
    const double dd = huber_hinge_dd(m, smoothing_);
    if (dd == 0.0) continue;
    u.head(feat_dim_) = s.feature;
    u[feat_dim_] = 1.0;
    H += reg_weight_ * dd * u * u.transpose();
  }
  return H;
}

double SmoothedHingeSvmCost::smoothness() const {
  // The hinge curvature of every sample can be active at once, so the valid
  // bound is the top eigenvalue of the full augmented-feature Gram sum.
  Mat H = Mat::Identity(dim(), dim());
  Vec u(dim());
  for (const auto& s : samples_) {
    u.head(feat_dim_) = s.feature;
    u[feat_dim_] = 1.0;
    H += (reg_weight_ / smoothing_) * u * u.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  return es.eigenvalues().maxCoeff();
}

std::vector<SmoothedHingeSvmCost::Sample> load_svm_samples_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_svm_samples_csv: cannot open " + path);
  std::vector<SmoothedHingeSvmCost::Sample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char first = line[line.find_first_not_of(" \t")];
    if (!std::isdigit(static_cast<unsigned char>(first)) && first != '-' &&
        first != '+' && first != '.')
      continue;  // header or comment line
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(std::stod(tok));
    if (fields.size() < 2) throw Error("load_svm_samples_csv: short row");
    Vec f(fields.size() - 1);
    for (size_t i = 0; i + 1 < fields.size(); ++i) f[i] = fields[i];
    out.push_back({f, fields.back() >= 0 ? 1 : -1});
  }
  return out;
}

Vec x_update_solve(const LocalCost& cost, int degree, double c,
                   const Vec& alpha_i, const Vec& neighbor_sum,
                   const Vec& z_self) {
  if (c <= 0) throw DomainError("x_update_solve: penalty must be positive");
  if (degree < 1) throw DomainError("x_update_solve: isolated agent");
  const double a = 2.0 * c * degree;
  const Vec b = c * degree * z_self + c * neighbor_sum - alpha_i;
  return cost.resolve(a, b);
}

double stacked_value(const CostList& costs, const Vec& x) {
  double f = 0.0;
  long off = 0;
  for (const auto& ci : costs) {
    f += ci->evaluate(x.segment(off, ci->dim()));
    off += ci->dim();
  }
  if (off != x.size()) throw DimensionMismatch("stacked_value");
  return f;
}

Vec stacked_gradient(const CostList& costs, const Vec& x) {
  Vec g(x.size());
  long off = 0;
  for (const auto& ci : costs) {
    g.segment(off, ci->dim()) = ci->gradient(x.segment(off, ci->dim()));
    off += ci->dim();
  }
  if (off != x.size()) throw DimensionMismatch("stacked_gradient");
  return g;
}

Vec stack_consensus(const Vec& point, int D) {
  Vec out(point.size() * D);
  for (int i = 0; i < D; ++i)
    out.segment(i * point.size(), point.size()) = point;
  return out;
}

Vec centralized_minimizer(const CostList& costs, int N) {
  if (costs.empty()) throw Error("centralized_minimizer: no costs");

  // Least-squares instances admit a closed-form normal-equation solve.
  bool all_ls = true;
  for (const auto& c : costs)
    if (!dynamic_cast<const LeastSquaresCost*>(c.get())) all_ls = false;
  if (all_ls) {
    Mat A = Mat::Zero(N, N);
    Vec rhs = Vec::Zero(N);
    for (const auto& c : costs) {
      const auto* ls = static_cast<const LeastSquaresCost*>(c.get());
      A += ls->B().transpose() * ls->B();
      rhs += ls->B().transpose() * ls->y();
    }
    const Vec x = A.ldlt().solve(rhs);
    Vec grad = Vec::Zero(N);
    for (const auto& c : costs) grad += c->gradient(x);
    if (grad.norm() > 1e-10 * (1.0 + rhs.norm()))
      throw SolverDivergence("centralized_minimizer: normal equations failed");
    return x;
  }

  // Generic damped Newton on the summed cost.
  Vec x = Vec::Zero(N);
  auto grad_sum = [&](const Vec& p) {
    Vec g = Vec::Zero(N);
    for (const auto& c : costs) g += c->gradient(p);
    return g;
  };
  auto value_sum = [&](const Vec& p) {
    double f = 0.0;
    for (const auto& c : costs) f += c->evaluate(p);
    return f;
  };
  for (int it = 0; it < 500; ++it) {
    const Vec g = grad_sum(x);
    if (g.norm() <= 1e-10) return x;
    Mat H = 1e-12 * Mat::Identity(N, N);
    for (const auto& c : costs) H += c->hessian(x);
    Vec step = H.ldlt().solve(-g);
    if (!step.allFinite() || g.dot(step) >= 0) step = -g;
    const double f0 = value_sum(x);
    double t = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      if (value_sum(x + t * step) <= f0 + 1e-4 * t * g.dot(step)) break;
      t *= 0.5;
    }
    x += t * step;
  }
  if (grad_sum(x).norm() > 1e-10)
    throw SolverDivergence("centralized_minimizer: Newton did not converge");
  return x;
}

GlobalCostProfile estimate_constants(const CostList& costs, const Vec& x_star,
                                     std::uint64_t sample_seed, int samples) {
  if (costs.empty()) throw Error("estimate_constants: no costs");

  GlobalCostProfile p;
  p.v = std::numeric_limits<double>::infinity();
  p.L = 0.0;
  for (const auto& c : costs) {
    p.v = std::min(p.v, c->strong_convexity());
    p.L = std::max(p.L, c->smoothness());
  }

  // The consensus bounds only enter the analysis through ||x*|| and
  // ||grad f(x*)|| (stacked), so the tightest admissible choices are those
  // two norms; a 5% margin covers the inexact minimizer.
  (void)sample_seed;
  (void)samples;
  const int D = static_cast<int>(costs.size());
  p.V1 = 1.05 * std::sqrt(static_cast<double>(D)) * x_star.norm();
  if (p.V1 <= 0) p.V1 = 1.0;  // degenerate x* = 0
  double g_sq = 0.0;
  for (const auto& c : costs) g_sq += c->gradient(x_star).squaredNorm();
  p.V2 = std::max(1.0, 1.05 * std::sqrt(g_sq));
  return p;
}

}  // namespace admmnet
