#ifndef ADMMNET_COSTS_HPP
#define ADMMNET_COSTS_HPP

#include <memory>
#include <vector>

#include "admmnet/common.hpp"
#include "admmnet/operators.hpp"

namespace admmnet {

/// Local cost f_i with gradient and the regularized stationarity solve
/// used by the x-update: resolve(a, b) returns x with grad f(x) + a x = b.
class LocalCost {
 public:
  virtual ~LocalCost() = default;
  virtual int dim() const = 0;
  virtual double evaluate(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
  virtual Mat hessian(const Vec& x) const = 0;
  virtual Vec resolve(double a, const Vec& b) const;

  /// Strong-convexity modulus in the v ||x-y||^2 convention (no 1/2 factor)
  /// and gradient Lipschitz constant.
  virtual double strong_convexity() const = 0;
  virtual double smoothness() const = 0;
};

using CostPtr = std::shared_ptr<const LocalCost>;
using CostList = std::vector<CostPtr>;

/// f_i(x) = 1/2 ||y - B x||^2; resolve is an exact linear solve.
class LeastSquaresCost final : public LocalCost {
 public:
  LeastSquaresCost(Mat B, Vec y);
  int dim() const override { return static_cast<int>(B_.cols()); }
  double evaluate(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  Mat hessian(const Vec& x) const override;
  Vec resolve(double a, const Vec& b) const override;
  double strong_convexity() const override { return lambda_min_ / 2.0; }
  double smoothness() const override { return lambda_max_; }

  const Mat& B() const { return B_; }
  const Vec& y() const { return y_; }

 private:
  Mat B_;
  Vec y_;
  Mat BtB_;
  Vec Bty_;
  double lambda_min_ = 0.0, lambda_max_ = 0.0;
};

/// Soft-margin SVM with a Huber-smoothed hinge so the cost stays
/// differentiable. Variable layout x = (w, b_offset); only w is regularized.
class SmoothedHingeSvmCost final : public LocalCost {
 public:
  struct Sample {
    Vec feature;
    int label;  // +1 or -1
  };

  SmoothedHingeSvmCost(std::vector<Sample> samples, double reg_weight,
                       double smoothing);
  int dim() const override { return feat_dim_ + 1; }
  double evaluate(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  Mat hessian(const Vec& x) const override;
  double strong_convexity() const override { return 0.0; }
  double smoothness() const override;

  const std::vector<Sample>& samples() const { return samples_; }

 private:
  std::vector<Sample> samples_;
  double reg_weight_;
  double smoothing_;
  int feat_dim_;
};

std::vector<SmoothedHingeSvmCost::Sample> load_svm_samples_csv(
    const std::string& path);

/// One agent's primal update: solves
///   grad f(x) + alpha_i + 2 c d_i x = c d_i z_self + c neighbor_sum.
Vec x_update_solve(const LocalCost& cost, int degree, double c,
                   const Vec& alpha_i, const Vec& neighbor_sum,
                   const Vec& z_self);

struct GlobalCostProfile {
  double v = 0.0;   // strong-convexity modulus of the stacked cost
  double L = 0.0;   // smoothness constant of the stacked cost
  double V1 = 0.0;  // feasible-set radius bound
  double V2 = 0.0;  // gradient-norm bound over the feasible ball
};

/// Minimizer of sum_i f_i over a shared variable, to ||grad|| <= 1e-10.
Vec centralized_minimizer(const CostList& costs, int N);

GlobalCostProfile estimate_constants(const CostList& costs, const Vec& x_star,
                                     std::uint64_t sample_seed = 1234,
                                     int samples = 10000);

/// Stacked helpers over per-agent costs.
double stacked_value(const CostList& costs, const Vec& x);
Vec stacked_gradient(const CostList& costs, const Vec& x);
Vec stack_consensus(const Vec& point, int D);

}  // namespace admmnet

#endif
