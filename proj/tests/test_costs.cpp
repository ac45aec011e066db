#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "admmnet/costs.hpp"
#include "admmnet/rng.hpp"

using namespace admmnet;

namespace {

Vec fd_gradient(const LocalCost& cost, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vec hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (cost.evaluate(hi) - cost.evaluate(lo)) / (2 * h);
  }
  return g;
}

Mat random_matrix(int r, int c, std::uint64_t seed) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng::normal(seed, i, j, 0);
  return m;
}

Vec random_vec(int n, std::uint64_t seed, std::uint64_t tag = 9) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng::normal(seed, tag, i, 1);
  return v;
}

}  // namespace

TEST_CASE("least squares value gradient hessian") {
  Mat B = random_matrix(5, 3, 21);
  Vec y = random_vec(5, 21);
  LeastSquaresCost cost(B, y);

  Vec x = random_vec(3, 22);
  CHECK(cost.evaluate(x) == doctest::Approx(0.5 * (y - B * x).squaredNorm()));
  CHECK((cost.gradient(x) - fd_gradient(cost, x)).norm() <
        1e-5 * (1.0 + cost.gradient(x).norm()));
  CHECK((cost.hessian(x) - B.transpose() * B).cwiseAbs().maxCoeff() < 1e-12);

  // Convexity constants: eigenvalues of B'B, strong convexity in the
  // v||x-y||^2 convention (factor 1/2 of the smallest Hessian eigenvalue).
  Eigen::SelfAdjointEigenSolver<Mat> es(B.transpose() * B);
  CHECK(cost.strong_convexity() ==
        doctest::Approx(es.eigenvalues().minCoeff() / 2.0));
  CHECK(cost.smoothness() == doctest::Approx(es.eigenvalues().maxCoeff()));
}

TEST_CASE("strong convexity and smoothness witnesses") {
  Mat B = random_matrix(6, 3, 31);
  Vec y = random_vec(6, 31);
  LeastSquaresCost cost(B, y);
  const double v = cost.strong_convexity();
  const double L = cost.smoothness();
  for (std::uint64_t s = 0; s < 20; ++s) {
    Vec a = random_vec(3, 100 + s, 1), b = random_vec(3, 200 + s, 2);
    const double lhs = cost.evaluate(a);
    const double rhs = cost.evaluate(b) + cost.gradient(b).dot(a - b) +
                       v * (a - b).squaredNorm();
    CHECK(lhs >= rhs - 1e-9 * (1.0 + std::abs(lhs)));
    CHECK((cost.gradient(a) - cost.gradient(b)).norm() <=
          L * (a - b).norm() * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("resolve satisfies its stationarity equation") {
  Mat B = random_matrix(4, 3, 41);
  Vec y = random_vec(4, 41);
  LeastSquaresCost cost(B, y);
  const double a = 1.7;
  Vec rhs = random_vec(3, 42);
  Vec x = cost.resolve(a, rhs);
  CHECK((cost.gradient(x) + a * x - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
}

TEST_CASE("smoothed hinge svm cost") {
  std::vector<SmoothedHingeSvmCost::Sample> samples;
  for (int i = 0; i < 40; ++i) {
    SmoothedHingeSvmCost::Sample s;
    s.feature = random_vec(2, 300 + i, 3);
    s.label = (i % 2 == 0) ? 1 : -1;
    s.feature += Vec::Constant(2, s.label * 1.5);
    samples.push_back(s);
  }
  SmoothedHingeSvmCost cost(samples, 0.3, 0.1);
  CHECK(cost.dim() == 3);  // (w, offset)
  CHECK(cost.strong_convexity() == 0.0);

  double max_h = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Vec x = 0.5 * random_vec(3, 400 + s, 4);
    CHECK((cost.gradient(x) - fd_gradient(cost, x)).norm() <
          1e-4 * (1.0 + cost.gradient(x).norm()));
    Eigen::SelfAdjointEigenSolver<Mat> es(cost.hessian(x));
    CHECK(es.eigenvalues().minCoeff() > -1e-10);  // PSD
    max_h = std::max(max_h, es.eigenvalues().maxCoeff());
  }
  CHECK(cost.smoothness() >= max_h - 1e-9);
}

TEST_CASE("x update solve matches the update equation") {
  Mat B = random_matrix(4, 2, 51);
  Vec y = random_vec(4, 51);
  LeastSquaresCost cost(B, y);
  const int degree = 3;
  const double c = 0.8;
  Vec alpha = random_vec(2, 52), nbr = random_vec(2, 53), z = random_vec(2, 54);
  Vec x = x_update_solve(cost, degree, c, alpha, nbr, z);
  Vec resid = cost.gradient(x) + alpha + 2.0 * c * degree * x -
              c * degree * z - c * nbr;
  CHECK(resid.norm() < 1e-9 * (1.0 + x.norm()));
}

TEST_CASE("centralized minimizer matches normal equations") {
  CostList costs;
  Mat H_sum = Mat::Zero(3, 3);
  Vec b_sum = Vec::Zero(3);
  for (int i = 0; i < 5; ++i) {
    Mat B = random_matrix(4, 3, 60 + i);
    Vec y = random_vec(4, 60 + i);
    costs.push_back(std::make_shared<LeastSquaresCost>(B, y));
    H_sum += B.transpose() * B;
    b_sum += B.transpose() * y;
  }
  Vec x = centralized_minimizer(costs, 3);
  Vec oracle = H_sum.ldlt().solve(b_sum);
  CHECK((x - oracle).norm() < 1e-8 * (1.0 + oracle.norm()));
  // Individual gradients need not vanish at the shared optimum, but their
  // agent-wise sum must.
  Vec g = stacked_gradient(costs, stack_consensus(x, 5));
  Vec g_sum = Vec::Zero(3);
  for (int i = 0; i < 5; ++i) g_sum += g.segment(3 * i, 3);
  CHECK(g_sum.norm() < 5 * 1e-8 * (1.0 + x.norm()));
}

TEST_CASE("estimate constants uses optimum norms") {
  CostList costs;
  for (int i = 0; i < 4; ++i) {
    Mat B = random_matrix(5, 3, 70 + i);
    Vec y = random_vec(5, 70 + i);
    costs.push_back(std::make_shared<LeastSquaresCost>(B, y));
  }
  Vec x = centralized_minimizer(costs, 3);
  GlobalCostProfile p = estimate_constants(costs, x);

  double vmin = 1e18, lmax = 0;
  for (const auto& c : costs) {
    vmin = std::min(vmin, c->strong_convexity());
    lmax = std::max(lmax, c->smoothness());
  }
  CHECK(p.v == doctest::Approx(vmin));
  CHECK(p.L == doctest::Approx(lmax));
  CHECK(p.V1 == doctest::Approx(1.05 * std::sqrt(4.0) * x.norm()));
  double g_sq = 0;
  for (const auto& c : costs) g_sq += c->gradient(x).squaredNorm();
  CHECK(p.V2 == doctest::Approx(std::max(1.0, 1.05 * std::sqrt(g_sq))));
}

TEST_CASE("stacked helpers") {
  CostList costs;
  for (int i = 0; i < 3; ++i)
    costs.push_back(std::make_shared<LeastSquaresCost>(
        random_matrix(3, 2, 80 + i), random_vec(3, 80 + i)));
  Vec x = random_vec(6, 81);
  double total = 0;
  for (int i = 0; i < 3; ++i) total += costs[i]->evaluate(x.segment(2 * i, 2));
  CHECK(stacked_value(costs, x) == doctest::Approx(total));
  Vec g = stacked_gradient(costs, x);
  for (int i = 0; i < 3; ++i)
    CHECK((g.segment(2 * i, 2) - costs[i]->gradient(x.segment(2 * i, 2))).norm() ==
          0.0);
  Vec point = random_vec(2, 82);
  Vec stacked = stack_consensus(point, 3);
  CHECK(stacked.size() == 6);
  CHECK(stacked.segment(2, 2) == point);
}

TEST_CASE("svm samples csv round trip") {
  std::vector<SmoothedHingeSvmCost::Sample> samples;
  for (int i = 0; i < 7; ++i) {
    SmoothedHingeSvmCost::Sample s;
    s.feature = random_vec(2, 500 + i, 5);
    s.label = (i % 2 == 0) ? 1 : -1;
    samples.push_back(s);
  }
  const std::string path = "/tmp/admmnet_test_svm_samples.csv";
  {
    std::ofstream out(path);
    out << "x0,x1,label\n";
    for (const auto& s : samples)
      out << s.feature[0] << ',' << s.feature[1] << ',' << s.label << '\n';
  }
  auto loaded = load_svm_samples_csv(path);
  REQUIRE(loaded.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    CHECK(loaded[i].label == samples[i].label);
    CHECK((loaded[i].feature - samples[i].feature).norm() < 1e-4);
  }
  std::remove(path.c_str());
}
