// Copyright 2026 The Segflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference implementations used only by tests. These are kept
// deliberately naive (explicit inverses, direct density formulas) so they do
// not share code paths with the library.

#ifndef SEGFLOW_TESTS_SUPPORT_ORACLES_HPP_
#define SEGFLOW_TESTS_SUPPORT_ORACLES_HPP_

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// chi-squared upper quantiles, quantile(0.999, df).
inline constexpr double kChi2_999_df1 = 10.827566170662733;
inline constexpr double kChi2_999_df3 = 16.266236196238129;

struct KalmanTrace {
  std::vector<Eigen::VectorXd> f_hat_pred;  // F_hat(t|t-1) before each update
  std::vector<Eigen::MatrixXd> p_pred;      // P(t|t-1) before each update
  std::vector<double> nis_p;                // innov' P^-1 innov
  std::vector<double> nis_s;                // innov' (P+R2)^-1 innov
};

// Textbook recursion for x(t+1) = x(t) + v, y = x + e with explicit inverses.
// Initialization: estimate = first measurement, P = R2; the first recorded
// step corresponds to the second measurement.
inline KalmanTrace kalman_reference(const Eigen::MatrixXd& measurements,
                                    const Eigen::MatrixXd& r1,
                                    const Eigen::MatrixXd& r2) {
  KalmanTrace trace;
  Eigen::VectorXd x = measurements.row(0).transpose();
  Eigen::MatrixXd p = r2;
  for (Eigen::Index t = 1; t < measurements.rows(); ++t) {
    const Eigen::VectorXd y = measurements.row(t).transpose();
    const Eigen::VectorXd innov = y - x;
    const Eigen::MatrixXd s = p + r2;
    trace.f_hat_pred.push_back(x);
    trace.p_pred.push_back(p);
    trace.nis_p.push_back(innov.dot(p.inverse() * innov));
    trace.nis_s.push_back(innov.dot(s.inverse() * innov));
    const Eigen::MatrixXd k = p * s.inverse();
    x = x + k * innov;
    p = p - k * s * k.transpose() + r1;
  }
  return trace;
}

// Positive root of p = p + r1 - p^2/(p + r2) located by bisection.
inline double riccati_fixed_point_bisect(double r1, double r2) {
  auto g = [&](double p) { return r1 * (p + r2) - p * p; };  // zero at the root
  double lo = 0.0, hi = std::max(1.0, 10.0 * (r1 + r2));
  while (g(hi) > 0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Mixture log-likelihood by direct density evaluation (determinant form).
inline double gmm_log_likelihood(const Eigen::MatrixXd& data,
                                 const std::vector<double>& weights,
                                 const std::vector<Eigen::VectorXd>& means,
                                 const std::vector<Eigen::MatrixXd>& covs) {
  const Eigen::Index n = data.rows(), d = data.cols();
  double ll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 0.0;
    for (size_t j = 0; j < weights.size(); ++j) {
      const Eigen::VectorXd diff = data.row(i).transpose() - means[j];
      const double quad = diff.dot(covs[j].inverse() * diff);
      const double norm = std::pow(2.0 * M_PI, -0.5 * static_cast<double>(d)) /
                          std::sqrt(covs[j].determinant());
      p += weights[j] * norm * std::exp(-0.5 * quad);
    }
    ll += std::log(p);
  }
  return ll;
}

// Minimum-jerk position between (0, y0) and (T, y1).
inline double min_jerk(double t, double duration, double y0, double y1) {
  const double s = std::clamp(t / duration, 0.0, 1.0);
  const double shape = 10.0 * s * s * s - 15.0 * s * s * s * s +
                       6.0 * s * s * s * s * s;
  return y0 + (y1 - y0) * shape;
}

}  // namespace oracle

#endif  // SEGFLOW_TESTS_SUPPORT_ORACLES_HPP_
