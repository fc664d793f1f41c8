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

#ifndef SEGFLOW_KALMAN_HPP_
#define SEGFLOW_KALMAN_HPP_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "segflow/demonstration.hpp"
#include "segflow/segmentation_point.hpp"

namespace segflow {

// Process noise r1 and measurement noise r2 of the random-walk force model
//   F(t+1) = F(t) + v(t),  F_m(t) = F(t) + e(t).
// r2 must be symmetric positive definite; r1 symmetric positive semidefinite.
struct NoiseConfig {
  Eigen::MatrixXd r1;
  Eigen::MatrixXd r2;
};

// Filter state between steps. f_hat and p are the one-step prediction
// F_hat(t|t-1) and its error variance P(t|t-1); k_f is the gain applied at
// the previous step.
struct KalmanState {
  Eigen::VectorXd f_hat;
  Eigen::MatrixXd p;
  Eigen::MatrixXd k_f;
  long t_index = 0;
};

// Which variance normalizes the squared prediction error. kP divides by
// P(t|t-1); kPPlusR2 divides by the innovation covariance P(t|t-1)+R2, which
// makes the statistic chi-squared with m degrees of freedom under the model.
enum class NisNormalizer { kP, kPPlusR2 };

struct KalmanConfig {
  NisNormalizer normalizer = NisNormalizer::kP;
};

// Normalized prediction-error series; value(i) pairs with sample i of the
// source demonstration, with value 0 at the initialization sample.
struct NisSeries {
  std::vector<double> t;
  std::vector<double> value;
};

// State with f_hat = f_m0 and p = r2. Throws kNonSpdCovariance when r2 is
// not positive definite or r1 not positive semidefinite.
KalmanState kalman_init(const NoiseConfig& noise, const Eigen::VectorXd& f_m0);

// One measurement update + time update:
//   K   = P (P + R2)^-1
//   F~  = F_m - F_hat(t|t-1)
//   nis = F~^T N^-1 F~          with N = P or P+R2 per config
//   F_hat(t+1|t) = F_hat(t|t-1) + K F~
//   P(t+1|t)     = P(t|t-1) - P (P+R2)^-1 P + R1
// The returned covariance is re-symmetrized. Throws
// kSingularInnovationCovariance when P+R2 cannot be factorized.
std::pair<KalmanState, double> kalman_step(const KalmanState& state,
                                           const Eigen::VectorXd& f_m,
                                           const NoiseConfig& noise,
                                           const KalmanConfig& config = {});

// Runs the filter over all wrench channels of a demonstration, initializing
// from the first sample.
NisSeries nis_series(const Demonstration& demo, const NoiseConfig& noise,
                     const KalmanConfig& config = {});

// r2 = sample covariance of the wrench over the leading window (assumed
// contact-free) + ridge on the diagonal; r1 = r1_scale * r2.
NoiseConfig estimate_noise(const Demonstration& demo, double window_s = 0.5,
                           double r1_scale = 1e-4, double ridge = 1e-8);

// Groups samples with value > threshold into clusters closed under time gaps
// < min_separation and returns one force-source point per cluster at its
// maximum (earliest index on exact ties), strength = that maximum.
std::vector<SegmentationPoint> detect_peaks(const NisSeries& series,
                                            double threshold,
                                            double min_separation);

// Two-column CSV (t,value) used for plot emission and shipped fixtures.
NisSeries load_nis_csv(const std::string& path);
void save_nis_csv(const NisSeries& series, const std::string& path);

}  // namespace segflow

#endif  // SEGFLOW_KALMAN_HPP_
