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

#ifndef SEGFLOW_GMM_HPP_
#define SEGFLOW_GMM_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "segflow/demonstration.hpp"
#include "segflow/segmentation_point.hpp"

namespace segflow {

// One mixture component over the time-augmented configuration (t, xi), with
// the mean and covariance held in partitioned form:
//   mean = (mu_t, mu_xi),  cov = [[sigma_t, sigma_t_xi], [sigma_xi_t, sigma_xi]]
// sigma_xi_t is the exact transpose of sigma_t_xi at all times.
struct GaussianComponent {
  double weight = 0.0;
  double mu_t = 0.0;
  Eigen::VectorXd mu_xi;
  double sigma_t = 0.0;
  Eigen::RowVectorXd sigma_t_xi;
  Eigen::VectorXd sigma_xi_t;
  Eigen::MatrixXd sigma_xi;

  int config_dim() const { return static_cast<int>(mu_xi.size()); }
  Eigen::VectorXd full_mean() const;
  Eigen::MatrixXd full_covariance() const;
};

// Builds a component from unpartitioned (t, xi) moments, setting sigma_xi_t
// from the transpose of the upper-right block.
GaussianComponent make_component(double weight, const Eigen::VectorXd& mean,
                                 const Eigen::MatrixXd& cov);

struct Gmm {
  std::vector<GaussianComponent> components;
  double log_likelihood = 0.0;
  int n_iterations = 0;
  // Log-likelihood after each EM iteration, for convergence diagnostics.
  std::vector<double> ll_history;

  int size() const { return static_cast<int>(components.size()); }
};

struct EmConfig {
  double reg_eps = 1e-6;  // diagonal regularization, standardized units
  int max_iter = 200;
  double tol = 1e-6;      // |delta log-likelihood| stopping threshold
  int n_threads = 0;      // 0 = library default; results identical regardless
};

// Candidate time interval between two chronologically adjacent components:
//   t_b1 = mu_t[i] + sqrt(sigma_t[i]),  t_b2 = mu_t[i+1] - sqrt(sigma_t[i+1])
// `overlapping` is set when the standard deviations overlap (t_b1 > t_b2).
struct CandidateInterval {
  double t_b1 = 0.0;
  double t_b2 = 0.0;
  int left_index = 0;
  int right_index = 0;
  bool overlapping = false;
};

// Fits a k-component GMM to the (t, q) rows of the demonstration with EM.
// Deterministic: time and configuration channels are z-scored, components are
// initialized from the moments of k equal time bins, and the returned
// components are mapped back to original units and ordered by ascending mu_t.
// Throws kTooFewSamples or kSingularComponent.
Gmm fit_gmm(const Demonstration& demo, int k, const EmConfig& config = {});

// Fits every k in [k_min, k_max] and returns the fit minimizing
// BIC = -2*log_likelihood + p*ln(N), ties broken toward smaller k. Individual
// fits run concurrently. Throws kAllFitsFailed when no k succeeds.
Gmm select_model(const Demonstration& demo, int k_min, int k_max,
                 const EmConfig& config = {});

// The k-1 candidate intervals between consecutive components. Throws
// kUnorderedGmm when mu_t is not ascending.
std::vector<CandidateInterval> candidate_intervals(const Gmm& gmm);

// One position-source segmentation point per interval, at the midpoint
// (t_b1 + t_b2) / 2, in increasing time order.
std::vector<SegmentationPoint> initial_points(
    const std::vector<CandidateInterval>& intervals);

std::string gmm_to_json(const Gmm& gmm);
Gmm gmm_from_json(const std::string& text);

}  // namespace segflow

#endif  // SEGFLOW_GMM_HPP_
