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

#ifndef SEGFLOW_EM_KERNELS_HPP_
#define SEGFLOW_EM_KERNELS_HPP_

#include <vector>

#include <Eigen/Dense>

namespace segflow {

// Per-component parameters in evaluation form. log_norm carries the constant
// part of the log density: -0.5*d*log(2*pi) - log|L| for Cholesky factor L.
struct ComponentEval {
  Eigen::VectorXd mu;
  Eigen::MatrixXd chol_lower;
  double log_weight = 0.0;
  double log_norm = 0.0;
};

// Responsibility-weighted sufficient statistics of one EM pass over the data
// matrix X (N x d, rows are samples):
//   weight_sum(j)   = sum_i r_ij
//   mean_sum(j)     = sum_i r_ij * x_i
//   scatter_sum[j]  = sum_i r_ij * x_i x_i^T
//   index_sum(j)    = sum_i r_ij * i        (chronological tie-breaking)
//   log_likelihood  = sum_i log sum_j w_j N(x_i | mu_j, Sigma_j)
struct EmStats {
  Eigen::VectorXd weight_sum;
  Eigen::MatrixXd mean_sum;  // k x d
  std::vector<Eigen::MatrixXd> scatter_sum;
  Eigen::VectorXd index_sum;
  double log_likelihood = 0.0;

  EmStats(int k, int d);
  void add(const EmStats& other);
};

// One fused E-step + moment-accumulation pass. Samples are processed in
// fixed-size chunks; each chunk is reduced serially and chunk results are
// combined in chunk order, so the result is bit-identical for any thread
// count. Chunks run under OpenMP when n_threads != 1 (0 = library default).
EmStats em_accumulate(const Eigen::MatrixXd& x,
                      const std::vector<ComponentEval>& comps, int n_threads);

// Plain single loop over samples, kept as the reference implementation for
// tests and benchmarks. Summation order differs from em_accumulate, so
// results agree only to rounding error.
EmStats em_accumulate_serial(const Eigen::MatrixXd& x,
                             const std::vector<ComponentEval>& comps);

// Per-sample log densities log N(x_i | mu, Sigma) for one component.
Eigen::VectorXd component_log_density(const Eigen::MatrixXd& x,
                                      const ComponentEval& comp);

}  // namespace segflow

#endif  // SEGFLOW_EM_KERNELS_HPP_
