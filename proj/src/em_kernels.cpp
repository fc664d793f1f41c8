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

#include "segflow/em_kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace segflow {

namespace {
// Chunk size of the deterministic reduction. Fixed so that results do not
// depend on the number of threads.
constexpr Eigen::Index kChunk = 512;
}  // namespace

EmStats::EmStats(int k, int d)
    : weight_sum(Eigen::VectorXd::Zero(k)),
      mean_sum(Eigen::MatrixXd::Zero(k, d)),
      scatter_sum(k, Eigen::MatrixXd::Zero(d, d)),
      index_sum(Eigen::VectorXd::Zero(k)) {}

void EmStats::add(const EmStats& other) {
  weight_sum += other.weight_sum;
  mean_sum += other.mean_sum;
  for (size_t j = 0; j < scatter_sum.size(); ++j)
    scatter_sum[j] += other.scatter_sum[j];
  index_sum += other.index_sum;
  log_likelihood += other.log_likelihood;
}

Eigen::VectorXd component_log_density(const Eigen::MatrixXd& x,
                                      const ComponentEval& comp) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd out(n);
  Eigen::MatrixXd centered = x.rowwise() - comp.mu.transpose();
  // Solve L z = (x - mu)^T column-wise; |z|^2 is the Mahalanobis distance.
  Eigen::MatrixXd z = comp.chol_lower.template triangularView<Eigen::Lower>()
                          .solve(centered.transpose());
  for (Eigen::Index i = 0; i < n; ++i)
    out(i) = comp.log_norm - 0.5 * z.col(i).squaredNorm();
  return out;
}

namespace {

// Serial reduction of rows [begin, end); index_base offsets the global row
// index used by index_sum.
void accumulate_range(const Eigen::MatrixXd& x,
                      const std::vector<ComponentEval>& comps,
                      Eigen::Index begin, Eigen::Index end, EmStats* stats) {
  const int k = static_cast<int>(comps.size());
  const Eigen::Index d = x.cols();
  Eigen::VectorXd logp(k);
  Eigen::VectorXd z(d);
  for (Eigen::Index i = begin; i < end; ++i) {
    const auto xi = x.row(i).transpose();
    for (int j = 0; j < k; ++j) {
      z = comps[j].chol_lower.template triangularView<Eigen::Lower>().solve(
          xi - comps[j].mu);
      logp(j) = comps[j].log_weight + comps[j].log_norm - 0.5 * z.squaredNorm();
    }
    const double m = logp.maxCoeff();
    const double lse = m + std::log((logp.array() - m).exp().sum());
    stats->log_likelihood += lse;
    for (int j = 0; j < k; ++j) {
      const double r = std::exp(logp(j) - lse);
      stats->weight_sum(j) += r;
      stats->mean_sum.row(j) += r * x.row(i);
      stats->scatter_sum[j].noalias() += r * xi * xi.transpose();
      stats->index_sum(j) += r * static_cast<double>(i);
    }
  }
}

}  // namespace

EmStats em_accumulate_serial(const Eigen::MatrixXd& x,
                             const std::vector<ComponentEval>& comps) {
  EmStats stats(static_cast<int>(comps.size()), static_cast<int>(x.cols()));
  accumulate_range(x, comps, 0, x.rows(), &stats);
  return stats;
}

EmStats em_accumulate(const Eigen::MatrixXd& x,
                      const std::vector<ComponentEval>& comps, int n_threads) {
  const int k = static_cast<int>(comps.size());
  const int d = static_cast<int>(x.cols());
  const Eigen::Index n = x.rows();
  const Eigen::Index n_chunks = (n + kChunk - 1) / kChunk;

  std::vector<EmStats> partial(n_chunks, EmStats(k, d));
#ifdef _OPENMP
  const int threads = n_threads > 0 ? n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (Eigen::Index c = 0; c < n_chunks; ++c) {
    const Eigen::Index begin = c * kChunk;
    const Eigen::Index end = std::min(begin + kChunk, n);
    accumulate_range(x, comps, begin, end, &partial[c]);
  }

  EmStats total(k, d);
  for (Eigen::Index c = 0; c < n_chunks; ++c) total.add(partial[c]);
  return total;
}

}  // namespace segflow
