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

#include "segflow/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "segflow/em_kernels.hpp"

namespace segflow {

using json = nlohmann::ordered_json;

Eigen::VectorXd GaussianComponent::full_mean() const {
  Eigen::VectorXd m(1 + mu_xi.size());
  m(0) = mu_t;
  m.tail(mu_xi.size()) = mu_xi;
  return m;
}

Eigen::MatrixXd GaussianComponent::full_covariance() const {
  const Eigen::Index n = mu_xi.size();
  Eigen::MatrixXd cov(1 + n, 1 + n);
  cov(0, 0) = sigma_t;
  cov.block(0, 1, 1, n) = sigma_t_xi;
  cov.block(1, 0, n, 1) = sigma_xi_t;
  cov.block(1, 1, n, n) = sigma_xi;
  return cov;
}

GaussianComponent make_component(double weight, const Eigen::VectorXd& mean,
                                 const Eigen::MatrixXd& cov) {
  const Eigen::Index n = mean.size() - 1;
  GaussianComponent c;
  c.weight = weight;
  c.mu_t = mean(0);
  c.mu_xi = mean.tail(n);
  c.sigma_t = cov(0, 0);
  c.sigma_t_xi = cov.block(0, 1, 1, n);
  c.sigma_xi_t = c.sigma_t_xi.transpose();
  c.sigma_xi = cov.block(1, 1, n, n);
  return c;
}

namespace {

struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& x) {
    Standardizer s;
    s.mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - s.mean.transpose();
    s.scale = (centered.array().square().colwise().mean()).sqrt();
    for (Eigen::Index j = 0; j < s.scale.size(); ++j)
      if (s.scale(j) < 1e-12) s.scale(j) = 1.0;
    return s;
  }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
    return (x.rowwise() - mean.transpose()).array().rowwise() /
           scale.transpose().array();
  }
};

struct RawComponent {
  double weight;
  Eigen::VectorXd mu;
  Eigen::MatrixXd cov;
  double order_index = 0.0;  // responsibility-weighted mean sample index
};

ComponentEval make_eval(const RawComponent& c) {
  ComponentEval e;
  e.mu = c.mu;
  Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kSingularComponent,
                "component covariance not positive definite");
  e.chol_lower = llt.matrixL();
  const double d = static_cast<double>(c.mu.size());
  e.log_norm = -0.5 * d * std::log(2.0 * M_PI) -
               e.chol_lower.diagonal().array().log().sum();
  e.log_weight = std::log(c.weight);
  return e;
}

// Moments of k equal-width time bins; falls back to an equal-count partition
// when a bin ends up with fewer than two samples (short or skewed data).
std::vector<RawComponent> init_components(const Eigen::MatrixXd& x, int k,
                                          double reg_eps) {
  const Eigen::Index n = x.rows(), d = x.cols();
  const double t0 = x.col(0).minCoeff(), t1 = x.col(0).maxCoeff();
  std::vector<std::vector<Eigen::Index>> bins(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    int b = t1 > t0 ? static_cast<int>((x(i, 0) - t0) / (t1 - t0) * k) : 0;
    b = std::clamp(b, 0, k - 1);
    bins[b].push_back(i);
  }
  const bool degenerate = std::any_of(
      bins.begin(), bins.end(), [](const auto& b) { return b.size() < 2; });
  if (degenerate) {
    for (auto& b : bins) b.clear();
    for (Eigen::Index i = 0; i < n; ++i)
      bins[static_cast<int>(i * k / n)].push_back(i);
  }

  std::vector<RawComponent> comps(k);
  for (int j = 0; j < k; ++j) {
    const auto& idx = bins[j];
    RawComponent& c = comps[j];
    c.weight = static_cast<double>(idx.size()) / static_cast<double>(n);
    c.mu = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i : idx) c.mu += x.row(i).transpose();
    c.mu /= static_cast<double>(idx.size());
    c.cov = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i : idx) {
      Eigen::VectorXd v = x.row(i).transpose() - c.mu;
      c.cov.noalias() += v * v.transpose();
    }
    c.cov /= static_cast<double>(idx.size());
    c.cov.diagonal().array() += reg_eps;
  }
  return comps;
}

}  // namespace

Gmm fit_gmm(const Demonstration& demo, int k, const EmConfig& config) {
  if (k < 1)
    throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");
  const Eigen::Index n = demo.size();
  const Eigen::Index n_cfg = demo.n_config();
  if (n < static_cast<Eigen::Index>(k) * (n_cfg + 2))
    throw Error(ErrorCode::kTooFewSamples,
                "need at least k*(n_config+2) samples, have " +
                    std::to_string(n));

  Eigen::MatrixXd raw(n, 1 + n_cfg);
  raw.col(0) = demo.t;
  raw.rightCols(n_cfg) = demo.q;
  const Standardizer std_xf = Standardizer::fit(raw);
  const Eigen::MatrixXd x = std_xf.apply(raw);
  const Eigen::Index d = x.cols();

  std::vector<RawComponent> comps = init_components(x, k, config.reg_eps);

  Gmm result;
  double prev_ll = -std::numeric_limits<double>::infinity();
  EmStats stats(k, static_cast<int>(d));
  int iterations = 0;
  for (int it = 0; it < config.max_iter; ++it) {
    std::vector<ComponentEval> evals;
    evals.reserve(k);
    for (const auto& c : comps) evals.push_back(make_eval(c));
    stats = em_accumulate(x, evals, config.n_threads);
    result.ll_history.push_back(stats.log_likelihood);

    // M-step
    for (int j = 0; j < k; ++j) {
      const double nk = stats.weight_sum(j);
      if (!(nk > 1e-10))
        throw Error(ErrorCode::kSingularComponent,
                    "component " + std::to_string(j) + " collapsed");
      comps[j].weight = nk / static_cast<double>(n);
      comps[j].mu = stats.mean_sum.row(j).transpose() / nk;
      comps[j].cov = stats.scatter_sum[j] / nk -
                     comps[j].mu * comps[j].mu.transpose();
      comps[j].cov.diagonal().array() += config.reg_eps;
      comps[j].order_index = stats.index_sum(j) / nk;
    }
    iterations = it + 1;
    if (std::abs(stats.log_likelihood - prev_ll) < config.tol) break;
    prev_ll = stats.log_likelihood;
  }

  // Refresh the reported likelihood so it matches the returned parameters.
  {
    std::vector<ComponentEval> evals;
    evals.reserve(k);
    for (const auto& c : comps) evals.push_back(make_eval(c));
    stats = em_accumulate(x, evals, config.n_threads);
    result.ll_history.push_back(stats.log_likelihood);
    for (int j = 0; j < k; ++j)
      comps[j].order_index = stats.index_sum(j) / stats.weight_sum(j);
  }

  std::sort(comps.begin(), comps.end(),
            [](const RawComponent& a, const RawComponent& b) {
              if (std::abs(a.mu(0) - b.mu(0)) > 1e-12) return a.mu(0) < b.mu(0);
              return a.order_index < b.order_index;
            });

  // Map back to original units: mu = m + S*mu_z, cov = S*cov_z*S.
  const Eigen::VectorXd& s = std_xf.scale;
  for (const auto& c : comps) {
    Eigen::VectorXd mu = std_xf.mean + s.cwiseProduct(c.mu);
    Eigen::MatrixXd cov = c.cov.cwiseProduct(s * s.transpose());
    result.components.push_back(make_component(c.weight, mu, cov));
  }
  const double log_scale = s.array().log().sum();
  result.log_likelihood =
      stats.log_likelihood - static_cast<double>(n) * log_scale;
  for (auto& ll : result.ll_history) ll -= static_cast<double>(n) * log_scale;
  result.n_iterations = iterations;
  return result;
}

Gmm select_model(const Demonstration& demo, int k_min, int k_max,
                 const EmConfig& config) {
  if (k_min < 1 || k_min > k_max)
    throw Error(ErrorCode::kInvalidConfig, "need 1 <= k_min <= k_max");
  const int n_fits = k_max - k_min + 1;
  std::vector<Gmm> fits(n_fits);
  std::vector<std::string> failures(n_fits);
  std::vector<char> ok(n_fits, 0);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_fits; ++i) {
    try {
      fits[i] = fit_gmm(demo, k_min + i, config);
      ok[i] = 1;
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  }

  const double n = static_cast<double>(demo.size());
  const double d = static_cast<double>(demo.n_config() + 1);
  int best = -1;
  double best_bic = 0.0;
  for (int i = 0; i < n_fits; ++i) {
    if (!ok[i]) continue;
    const double k = static_cast<double>(k_min + i);
    const double p = (k - 1.0) + k * (d + d * (d + 1.0) / 2.0);
    const double bic = -2.0 * fits[i].log_likelihood + p * std::log(n);
    if (best < 0 || bic < best_bic) {
      best = i;
      best_bic = bic;
    }
  }
  if (best < 0) {
    std::string detail;
    for (int i = 0; i < n_fits; ++i)
      if (!failures[i].empty())
        detail += " k=" + std::to_string(k_min + i) + ": " + failures[i] + ";";
    throw Error(ErrorCode::kAllFitsFailed, "every fit failed:" + detail);
  }
  return fits[best];
}

std::vector<CandidateInterval> candidate_intervals(const Gmm& gmm) {
  if (gmm.size() < 2)
    throw Error(ErrorCode::kInvalidConfig,
                "need at least 2 components for intervals");
  std::vector<CandidateInterval> out;
  for (int i = 0; i + 1 < gmm.size(); ++i) {
    const auto& a = gmm.components[i];
    const auto& b = gmm.components[i + 1];
    if (b.mu_t < a.mu_t)
      throw Error(ErrorCode::kUnorderedGmm,
                  "components not chronologically ordered");
    CandidateInterval iv;
    iv.t_b1 = a.mu_t + std::sqrt(a.sigma_t);
    iv.t_b2 = b.mu_t - std::sqrt(b.sigma_t);
    iv.left_index = i;
    iv.right_index = i + 1;
    iv.overlapping = iv.t_b1 > iv.t_b2;
    out.push_back(iv);
  }
  return out;
}

std::vector<SegmentationPoint> initial_points(
    const std::vector<CandidateInterval>& intervals) {
  std::vector<SegmentationPoint> pts;
  pts.reserve(intervals.size());
  for (const auto& iv : intervals)
    pts.push_back({0.5 * (iv.t_b1 + iv.t_b2), PointSource::kPosition, 0.0});
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.t < b.t; });
  return pts;
}

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
  return v;
}

}  // namespace

std::string gmm_to_json(const Gmm& gmm) {
  json root;
  root["components"] = json::array();
  for (const auto& c : gmm.components) {
    json jc;
    jc["weight"] = c.weight;
    jc["mu_t"] = c.mu_t;
    jc["mu_xi"] = vec_to_json(c.mu_xi);
    jc["sigma_t"] = c.sigma_t;
    jc["sigma_t_xi"] = vec_to_json(c.sigma_t_xi.transpose());
    jc["sigma_xi_t"] = vec_to_json(c.sigma_xi_t);
    json rows = json::array();
    for (Eigen::Index r = 0; r < c.sigma_xi.rows(); ++r)
      rows.push_back(vec_to_json(c.sigma_xi.row(r).transpose()));
    jc["sigma_xi"] = rows;
    root["components"].push_back(jc);
  }
  root["log_likelihood"] = gmm.log_likelihood;
  root["n_iterations"] = gmm.n_iterations;
  return root.dump(2);
}

Gmm gmm_from_json(const std::string& text) {
  json root = json::parse(text);
  Gmm gmm;
  for (const auto& jc : root.at("components")) {
    GaussianComponent c;
    c.weight = jc.at("weight").get<double>();
    c.mu_t = jc.at("mu_t").get<double>();
    c.mu_xi = vec_from_json(jc.at("mu_xi"));
    c.sigma_t = jc.at("sigma_t").get<double>();
    c.sigma_t_xi = vec_from_json(jc.at("sigma_t_xi")).transpose();
    c.sigma_xi_t = vec_from_json(jc.at("sigma_xi_t"));
    if (c.sigma_xi_t.size() != c.sigma_t_xi.size() ||
        (c.sigma_xi_t - c.sigma_t_xi.transpose()).cwiseAbs().maxCoeff() != 0.0)
      throw Error(ErrorCode::kInvalidConfig,
                  "sigma_xi_t is not the transpose of sigma_t_xi");
    const auto& rows = jc.at("sigma_xi");
    c.sigma_xi.resize(rows.size(), rows.size());
    for (size_t r = 0; r < rows.size(); ++r)
      c.sigma_xi.row(r) = vec_from_json(rows[r]).transpose();
    gmm.components.push_back(std::move(c));
  }
  gmm.log_likelihood = root.at("log_likelihood").get<double>();
  gmm.n_iterations = root.at("n_iterations").get<int>();
  return gmm;
}

}  // namespace segflow
