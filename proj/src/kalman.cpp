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

#include "segflow/kalman.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace segflow {

const char* point_source_name(PointSource source) {
  switch (source) {
    case PointSource::kPosition: return "position";
    case PointSource::kForce: return "force";
    case PointSource::kFused: return "fused";
  }
  return "unknown";
}

PointSource point_source_from_name(const std::string& name) {
  if (name == "position") return PointSource::kPosition;
  if (name == "force") return PointSource::kForce;
  if (name == "fused") return PointSource::kFused;
  throw Error(ErrorCode::kInvalidConfig, "unknown point source '" + name + "'");
}

namespace {

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-9) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * (1.0 + m.cwiseAbs().maxCoeff());
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().minCoeff();
}

void check_noise(const NoiseConfig& noise) {
  if (noise.r1.rows() != noise.r1.cols() || noise.r2.rows() != noise.r2.cols() ||
      noise.r1.rows() != noise.r2.rows())
    throw Error(ErrorCode::kNonSpdCovariance,
                "r1 and r2 must be square matrices of equal size");
  if (!is_symmetric(noise.r1) || !is_symmetric(noise.r2))
    throw Error(ErrorCode::kNonSpdCovariance, "noise covariance not symmetric");
  if (min_eigenvalue(noise.r2) <= 0.0)
    throw Error(ErrorCode::kNonSpdCovariance, "r2 is not positive definite");
  if (min_eigenvalue(noise.r1) < -1e-12)
    throw Error(ErrorCode::kNonSpdCovariance, "r1 has a negative eigenvalue");
}

}  // namespace

KalmanState kalman_init(const NoiseConfig& noise, const Eigen::VectorXd& f_m0) {
  check_noise(noise);
  if (f_m0.size() != noise.r2.rows())
    throw Error(ErrorCode::kNonSpdCovariance,
                "measurement dimension does not match noise covariance");
  KalmanState state;
  state.f_hat = f_m0;
  state.p = noise.r2;
  state.k_f = Eigen::MatrixXd::Zero(f_m0.size(), f_m0.size());
  state.t_index = 0;
  return state;
}

std::pair<KalmanState, double> kalman_step(const KalmanState& state,
                                           const Eigen::VectorXd& f_m,
                                           const NoiseConfig& noise,
                                           const KalmanConfig& config) {
  const Eigen::Index m = state.f_hat.size();
  if (f_m.size() != m)
    throw Error(ErrorCode::kModelCountMismatch,
                "measurement dimension mismatch");

  const Eigen::MatrixXd innov_cov = state.p + noise.r2;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(innov_cov);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw Error(ErrorCode::kSingularInnovationCovariance,
                "P + R2 is not invertible");

  const Eigen::VectorXd innovation = f_m - state.f_hat;
  double nis = 0.0;
  if (config.normalizer == NisNormalizer::kP) {
    Eigen::LDLT<Eigen::MatrixXd> p_ldlt(state.p);
    if (p_ldlt.info() != Eigen::Success || !p_ldlt.isPositive())
      throw Error(ErrorCode::kSingularInnovationCovariance,
                  "P is not invertible");
    nis = innovation.dot(p_ldlt.solve(innovation));
  } else {
    nis = innovation.dot(ldlt.solve(innovation));
  }

  // K = P (P + R2)^-1, computed as the transpose of (P+R2)^-1 P.
  const Eigen::MatrixXd gain = ldlt.solve(state.p).transpose();

  KalmanState next;
  next.f_hat = state.f_hat + gain * innovation;
  Eigen::MatrixXd p_upd = state.p - state.p * ldlt.solve(state.p);
  Eigen::MatrixXd p_pred = p_upd + noise.r1;
  next.p = 0.5 * (p_pred + p_pred.transpose());
  next.k_f = gain;
  next.t_index = state.t_index + 1;
  return {std::move(next), nis};
}

NisSeries nis_series(const Demonstration& demo, const NoiseConfig& noise,
                     const KalmanConfig& config) {
  if (demo.n_wrench() < 1)
    throw Error(ErrorCode::kMissingColumn, "demonstration has no wrench data");
  if (demo.size() < 1)
    throw Error(ErrorCode::kTooFewSamples, "empty demonstration");

  NisSeries out;
  out.t.reserve(demo.size());
  out.value.reserve(demo.size());
  KalmanState state = kalman_init(noise, demo.w.row(0).transpose());
  out.t.push_back(demo.t(0));
  out.value.push_back(0.0);
  for (Eigen::Index i = 1; i < demo.size(); ++i) {
    auto [next, nis] = kalman_step(state, demo.w.row(i).transpose(), noise,
                                   config);
    state = std::move(next);
    out.t.push_back(demo.t(i));
    out.value.push_back(nis);
  }
  return out;
}

NoiseConfig estimate_noise(const Demonstration& demo, double window_s,
                           double r1_scale, double ridge) {
  if (demo.n_wrench() < 1)
    throw Error(ErrorCode::kMissingColumn, "demonstration has no wrench data");
  const double t_limit = demo.t_start() + window_s;
  Eigen::Index count = 0;
  while (count < demo.size() && demo.t(count) <= t_limit) ++count;
  count = std::max<Eigen::Index>(count, 2);

  const Eigen::MatrixXd window = demo.w.topRows(count);
  const Eigen::RowVectorXd mean = window.colwise().mean();
  const Eigen::MatrixXd centered = window.rowwise() - mean;
  NoiseConfig noise;
  noise.r2 = centered.transpose() * centered / static_cast<double>(count);
  noise.r2.diagonal().array() += ridge;
  noise.r1 = r1_scale * noise.r2;
  return noise;
}

std::vector<SegmentationPoint> detect_peaks(const NisSeries& series,
                                            double threshold,
                                            double min_separation) {
  if (threshold <= 0)
    throw Error(ErrorCode::kInvalidConfig, "threshold must be positive");
  if (min_separation < 0)
    throw Error(ErrorCode::kInvalidConfig, "min_separation must be >= 0");

  std::vector<SegmentationPoint> peaks;
  size_t best = 0;
  double last_above = 0.0;
  bool in_cluster = false;
  for (size_t i = 0; i < series.value.size(); ++i) {
    if (!(series.value[i] > threshold)) continue;
    if (in_cluster && series.t[i] - last_above >= min_separation) {
      peaks.push_back({series.t[best], PointSource::kForce, series.value[best]});
      in_cluster = false;
    }
    if (!in_cluster) {
      best = i;
      in_cluster = true;
    } else if (series.value[i] > series.value[best]) {
      best = i;
    }
    last_above = series.t[i];
  }
  if (in_cluster)
    peaks.push_back({series.t[best], PointSource::kForce, series.value[best]});
  return peaks;
}

NisSeries load_nis_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::kMissingColumn, "empty file '" + path + "'");
  NisSeries series;
  long row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw Error(ErrorCode::kNonNumericCell,
                  "row " + std::to_string(row) + " needs two cells", row);
    char* end = nullptr;
    const double tv = std::strtod(a.c_str(), &end);
    const double vv = std::strtod(b.c_str(), &end);
    series.t.push_back(tv);
    series.value.push_back(vv);
    ++row;
  }
  return series;
}

void save_nis_csv(const NisSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out << "t,value\n";
  char buf[64];
  for (size_t i = 0; i < series.t.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", series.t[i],
                  series.value[i]);
    out << buf;
  }
}

}  // namespace segflow
