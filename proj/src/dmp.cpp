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

#include "segflow/dmp.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace segflow {

using json = nlohmann::ordered_json;

namespace {
constexpr double kPhaseFloor = 1e-6;

Eigen::VectorXd basis_activations(const DmpModel& model, double x) {
  Eigen::VectorXd psi(model.n_basis());
  for (int j = 0; j < model.n_basis(); ++j) {
    const double d = x - model.basis_centers(j);
    const double s = model.basis_widths(j);
    psi(j) = std::exp(-0.5 * d * d / (s * s));
  }
  return psi;
}
}  // namespace

Eigen::VectorXd DmpModel::forcing(double x) const {
  const Eigen::VectorXd psi = basis_activations(*this, x);
  const double denom = psi.sum();
  if (denom < 1e-300) return Eigen::VectorXd::Zero(dim());
  return x * (weights * psi) / denom;
}

DmpState initial_state(const DmpModel& model) {
  return DmpState{model.y0, Eigen::VectorXd::Zero(model.dim()), 1.0, 0.0};
}

DmpModel fit_dmp(const Demonstration& slice, const DmpConfig& config) {
  const Eigen::Index n = slice.size();
  if (n < 10)
    throw Error(ErrorCode::kDegenerateSegment,
                "segment has fewer than 10 samples");
  const double tau = slice.span();
  if (tau <= 0)
    throw Error(ErrorCode::kDegenerateSegment, "segment span is empty");
  const Eigen::Index dim = slice.n_config();

  DmpModel model;
  model.alpha = config.alpha;
  model.beta = config.alpha / 4.0;
  model.tau = tau;
  model.alpha_x = config.alpha_x;
  model.k_c = config.k_c;
  model.y0 = slice.q.row(0).transpose();
  model.y_g = slice.q.row(n - 1).transpose();
  model.goal_offset = Eigen::VectorXd::Zero(dim);

  // Centers follow the phase trajectory at equal time spacing; widths overlap
  // adjacent centers.
  const int nb = std::max(config.n_basis, 2);
  model.basis_centers.resize(nb);
  model.basis_widths.resize(nb);
  for (int j = 0; j < nb; ++j)
    model.basis_centers(j) =
        std::exp(-config.alpha_x * static_cast<double>(j) / (nb - 1));
  for (int j = 0; j < nb; ++j) {
    const double gap = j + 1 < nb
                           ? model.basis_centers(j) - model.basis_centers(j + 1)
                           : model.basis_centers(j - 1) - model.basis_centers(j);
    model.basis_widths(j) = std::max(0.63 * gap, 1e-8);
  }

  // Finite-difference velocities and accelerations (central in the interior).
  Eigen::MatrixXd vel(n, dim), acc(n, dim);
  auto dt_at = [&](Eigen::Index i) { return slice.t(i + 1) - slice.t(i); };
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == 0)
        vel(i, c) = (slice.q(1, c) - slice.q(0, c)) / dt_at(0);
      else if (i == n - 1)
        vel(i, c) = (slice.q(n - 1, c) - slice.q(n - 2, c)) / dt_at(n - 2);
      else
        vel(i, c) =
            (slice.q(i + 1, c) - slice.q(i - 1, c)) / (slice.t(i + 1) - slice.t(i - 1));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == 0)
        acc(i, c) = (vel(1, c) - vel(0, c)) / dt_at(0);
      else if (i == n - 1)
        acc(i, c) = (vel(n - 1, c) - vel(n - 2, c)) / dt_at(n - 2);
      else
        acc(i, c) =
            (vel(i + 1, c) - vel(i - 1, c)) / (slice.t(i + 1) - slice.t(i - 1));
    }
  }

  // Forcing targets f_d = tau^2 y'' - alpha (beta (y_g - y) - tau y').
  Eigen::VectorXd xs(n);
  Eigen::MatrixXd fd(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double trel = slice.t(i) - slice.t(0);
    xs(i) = std::exp(-config.alpha_x * trel / tau);
    for (Eigen::Index c = 0; c < dim; ++c) {
      fd(i, c) = tau * tau * acc(i, c) -
                 model.alpha * (model.beta * (model.y_g(c) - slice.q(i, c)) -
                                tau * vel(i, c));
    }
  }

  // Per-basis locally weighted least squares of f_d against x-scaled bases:
  // w_j = sum_i psi_j(x_i) x_i f_d_i / sum_i psi_j(x_i) x_i^2.
  model.weights = Eigen::MatrixXd::Zero(dim, nb);
  Eigen::MatrixXd psi(n, nb);
  for (Eigen::Index i = 0; i < n; ++i)
    psi.row(i) = basis_activations(model, xs(i)).transpose();
  for (int j = 0; j < nb; ++j) {
    double denom = 0.0;
    Eigen::VectorXd numer = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index i = 0; i < n; ++i) {
      denom += psi(i, j) * xs(i) * xs(i);
      numer += psi(i, j) * xs(i) * fd.row(i).transpose();
    }
    if (denom > 1e-300) model.weights.col(j) = numer / denom;
  }

  double sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    sq += (model.forcing(xs(i)) - fd.row(i).transpose()).squaredNorm();
  model.fit_rmse = std::sqrt(sq / static_cast<double>(n * dim));
  return model;
}

void apply_contact_offset(DmpModel* model, const Demonstration& slice,
                          double delta) {
  const Eigen::Index n = slice.size();
  if (n < 2) return;
  // Mean velocity direction over the trailing 0.1 s.
  const double t_from = slice.t_end() - 0.1;
  Eigen::Index i0 = n - 2;
  while (i0 > 0 && slice.t(i0) > t_from) --i0;
  Eigen::VectorXd dir =
      (slice.q.row(n - 1) - slice.q.row(i0)).transpose();
  const double norm = dir.norm();
  if (norm < 1e-12) return;
  model->goal_offset = delta * dir / norm;
}

std::pair<DmpState, Eigen::VectorXd> step_dmp(const DmpModel& model,
                                              const DmpState& state, double dt,
                                              const Eigen::VectorXd& y_measured) {
  const Eigen::VectorXd goal = model.y_g + model.goal_offset;
  const Eigen::VectorXd f = model.forcing(state.x);
  const Eigen::VectorXd y_r_ddot =
      (model.alpha * (model.beta * (goal - state.y) - model.tau * state.y_dot) +
       f) /
      (model.tau * model.tau);

  const double err2 = (y_measured - state.y).squaredNorm();
  const double x_dot =
      -model.alpha_x * state.x / (model.tau * (1.0 + model.k_c * err2));

  DmpState next;
  next.y_dot = state.y_dot + dt * y_r_ddot;
  next.y = state.y + dt * next.y_dot;
  next.x = std::clamp(state.x + dt * x_dot, kPhaseFloor, 1.0);
  next.t = state.t + dt;
  return {std::move(next), y_r_ddot};
}

namespace {
json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}
Eigen::VectorXd json_vec(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
  return v;
}
}  // namespace

std::string dmp_to_json(const DmpModel& m) {
  json root;
  root["alpha"] = m.alpha;
  root["beta"] = m.beta;
  root["tau"] = m.tau;
  root["alpha_x"] = m.alpha_x;
  root["k_c"] = m.k_c;
  root["y0"] = vec_json(m.y0);
  root["y_g"] = vec_json(m.y_g);
  root["goal_offset"] = vec_json(m.goal_offset);
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.weights.rows(); ++r)
    rows.push_back(vec_json(m.weights.row(r).transpose()));
  root["weights"] = rows;
  root["basis_centers"] = vec_json(m.basis_centers);
  root["basis_widths"] = vec_json(m.basis_widths);
  root["fit_rmse"] = m.fit_rmse;
  return root.dump(2);
}

DmpModel dmp_from_json(const std::string& text) {
  json root = json::parse(text);
  DmpModel m;
  m.alpha = root.at("alpha").get<double>();
  m.beta = root.at("beta").get<double>();
  m.tau = root.at("tau").get<double>();
  m.alpha_x = root.at("alpha_x").get<double>();
  m.k_c = root.at("k_c").get<double>();
  m.y0 = json_vec(root.at("y0"));
  m.y_g = json_vec(root.at("y_g"));
  m.goal_offset = json_vec(root.at("goal_offset"));
  const auto& rows = root.at("weights");
  m.weights.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r)
    m.weights.row(r) = json_vec(rows[r]).transpose();
  m.basis_centers = json_vec(root.at("basis_centers"));
  m.basis_widths = json_vec(root.at("basis_widths"));
  m.fit_rmse = root.value("fit_rmse", 0.0);
  return m;
}

}  // namespace segflow
