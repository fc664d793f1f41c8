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

#ifndef SEGFLOW_DMP_HPP_
#define SEGFLOW_DMP_HPP_

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "segflow/demonstration.hpp"

namespace segflow {

struct DmpConfig {
  double alpha = 25.0;   // attractor gain; beta = alpha/4 (critical damping)
  int n_basis = 20;
  double alpha_x = 8.0;  // phase decay, x(t) = exp(-alpha_x * t / tau)
  double k_c = 100.0;    // error-based phase-slowdown coupling gain
};

// A per-segment movement primitive:
//   tau^2 y_r'' = alpha (beta (y_g + goal_offset - y) - tau y') + f(x)
//   f(x) = x * sum_j w_j psi_j(x) / sum_j psi_j(x)   per channel
//   x'   = -alpha_x x / (tau (1 + k_c |y_measured - y|^2))
struct DmpModel {
  double alpha = 25.0;
  double beta = 6.25;
  double tau = 1.0;
  double alpha_x = 8.0;
  double k_c = 100.0;
  Eigen::VectorXd y0;
  Eigen::VectorXd y_g;
  Eigen::VectorXd goal_offset;      // zero unless the segment ends in contact
  Eigen::MatrixXd weights;          // n x B
  Eigen::VectorXd basis_centers;    // B, strictly decreasing in (0, 1]
  Eigen::VectorXd basis_widths;     // B
  double fit_rmse = 0.0;            // training residual of the forcing fit

  int dim() const { return static_cast<int>(y0.size()); }
  int n_basis() const { return static_cast<int>(basis_centers.size()); }
  Eigen::VectorXd forcing(double x) const;
};

struct DmpState {
  Eigen::VectorXd y;
  Eigen::VectorXd y_dot;
  double x = 1.0;  // phase in (0, 1]
  double t = 0.0;
};

DmpState initial_state(const DmpModel& model);

// Learns a DMP from one demonstration slice: tau = slice duration, y0/y_g
// from the endpoint samples, forcing-term weights by per-basis locally
// weighted least squares on the finite-difference forcing targets. Throws
// kDegenerateSegment for slices shorter than 10 samples or with empty span.
DmpModel fit_dmp(const Demonstration& segment_slice, const DmpConfig& config = {});

// Sets goal_offset = delta * (unit terminal velocity direction of the slice),
// used for segments that end with a contact change.
void apply_contact_offset(DmpModel* model, const Demonstration& segment_slice,
                          double delta);

// One semi-implicit Euler step. y_measured feeds the phase slowdown; the
// returned vector is the commanded acceleration y_r''.
std::pair<DmpState, Eigen::VectorXd> step_dmp(const DmpModel& model,
                                              const DmpState& state, double dt,
                                              const Eigen::VectorXd& y_measured);

std::string dmp_to_json(const DmpModel& model);
DmpModel dmp_from_json(const std::string& text);

}  // namespace segflow

#endif  // SEGFLOW_DMP_HPP_
