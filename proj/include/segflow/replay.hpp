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

#ifndef SEGFLOW_REPLAY_HPP_
#define SEGFLOW_REPLAY_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "segflow/dmp.hpp"
#include "segflow/fusion.hpp"

namespace segflow {

// Planar virtual wall in the translation subspace. Free space is the side the
// normal points into; penetration depth d < 0 produces the spring force
// -stiffness * d along the normal.
struct Wall {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double stiffness = 1e4;  // N/m
};

struct SimConfig {
  double rate_hz = 250.0;
  std::vector<Wall> walls;
  // Indices of the q channels the walls act on; defaults to the channels
  // tagged "m" (at most three).
  std::vector<int> translation_channels;
};

struct ExecConfig {
  double goal_tol = 1e-3;       // m
  double vel_tol = 1e-2;        // m/s
  double timeout_factor = 5.0;  // per-segment budget, t_max = factor * tau
};

enum class EventType { kCompleted, kTimeout, kSkipped };

const char* event_type_name(EventType type);

struct TraceEvent {
  int segment_index = 0;
  EventType type = EventType::kCompleted;
  double t = 0.0;
  std::string detail;
};

struct TraceStep {
  double t = 0.0;
  Eigen::VectorXd y;
  Eigen::VectorXd y_dot;
  Eigen::VectorXd y_r_ddot;
  double x = 1.0;
  Eigen::VectorXd wrench;
  int active_segment = -1;
};

struct ExecutionTrace {
  std::vector<TraceStep> steps;
  std::vector<TraceEvent> events;

  bool all_completed() const;
  bool has_timeout() const;
};

// Executes the plan's segments in order on a double integrator driven by the
// commanded acceleration. Idle segments are skipped; one model is expected
// per non-idle segment (kModelCountMismatch otherwise). Goal-reached segments
// complete on |y - y_g| < goal_tol and |y'| < vel_tol; contact-change
// segments complete when the simulated wrench magnitude exceeds the segment
// threshold. A segment exceeding timeout_factor * tau emits a timeout event
// and aborts the remaining sequence.
ExecutionTrace execute_sequence(const SegmentPlan& plan,
                                const std::vector<DmpModel>& models,
                                const SimConfig& sim, const ExecConfig& exec);

std::string trace_to_json(const ExecutionTrace& trace);
void save_trace_csv(const ExecutionTrace& trace, const std::string& path);

}  // namespace segflow

#endif  // SEGFLOW_REPLAY_HPP_
