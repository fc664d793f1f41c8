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

#include "segflow/replay.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace segflow {

using json = nlohmann::ordered_json;

const char* event_type_name(EventType type) {
  switch (type) {
    case EventType::kCompleted: return "completed";
    case EventType::kTimeout: return "timeout";
    case EventType::kSkipped: return "skipped";
  }
  return "unknown";
}

bool ExecutionTrace::all_completed() const {
  for (const auto& e : events)
    if (e.type == EventType::kTimeout) return false;
  return !events.empty();
}

bool ExecutionTrace::has_timeout() const {
  for (const auto& e : events)
    if (e.type == EventType::kTimeout) return true;
  return false;
}

namespace {

Eigen::VectorXd wall_wrench(const SimConfig& sim, const Eigen::VectorXd& y) {
  Eigen::VectorXd wrench = Eigen::VectorXd::Zero(sim.translation_channels.size());
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < sim.translation_channels.size() && i < 3; ++i)
    pos(i) = y(sim.translation_channels[i]);
  for (const auto& wall : sim.walls) {
    const double depth = wall.normal.normalized().dot(pos - wall.point);
    if (depth < 0.0) {
      const Eigen::Vector3d f = -wall.stiffness * depth * wall.normal.normalized();
      for (size_t i = 0; i < sim.translation_channels.size() && i < 3; ++i)
        wrench(i) += f(i);
    }
  }
  return wrench;
}

}  // namespace

ExecutionTrace execute_sequence(const SegmentPlan& plan,
                                const std::vector<DmpModel>& models,
                                const SimConfig& sim, const ExecConfig& exec) {
  size_t n_active = 0;
  for (const auto& s : plan.segments)
    if (!s.idle) ++n_active;
  if (models.size() != n_active)
    throw Error(ErrorCode::kModelCountMismatch,
                "have " + std::to_string(models.size()) + " models for " +
                    std::to_string(n_active) + " non-idle segments");

  SimConfig sim_cfg = sim;
  ExecutionTrace trace;
  if (models.empty()) return trace;

  const double dt = 1.0 / sim.rate_hz;
  Eigen::VectorXd plant_y = models.front().y0;
  Eigen::VectorXd plant_v = Eigen::VectorXd::Zero(plant_y.size());
  if (sim_cfg.translation_channels.empty()) {
    const int n = static_cast<int>(plant_y.size());
    for (int c = 0; c < n && c < 3; ++c)
      sim_cfg.translation_channels.push_back(c);
  }

  double t_global = 0.0;
  size_t model_idx = 0;
  for (size_t si = 0; si < plan.segments.size(); ++si) {
    const Segment& seg = plan.segments[si];
    if (seg.idle) {
      trace.events.push_back({static_cast<int>(si), EventType::kSkipped,
                              t_global, "idle segment omitted"});
      continue;
    }
    const DmpModel& model = models[model_idx++];
    DmpState state{plant_y, plant_v, 1.0, 0.0};
    const double t_max = exec.timeout_factor * model.tau;
    bool completed = false;

    while (state.t <= t_max) {
      auto [next, y_r_ddot] = step_dmp(model, state, dt, plant_y);
      // Plant: double integrator tracking the commanded acceleration.
      plant_v += dt * y_r_ddot;
      plant_y += dt * plant_v;
      state = next;
      t_global += dt;

      Eigen::VectorXd wrench = wall_wrench(sim_cfg, plant_y);
      trace.steps.push_back({t_global, plant_y, plant_v, y_r_ddot, state.x,
                             wrench, static_cast<int>(si)});

      if (seg.end_condition.kind == EndConditionKind::kContactChange) {
        if (wrench.norm() > seg.end_condition.force_threshold) {
          trace.events.push_back({static_cast<int>(si), EventType::kCompleted,
                                  t_global, "contact threshold reached"});
          completed = true;
          break;
        }
      } else {
        if ((plant_y - model.y_g).norm() < exec.goal_tol &&
            plant_v.norm() < exec.vel_tol) {
          trace.events.push_back({static_cast<int>(si), EventType::kCompleted,
                                  t_global, "goal reached"});
          completed = true;
          break;
        }
      }
    }
    if (!completed) {
      trace.events.push_back({static_cast<int>(si), EventType::kTimeout,
                              t_global, "no completion within timeout"});
      break;  // abort the remaining sequence
    }
  }
  return trace;
}

std::string trace_to_json(const ExecutionTrace& trace) {
  json root;
  root["events"] = json::array();
  for (const auto& e : trace.events) {
    root["events"].push_back({{"segment", e.segment_index},
                              {"type", event_type_name(e.type)},
                              {"t", e.t},
                              {"detail", e.detail}});
  }
  root["n_steps"] = trace.steps.size();
  root["all_completed"] = trace.all_completed();
  return root.dump(2);
}

void save_trace_csv(const ExecutionTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  if (trace.steps.empty()) {
    out << "t,segment,x\n";
    return;
  }
  const auto& first = trace.steps.front();
  out << "t,segment,x";
  for (Eigen::Index c = 0; c < first.y.size(); ++c) out << ",y" << c;
  for (Eigen::Index c = 0; c < first.y_dot.size(); ++c) out << ",yd" << c;
  for (Eigen::Index c = 0; c < first.y_r_ddot.size(); ++c) out << ",ydd" << c;
  for (Eigen::Index c = 0; c < first.wrench.size(); ++c) out << ",w" << c;
  out << ",wrench_norm\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    out << buf;
  };
  for (const auto& s : trace.steps) {
    put(s.t);
    out << "," << s.active_segment << ",";
    put(s.x);
    for (Eigen::Index c = 0; c < s.y.size(); ++c) { out << ","; put(s.y(c)); }
    for (Eigen::Index c = 0; c < s.y_dot.size(); ++c) { out << ","; put(s.y_dot(c)); }
    for (Eigen::Index c = 0; c < s.y_r_ddot.size(); ++c) { out << ","; put(s.y_r_ddot(c)); }
    for (Eigen::Index c = 0; c < s.wrench.size(); ++c) { out << ","; put(s.wrench(c)); }
    out << ",";
    put(s.wrench.norm());
    out << "\n";
  }
}

}  // namespace segflow
