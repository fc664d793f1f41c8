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

#ifndef SEGFLOW_CONFIG_HPP_
#define SEGFLOW_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "segflow/kalman.hpp"
#include "segflow/replay.hpp"

namespace segflow {

// All pipeline tunables. File form is JSON with flat dotted keys
// ("gmm.k_max": 8); unknown keys are rejected.
struct RunConfig {
  struct {
    int k_min = 2;
    int k_max = 8;
    double reg_eps = 1e-6;
    int max_iter = 200;
    double tol = 1e-6;
    int n_threads = 0;
  } gmm;

  struct {
    double r1_scale = 1e-4;
    double r2_window_s = 0.5;
    double r2_ridge = 1e-8;
    std::string normalizer = "p";  // "p" or "p_plus_r2"
  } kalman;

  struct {
    double threshold = 5.0;
    double min_separation_s = 0.5;
  } detector;

  struct {
    double proximity_s = 0.5;
    double edge_margin_s = 0.25;
    double idle_speed = 0.005;
    double idle_quat_speed = 0.01;
    double contact_margin = 0.5;
    double contact_window_s = 0.1;
    double contact_floor_n = 0.5;
  } fusion;

  struct {
    double alpha = 25.0;
    int n_basis = 20;
    double alpha_x = 8.0;
    double k_c = 100.0;
    double goal_offset_m = 0.005;
    double goal_tol = 1e-3;
    double vel_tol = 1e-2;
  } dmp;

  struct {
    double rate_hz = 250.0;
    std::vector<Wall> walls;
  } sim;

  std::uint64_t seed = 0;

  NisNormalizer normalizer() const;
};

// Parses and validates a flat dotted-key JSON document; unknown keys and
// out-of-range values raise kInvalidConfig.
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

// Applies "key=value" overrides (same dotted keys as the file form).
void apply_override(RunConfig* config, const std::string& assignment);

}  // namespace segflow

#endif  // SEGFLOW_CONFIG_HPP_
