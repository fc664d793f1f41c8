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

#ifndef SEGFLOW_SYNTH_HPP_
#define SEGFLOW_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "segflow/demonstration.hpp"

namespace segflow {

enum class PhaseKind { kMoveLine, kRotate, kIdle, kMoveUntilWall };

// One scripted phase. MoveLine/MoveUntilWall act on the translation channels,
// Rotate on the quaternion channels. MoveUntilWall derives its duration from
// wall_distance / speed and injects `contact_wrench` (default: -10 N along
// the movement direction) at the instant the wall is reached. Any phase may
// set contact_on_entry to inject `contact_wrench` at its start instead.
struct Phase {
  PhaseKind kind = PhaseKind::kIdle;
  double duration = 0.0;          // derived for kMoveUntilWall
  Eigen::VectorXd direction;      // unit norm, translation channels
  double speed = 0.0;             // m/s
  double wall_distance = 0.0;     // m
  Eigen::VectorXd rates;          // quat channels, 1/s
  Eigen::VectorXd contact_wrench; // wrench channels; empty = default
  bool contact_on_entry = false;
};

struct PhaseScript {
  std::vector<Phase> phases;
  std::vector<std::string> translation_names;
  std::vector<std::string> quaternion_names;
  std::vector<std::string> wrench_names;
  double rate_hz = 250.0;
  double sigma_pos = 0.0;     // m, translation channels
  double sigma_quat = 0.0;    // quaternion channels
  double sigma_wrench = 0.0;  // N
  std::uint64_t seed = 0;
};

// Scripted truth: interior phase boundaries (cumulative durations, exact),
// the sampled instants where injected wrench first becomes nonzero, and one
// idle flag per phase.
struct GroundTruth {
  std::vector<double> boundary_times;
  std::vector<double> contact_times;
  std::vector<bool> idle_flags;
};

// Deterministic generation: piecewise trajectory with C0 joins, i.i.d.
// Gaussian noise from the script seed, wrench steps ramped over two samples
// at contact instants. Throws kInvalidScript.
std::pair<Demonstration, GroundTruth> generate(const PhaseScript& script);

PhaseScript script_from_json(const std::string& text);
std::string script_to_json(const PhaseScript& script);
std::string ground_truth_to_json(const GroundTruth& truth);

// The two bundled benchmark scripts (also shipped under scripts/).
PhaseScript setup1_script(std::uint64_t seed);
PhaseScript setup2_script(std::uint64_t seed);

}  // namespace segflow

#endif  // SEGFLOW_SYNTH_HPP_
