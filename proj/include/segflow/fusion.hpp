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

#ifndef SEGFLOW_FUSION_HPP_
#define SEGFLOW_FUSION_HPP_

#include <string>
#include <vector>

#include "segflow/demonstration.hpp"
#include "segflow/segmentation_point.hpp"

namespace segflow {

enum class EndConditionKind { kGoalReached, kContactChange };

struct EndCondition {
  EndConditionKind kind = EndConditionKind::kGoalReached;
  // Execution-time wrench-magnitude threshold; meaningful for kContactChange.
  double force_threshold = 0.0;
};

struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  EndCondition end_condition;
  bool idle = false;
  std::string label;
};

// Final segmentation of one demonstration: segments tile [t_start, t_end]
// with the interior boundaries listed in `points`.
struct SegmentPlan {
  std::vector<Segment> segments;
  std::vector<SegmentationPoint> points;
  double t_start = 0.0;
  double t_end = 0.0;
};

// Applies the two fusion rules to the position-based initial points: a force
// point replaces the nearest unconsumed initial point within `proximity`
// (becoming a fused point), otherwise it is inserted as a new point. The
// result is sorted; points closer than dedupe_dt collapse to the stronger.
std::vector<SegmentationPoint> merge_points(
    const std::vector<SegmentationPoint>& initial,
    const std::vector<SegmentationPoint>& force_pts, double proximity,
    double dedupe_dt = 1.0 / 250.0);

// k interior points yield k+1 segments. A segment ends with kContactChange
// iff its right boundary is a force or fused point. The final segment ends at
// the demonstration end; it is kContactChange only when `final_contact` marks
// a demonstration that terminated in contact. Throws kPointOutOfSpan.
SegmentPlan build_segments(const Demonstration& demo,
                           const std::vector<SegmentationPoint>& points,
                           bool final_contact = false);

struct IdleConfig {
  double translation_speed = 0.005;  // m/s
  double quat_speed = 0.01;          // 1/s
};

// True iff the mean finite-difference speed over the segment stays below the
// per-unit-group thresholds.
bool classify_idle(const Demonstration& demo, const Segment& segment,
                   const IdleConfig& config = {});

// For each contact-change segment, sets the execution threshold to
// margin * (wrench-magnitude jump across the boundary), measured with
// windowed medians, with a floor of floor_n newtons.
SegmentPlan assign_contact_thresholds(SegmentPlan plan,
                                      const Demonstration& demo, double margin,
                                      double window_s = 0.1,
                                      double floor_n = 0.5);

// Free-text heuristic label (dominant motion direction, idle, contact end).
std::string suggest_label(const Demonstration& demo, const Segment& segment);

std::string plan_to_json(const SegmentPlan& plan);
SegmentPlan plan_from_json(const std::string& text);

}  // namespace segflow

#endif  // SEGFLOW_FUSION_HPP_
