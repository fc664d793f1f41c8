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

#ifndef SEGFLOW_PIPELINE_HPP_
#define SEGFLOW_PIPELINE_HPP_

#include <vector>

#include "segflow/config.hpp"
#include "segflow/dmp.hpp"
#include "segflow/fusion.hpp"
#include "segflow/gmm.hpp"
#include "segflow/kalman.hpp"

namespace segflow {

struct SegmentationResult {
  Gmm gmm;
  NisSeries nis;
  std::vector<SegmentationPoint> initial;
  std::vector<SegmentationPoint> force_points;
  SegmentPlan plan;
};

// The full segmentation chain: GMM model selection -> candidate intervals ->
// initial points; Kalman filter -> normalized-error peaks; fusion -> segment
// plan with idle flags, contact thresholds and labels. Force points within
// fusion.edge_margin_s of the span edges are not used as interior boundaries;
// one near the end marks the final segment as contact-terminated instead.
SegmentationResult run_segmentation(const Demonstration& demo,
                                    const RunConfig& config);

// Fits one DMP per non-idle segment (in order), applying the contact goal
// offset to contact-change segments.
std::vector<DmpModel> fit_segment_models(const Demonstration& demo,
                                         const SegmentPlan& plan,
                                         const RunConfig& config);

}  // namespace segflow

#endif  // SEGFLOW_PIPELINE_HPP_
