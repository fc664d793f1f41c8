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

#ifndef SEGFLOW_SEGMENTATION_POINT_HPP_
#define SEGFLOW_SEGMENTATION_POINT_HPP_

#include <string>

namespace segflow {

enum class PointSource { kPosition, kForce, kFused };

const char* point_source_name(PointSource source);
PointSource point_source_from_name(const std::string& name);

// A timestamp splitting a demonstration into consecutive phases. `strength`
// is the normalized-error value for force-derived points and 0 for
// position-only points.
struct SegmentationPoint {
  double t = 0.0;
  PointSource source = PointSource::kPosition;
  double strength = 0.0;
};

}  // namespace segflow

#endif  // SEGFLOW_SEGMENTATION_POINT_HPP_
