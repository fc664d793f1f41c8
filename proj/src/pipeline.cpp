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

#include "segflow/pipeline.hpp"

#include <algorithm>

namespace segflow {

SegmentationResult run_segmentation(const Demonstration& demo,
                                    const RunConfig& config) {
  SegmentationResult result;

  EmConfig em;
  em.reg_eps = config.gmm.reg_eps;
  em.max_iter = config.gmm.max_iter;
  em.tol = config.gmm.tol;
  em.n_threads = config.gmm.n_threads;
  result.gmm = select_model(demo, config.gmm.k_min, config.gmm.k_max, em);
  if (result.gmm.size() >= 2)
    result.initial = initial_points(candidate_intervals(result.gmm));

  const NoiseConfig noise =
      estimate_noise(demo, config.kalman.r2_window_s, config.kalman.r1_scale,
                     config.kalman.r2_ridge);
  result.nis = nis_series(demo, noise, {config.normalizer()});
  result.force_points = detect_peaks(result.nis, config.detector.threshold,
                                     config.detector.min_separation_s);

  // Force points too close to the span edges cannot become interior
  // boundaries; one near the end marks a demonstration that stopped in
  // contact.
  const double edge = config.fusion.edge_margin_s;
  const double t0 = demo.t_start(), t1 = demo.t_end();
  bool final_contact = false;
  std::vector<SegmentationPoint> usable;
  for (const auto& p : result.force_points) {
    if (p.t >= t1 - edge) {
      final_contact = true;
    } else if (p.t > t0 + edge) {
      usable.push_back(p);
    }
  }

  const double dedupe_dt = demo.rate_hz > 0 ? 1.0 / demo.rate_hz : 1.0 / 250.0;
  auto merged = merge_points(result.initial, usable,
                             config.fusion.proximity_s, dedupe_dt);
  result.plan = build_segments(demo, merged, final_contact);

  const IdleConfig idle{config.fusion.idle_speed,
                        config.fusion.idle_quat_speed};
  for (auto& seg : result.plan.segments)
    seg.idle = classify_idle(demo, seg, idle);

  result.plan = assign_contact_thresholds(
      std::move(result.plan), demo, config.fusion.contact_margin,
      config.fusion.contact_window_s, config.fusion.contact_floor_n);
  for (auto& seg : result.plan.segments)
    seg.label = suggest_label(demo, seg);
  return result;
}

std::vector<DmpModel> fit_segment_models(const Demonstration& demo,
                                         const SegmentPlan& plan,
                                         const RunConfig& config) {
  DmpConfig dmp;
  dmp.alpha = config.dmp.alpha;
  dmp.n_basis = config.dmp.n_basis;
  dmp.alpha_x = config.dmp.alpha_x;
  dmp.k_c = config.dmp.k_c;

  std::vector<DmpModel> models;
  for (const auto& seg : plan.segments) {
    if (seg.idle) continue;
    Demonstration slice = demo.slice(seg.t_start, seg.t_end);
    DmpModel model = fit_dmp(slice, dmp);
    if (seg.end_condition.kind == EndConditionKind::kContactChange)
      apply_contact_offset(&model, slice, config.dmp.goal_offset_m);
    models.push_back(std::move(model));
  }
  return models;
}

}  // namespace segflow
