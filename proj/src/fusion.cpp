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

#include "segflow/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace segflow {

using json = nlohmann::ordered_json;

std::vector<SegmentationPoint> merge_points(
    const std::vector<SegmentationPoint>& initial,
    const std::vector<SegmentationPoint>& force_pts, double proximity,
    double dedupe_dt) {
  if (proximity <= 0)
    throw Error(ErrorCode::kInvalidConfig, "proximity must be positive");

  std::vector<SegmentationPoint> merged = initial;
  std::vector<char> consumed(initial.size(), 0);

  for (const auto& fp : force_pts) {
    int nearest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < initial.size(); ++i) {
      if (consumed[i]) continue;
      const double d = std::abs(initial[i].t - fp.t);
      if (d <= proximity && d < best) {
        best = d;
        nearest = static_cast<int>(i);
      }
    }
    if (nearest >= 0) {
      consumed[nearest] = 1;
      merged[nearest] = {fp.t, PointSource::kFused, fp.strength};
    } else {
      merged.push_back(fp);
    }
  }

  std::sort(merged.begin(), merged.end(),
            [](const auto& a, const auto& b) { return a.t < b.t; });

  // Collapse near-coincident points to the stronger one.
  std::vector<SegmentationPoint> out;
  for (const auto& p : merged) {
    if (!out.empty() && p.t - out.back().t < dedupe_dt) {
      if (p.strength > out.back().strength) out.back() = p;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

SegmentPlan build_segments(const Demonstration& demo,
                           const std::vector<SegmentationPoint>& points,
                           bool final_contact) {
  SegmentPlan plan;
  plan.t_start = demo.t_start();
  plan.t_end = demo.t_end();
  plan.points = points;
  std::sort(plan.points.begin(), plan.points.end(),
            [](const auto& a, const auto& b) { return a.t < b.t; });

  for (const auto& p : plan.points) {
    if (!(p.t > plan.t_start && p.t < plan.t_end))
      throw Error(ErrorCode::kPointOutOfSpan,
                  "segmentation point at t=" + std::to_string(p.t) +
                      " outside (" + std::to_string(plan.t_start) + ", " +
                      std::to_string(plan.t_end) + ")");
  }

  double left = plan.t_start;
  for (const auto& p : plan.points) {
    Segment seg;
    seg.t_start = left;
    seg.t_end = p.t;
    if (p.source == PointSource::kForce || p.source == PointSource::kFused)
      seg.end_condition = {EndConditionKind::kContactChange, 0.5};
    else
      seg.end_condition = {EndConditionKind::kGoalReached, 0.0};
    plan.segments.push_back(seg);
    left = p.t;
  }
  Segment last;
  last.t_start = left;
  last.t_end = plan.t_end;
  last.end_condition = final_contact
                           ? EndCondition{EndConditionKind::kContactChange, 0.5}
                           : EndCondition{EndConditionKind::kGoalReached, 0.0};
  plan.segments.push_back(last);
  return plan;
}

namespace {

// Mean finite-difference speed of the listed channels over [t_start, t_end].
double mean_speed(const Demonstration& demo, const std::vector<int>& channels,
                  double t_start, double t_end) {
  if (channels.empty()) return 0.0;
  double sum = 0.0;
  long count = 0;
  for (Eigen::Index i = 1; i < demo.size(); ++i) {
    if (demo.t(i) < t_start || demo.t(i) > t_end) continue;
    const double dt = demo.t(i) - demo.t(i - 1);
    if (dt <= 0) continue;
    double norm2 = 0.0;
    for (int c : channels) {
      const double d = (demo.q(i, c) - demo.q(i - 1, c)) / dt;
      norm2 += d * d;
    }
    sum += std::sqrt(norm2);
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + hi);
  }
  return hi;
}

double windowed_median_magnitude(const Demonstration& demo, double t_from,
                                 double t_to) {
  std::vector<double> mags;
  for (Eigen::Index i = 0; i < demo.size(); ++i) {
    if (demo.t(i) >= t_from && demo.t(i) <= t_to)
      mags.push_back(demo.w.row(i).norm());
  }
  return median(std::move(mags));
}

}  // namespace

bool classify_idle(const Demonstration& demo, const Segment& segment,
                   const IdleConfig& config) {
  const auto translation = demo.channels_with_unit("m");
  const auto quat = demo.channels_with_unit("quat");
  const double v_trans =
      mean_speed(demo, translation, segment.t_start, segment.t_end);
  const double v_quat = mean_speed(demo, quat, segment.t_start, segment.t_end);
  return v_trans < config.translation_speed && v_quat < config.quat_speed;
}

SegmentPlan assign_contact_thresholds(SegmentPlan plan,
                                      const Demonstration& demo, double margin,
                                      double window_s, double floor_n) {
  for (auto& seg : plan.segments) {
    if (seg.end_condition.kind != EndConditionKind::kContactChange) continue;
    const double tb = seg.t_end;
    const double before =
        windowed_median_magnitude(demo, tb - window_s, tb);
    const double after = windowed_median_magnitude(demo, tb, tb + window_s);
    const double jump = std::abs(after - before);
    seg.end_condition.force_threshold = std::max(margin * jump, floor_n);
  }
  return plan;
}

std::string suggest_label(const Demonstration& demo, const Segment& segment) {
  if (segment.idle) return "idle";
  // Dominant configuration channel by net displacement.
  Eigen::Index i0 = 0, i1 = demo.size() - 1;
  while (i0 < demo.size() - 1 && demo.t(i0) < segment.t_start) ++i0;
  while (i1 > 0 && demo.t(i1) > segment.t_end) --i1;
  if (i1 <= i0) return "segment";
  std::string label = "move";
  double best = 0.0;
  int best_c = -1;
  for (Eigen::Index c = 0; c < demo.n_config(); ++c) {
    const double d = demo.q(i1, c) - demo.q(i0, c);
    if (std::abs(d) > std::abs(best)) {
      best = d;
      best_c = static_cast<int>(c);
    }
  }
  if (best_c >= 0) {
    const std::string& name = demo.q_names.empty()
                                  ? std::to_string(best_c)
                                  : demo.q_names[best_c];
    label += std::string(" ") + (best >= 0 ? "+" : "-") + name;
    if (demo.q_units[best_c] == "quat") label = "rotate " + label.substr(5);
  }
  if (segment.end_condition.kind == EndConditionKind::kContactChange)
    label += " until contact";
  return label;
}

std::string plan_to_json(const SegmentPlan& plan) {
  json root;
  root["span"] = {plan.t_start, plan.t_end};
  root["points"] = json::array();
  for (const auto& p : plan.points) {
    root["points"].push_back({{"t", p.t},
                              {"source", point_source_name(p.source)},
                              {"strength", p.strength}});
  }
  root["segments"] = json::array();
  for (const auto& s : plan.segments) {
    json js;
    js["t_start"] = s.t_start;
    js["t_end"] = s.t_end;
    js["end_condition"] =
        s.end_condition.kind == EndConditionKind::kContactChange
            ? "contact_change"
            : "goal_reached";
    if (s.end_condition.kind == EndConditionKind::kContactChange)
      js["threshold"] = s.end_condition.force_threshold;
    js["idle"] = s.idle;
    js["label"] = s.label;
    root["segments"].push_back(js);
  }
  return root.dump(2);
}

SegmentPlan plan_from_json(const std::string& text) {
  json root = json::parse(text);
  SegmentPlan plan;
  plan.t_start = root.at("span")[0].get<double>();
  plan.t_end = root.at("span")[1].get<double>();
  for (const auto& jp : root.at("points")) {
    plan.points.push_back({jp.at("t").get<double>(),
                           point_source_from_name(jp.at("source")),
                           jp.at("strength").get<double>()});
  }
  for (const auto& js : root.at("segments")) {
    Segment s;
    s.t_start = js.at("t_start").get<double>();
    s.t_end = js.at("t_end").get<double>();
    const std::string kind = js.at("end_condition").get<std::string>();
    if (kind == "contact_change")
      s.end_condition = {EndConditionKind::kContactChange,
                         js.at("threshold").get<double>()};
    else if (kind == "goal_reached")
      s.end_condition = {EndConditionKind::kGoalReached, 0.0};
    else
      throw Error(ErrorCode::kInvalidConfig,
                  "unknown end condition '" + kind + "'");
    s.idle = js.at("idle").get<bool>();
    s.label = js.value("label", "");
    plan.segments.push_back(s);
  }
  return plan;
}

}  // namespace segflow
