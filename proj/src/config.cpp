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

#include "segflow/config.hpp"

#include <functional>
#include <map>

#include <nlohmann/json.hpp>

namespace segflow {

using json = nlohmann::ordered_json;

NisNormalizer RunConfig::normalizer() const {
  return kalman.normalizer == "p_plus_r2" ? NisNormalizer::kPPlusR2
                                          : NisNormalizer::kP;
}

namespace {

using Setter = std::function<void(RunConfig*, const json&)>;

#define SCALAR(key, field, type)                                       \
  {key, [](RunConfig* c, const json& v) { c->field = v.get<type>(); }}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      SCALAR("gmm.k_min", gmm.k_min, int),
      SCALAR("gmm.k_max", gmm.k_max, int),
      SCALAR("gmm.reg_eps", gmm.reg_eps, double),
      SCALAR("gmm.max_iter", gmm.max_iter, int),
      SCALAR("gmm.tol", gmm.tol, double),
      SCALAR("gmm.n_threads", gmm.n_threads, int),
      SCALAR("kalman.r1_scale", kalman.r1_scale, double),
      SCALAR("kalman.r2_window_s", kalman.r2_window_s, double),
      SCALAR("kalman.r2_ridge", kalman.r2_ridge, double),
      SCALAR("kalman.normalizer", kalman.normalizer, std::string),
      SCALAR("detector.threshold", detector.threshold, double),
      SCALAR("detector.min_separation_s", detector.min_separation_s, double),
      SCALAR("fusion.proximity_s", fusion.proximity_s, double),
      SCALAR("fusion.edge_margin_s", fusion.edge_margin_s, double),
      SCALAR("fusion.idle_speed", fusion.idle_speed, double),
      SCALAR("fusion.idle_quat_speed", fusion.idle_quat_speed, double),
      SCALAR("fusion.contact_margin", fusion.contact_margin, double),
      SCALAR("fusion.contact_window_s", fusion.contact_window_s, double),
      SCALAR("fusion.contact_floor_n", fusion.contact_floor_n, double),
      SCALAR("dmp.alpha", dmp.alpha, double),
      SCALAR("dmp.n_basis", dmp.n_basis, int),
      SCALAR("dmp.alpha_x", dmp.alpha_x, double),
      SCALAR("dmp.k_c", dmp.k_c, double),
      SCALAR("dmp.goal_offset_m", dmp.goal_offset_m, double),
      SCALAR("dmp.goal_tol", dmp.goal_tol, double),
      SCALAR("dmp.vel_tol", dmp.vel_tol, double),
      SCALAR("sim.rate_hz", sim.rate_hz, double),
      SCALAR("seed", seed, std::uint64_t),
  };
  return table;
}

#undef SCALAR

Eigen::Vector3d vec3_of(const json& a, const std::string& key) {
  if (!a.is_array() || a.size() != 3)
    throw Error(ErrorCode::kInvalidConfig, key + " must be a 3-vector");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

std::vector<Wall> walls_of(const json& v) {
  if (!v.is_array())
    throw Error(ErrorCode::kInvalidConfig, "sim.walls must be an array");
  std::vector<Wall> walls;
  for (const auto& jw : v) {
    Wall w;
    w.point = vec3_of(jw.at("point"), "wall point");
    w.normal = vec3_of(jw.at("normal"), "wall normal");
    if (w.normal.norm() < 1e-12)
      throw Error(ErrorCode::kInvalidConfig, "wall normal must be nonzero");
    w.stiffness = jw.value("stiffness", 1e4);
    if (w.stiffness <= 0)
      throw Error(ErrorCode::kInvalidConfig, "wall stiffness must be positive");
    walls.push_back(w);
  }
  return walls;
}

void set_key(RunConfig* config, const std::string& key, const json& value) {
  if (key == "sim.walls") {
    config->sim.walls = walls_of(value);
    return;
  }
  auto it = setters().find(key);
  if (it == setters().end())
    throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
  try {
    it->second(config, value);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                "bad value for '" + key + "': " + e.what());
  }
}

void check_ranges(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
  };
  require(c.gmm.k_min >= 1, "gmm.k_min must be >= 1");
  require(c.gmm.k_max >= c.gmm.k_min, "gmm.k_max must be >= gmm.k_min");
  require(c.gmm.reg_eps > 0, "gmm.reg_eps must be positive");
  require(c.gmm.max_iter >= 1, "gmm.max_iter must be >= 1");
  require(c.gmm.tol > 0, "gmm.tol must be positive");
  require(c.gmm.n_threads >= 0, "gmm.n_threads must be >= 0");
  require(c.kalman.r1_scale > 0, "kalman.r1_scale must be positive");
  require(c.kalman.r2_window_s > 0, "kalman.r2_window_s must be positive");
  require(c.kalman.r2_ridge >= 0, "kalman.r2_ridge must be >= 0");
  require(c.kalman.normalizer == "p" || c.kalman.normalizer == "p_plus_r2",
          "kalman.normalizer must be 'p' or 'p_plus_r2'");
  require(c.detector.threshold > 0, "detector.threshold must be positive");
  require(c.detector.min_separation_s >= 0,
          "detector.min_separation_s must be >= 0");
  require(c.fusion.proximity_s > 0, "fusion.proximity_s must be positive");
  require(c.fusion.edge_margin_s >= 0, "fusion.edge_margin_s must be >= 0");
  require(c.fusion.idle_speed > 0, "fusion.idle_speed must be positive");
  require(c.fusion.idle_quat_speed > 0,
          "fusion.idle_quat_speed must be positive");
  require(c.fusion.contact_margin > 0, "fusion.contact_margin must be positive");
  require(c.fusion.contact_window_s > 0,
          "fusion.contact_window_s must be positive");
  require(c.fusion.contact_floor_n > 0,
          "fusion.contact_floor_n must be positive");
  require(c.dmp.alpha > 0, "dmp.alpha must be positive");
  require(c.dmp.n_basis >= 2, "dmp.n_basis must be >= 2");
  require(c.dmp.alpha_x > 0, "dmp.alpha_x must be positive");
  require(c.dmp.k_c >= 0, "dmp.k_c must be >= 0");
  require(c.dmp.goal_offset_m >= 0, "dmp.goal_offset_m must be >= 0");
  require(c.dmp.goal_tol > 0, "dmp.goal_tol must be positive");
  require(c.dmp.vel_tol > 0, "dmp.vel_tol must be positive");
  require(c.sim.rate_hz > 0, "sim.rate_hz must be positive");
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("bad config JSON: ") + e.what());
  }
  if (!root.is_object())
    throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
  RunConfig config;
  for (const auto& [key, value] : root.items()) set_key(&config, key, value);
  check_ranges(config);
  return config;
}

std::string config_to_json(const RunConfig& c) {
  json root;
  root["gmm.k_min"] = c.gmm.k_min;
  root["gmm.k_max"] = c.gmm.k_max;
  root["gmm.reg_eps"] = c.gmm.reg_eps;
  root["gmm.max_iter"] = c.gmm.max_iter;
  root["gmm.tol"] = c.gmm.tol;
  root["gmm.n_threads"] = c.gmm.n_threads;
  root["kalman.r1_scale"] = c.kalman.r1_scale;
  root["kalman.r2_window_s"] = c.kalman.r2_window_s;
  root["kalman.r2_ridge"] = c.kalman.r2_ridge;
  root["kalman.normalizer"] = c.kalman.normalizer;
  root["detector.threshold"] = c.detector.threshold;
  root["detector.min_separation_s"] = c.detector.min_separation_s;
  root["fusion.proximity_s"] = c.fusion.proximity_s;
  root["fusion.edge_margin_s"] = c.fusion.edge_margin_s;
  root["fusion.idle_speed"] = c.fusion.idle_speed;
  root["fusion.idle_quat_speed"] = c.fusion.idle_quat_speed;
  root["fusion.contact_margin"] = c.fusion.contact_margin;
  root["fusion.contact_window_s"] = c.fusion.contact_window_s;
  root["fusion.contact_floor_n"] = c.fusion.contact_floor_n;
  root["dmp.alpha"] = c.dmp.alpha;
  root["dmp.n_basis"] = c.dmp.n_basis;
  root["dmp.alpha_x"] = c.dmp.alpha_x;
  root["dmp.k_c"] = c.dmp.k_c;
  root["dmp.goal_offset_m"] = c.dmp.goal_offset_m;
  root["dmp.goal_tol"] = c.dmp.goal_tol;
  root["dmp.vel_tol"] = c.dmp.vel_tol;
  root["sim.rate_hz"] = c.sim.rate_hz;
  json walls = json::array();
  for (const auto& w : c.sim.walls) {
    walls.push_back({{"point", {w.point.x(), w.point.y(), w.point.z()}},
                     {"normal", {w.normal.x(), w.normal.y(), w.normal.z()}},
                     {"stiffness", w.stiffness}});
  }
  root["sim.walls"] = walls;
  root["seed"] = c.seed;
  return root.dump(2);
}

void apply_override(RunConfig* config, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw Error(ErrorCode::kInvalidConfig,
                "override must be key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // bare strings allowed without quotes
  }
  set_key(config, key, value);
  check_ranges(*config);
}

}  // namespace segflow
