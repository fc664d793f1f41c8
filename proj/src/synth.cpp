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

#include "segflow/synth.hpp"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

namespace segflow {

using json = nlohmann::ordered_json;

namespace {

double phase_duration(const Phase& p) {
  if (p.kind == PhaseKind::kMoveUntilWall) {
    return p.speed > 0 ? p.wall_distance / p.speed : 0.0;
  }
  return p.duration;
}

void check_script(const PhaseScript& script) {
  if (script.phases.empty())
    throw Error(ErrorCode::kInvalidScript, "script has no phases");
  if (script.rate_hz <= 0)
    throw Error(ErrorCode::kInvalidScript, "rate_hz must be positive");
  if (script.translation_names.empty() && script.quaternion_names.empty())
    throw Error(ErrorCode::kInvalidScript, "script declares no channels");
  if (script.wrench_names.empty())
    throw Error(ErrorCode::kInvalidScript, "script declares no wrench channels");
  const auto n_trans = static_cast<Eigen::Index>(script.translation_names.size());
  const auto n_quat = static_cast<Eigen::Index>(script.quaternion_names.size());
  const auto n_wrench = static_cast<Eigen::Index>(script.wrench_names.size());
  for (size_t i = 0; i < script.phases.size(); ++i) {
    const Phase& p = script.phases[i];
    const std::string at = " (phase " + std::to_string(i) + ")";
    if (phase_duration(p) <= 0)
      throw Error(ErrorCode::kInvalidScript, "non-positive duration" + at);
    if (p.kind == PhaseKind::kMoveLine || p.kind == PhaseKind::kMoveUntilWall) {
      if (p.direction.size() != n_trans)
        throw Error(ErrorCode::kInvalidScript,
                    "direction size does not match translation channels" + at);
      if (std::abs(p.direction.norm() - 1.0) > 1e-6)
        throw Error(ErrorCode::kInvalidScript, "direction not unit norm" + at);
      if (p.speed <= 0)
        throw Error(ErrorCode::kInvalidScript, "non-positive speed" + at);
    }
    if (p.kind == PhaseKind::kRotate && p.rates.size() != n_quat)
      throw Error(ErrorCode::kInvalidScript,
                  "rates size does not match quaternion channels" + at);
    if (p.contact_wrench.size() != 0 && p.contact_wrench.size() != n_wrench)
      throw Error(ErrorCode::kInvalidScript,
                  "contact_wrench size does not match wrench channels" + at);
  }
}

}  // namespace

std::pair<Demonstration, GroundTruth> generate(const PhaseScript& script) {
  check_script(script);
  const Eigen::Index n_trans = script.translation_names.size();
  const Eigen::Index n_quat = script.quaternion_names.size();
  const Eigen::Index n_cfg = n_trans + n_quat;
  const Eigen::Index n_wrench = script.wrench_names.size();
  const double dt = 1.0 / script.rate_hz;

  double total = 0.0;
  for (const auto& p : script.phases) total += phase_duration(p);
  const Eigen::Index n = static_cast<Eigen::Index>(std::llround(total * script.rate_hz)) + 1;

  Demonstration demo;
  demo.t.resize(n);
  demo.q = Eigen::MatrixXd::Zero(n, n_cfg);
  demo.w = Eigen::MatrixXd::Zero(n, n_wrench);
  demo.rate_hz = script.rate_hz;
  demo.q_names = script.translation_names;
  demo.q_names.insert(demo.q_names.end(), script.quaternion_names.begin(),
                      script.quaternion_names.end());
  demo.w_names = script.wrench_names;
  for (Eigen::Index c = 0; c < n_trans; ++c) demo.q_units.push_back("m");
  for (Eigen::Index c = 0; c < n_quat; ++c) demo.q_units.push_back("quat");
  for (const auto& name : script.wrench_names)
    demo.w_units.push_back(infer_wrench_unit(name));
  for (Eigen::Index i = 0; i < n; ++i) demo.t(i) = static_cast<double>(i) * dt;

  GroundTruth truth;
  Eigen::VectorXd cursor = Eigen::VectorXd::Zero(n_cfg);
  double t_phase = 0.0;
  std::vector<std::pair<Eigen::Index, Eigen::VectorXd>> contact_steps;

  for (size_t pi = 0; pi < script.phases.size(); ++pi) {
    const Phase& p = script.phases[pi];
    const double dur = phase_duration(p);
    const Eigen::Index i0 =
        static_cast<Eigen::Index>(std::llround(t_phase * script.rate_hz));
    const Eigen::Index i1 = std::min<Eigen::Index>(
        static_cast<Eigen::Index>(std::llround((t_phase + dur) * script.rate_hz)),
        n - 1);

    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(n_cfg);
    if (p.kind == PhaseKind::kMoveLine || p.kind == PhaseKind::kMoveUntilWall)
      velocity.head(n_trans) = p.speed * p.direction;
    else if (p.kind == PhaseKind::kRotate)
      velocity.tail(n_quat) = p.rates;

    for (Eigen::Index i = i0; i <= i1; ++i) {
      const double local = std::min(demo.t(i) - t_phase, dur);
      demo.q.row(i) = (cursor + velocity * std::max(local, 0.0)).transpose();
    }

    Eigen::VectorXd wrench_step;
    Eigen::Index contact_index = -1;
    if (p.kind == PhaseKind::kMoveUntilWall) {
      contact_index = i1;
      wrench_step = p.contact_wrench.size()
                        ? p.contact_wrench
                        : Eigen::VectorXd::Zero(n_wrench);
      if (!p.contact_wrench.size()) {
        // Reaction opposing the movement direction on the force channels.
        for (Eigen::Index c = 0; c < n_trans && c < n_wrench; ++c)
          wrench_step(c) = -10.0 * p.direction(c);
      }
    } else if (p.contact_on_entry && p.contact_wrench.size()) {
      contact_index = i0;
      wrench_step = p.contact_wrench;
    }
    if (contact_index >= 0) {
      contact_steps.emplace_back(contact_index, wrench_step);
      truth.contact_times.push_back(demo.t(contact_index));
    }

    truth.idle_flags.push_back(p.kind == PhaseKind::kIdle);
    cursor += velocity * dur;
    t_phase += dur;
    if (pi + 1 < script.phases.size()) truth.boundary_times.push_back(t_phase);
  }

  // Contact wrench: ramp to the full step over two samples, then hold.
  for (const auto& [ic, step] : contact_steps) {
    for (Eigen::Index i = ic; i < n; ++i) {
      const double ramp = std::min(static_cast<double>(i - ic + 1) / 2.0, 1.0);
      demo.w.row(i) += (ramp * step).transpose();
    }
  }

  std::mt19937_64 rng(script.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < n_trans; ++c)
      demo.q(i, c) += script.sigma_pos * gauss(rng);
    for (Eigen::Index c = 0; c < n_quat; ++c)
      demo.q(i, n_trans + c) += script.sigma_quat * gauss(rng);
    for (Eigen::Index c = 0; c < n_wrench; ++c)
      demo.w(i, c) += script.sigma_wrench * gauss(rng);
  }
  return {std::move(demo), std::move(truth)};
}

namespace {

PhaseKind kind_from_name(const std::string& name) {
  if (name == "move_line") return PhaseKind::kMoveLine;
  if (name == "rotate") return PhaseKind::kRotate;
  if (name == "idle") return PhaseKind::kIdle;
  if (name == "move_until_wall") return PhaseKind::kMoveUntilWall;
  throw Error(ErrorCode::kInvalidScript, "unknown phase kind '" + name + "'");
}

const char* kind_name(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::kMoveLine: return "move_line";
    case PhaseKind::kRotate: return "rotate";
    case PhaseKind::kIdle: return "idle";
    case PhaseKind::kMoveUntilWall: return "move_until_wall";
  }
  return "unknown";
}

Eigen::VectorXd vec_of(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
  return v;
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

PhaseScript script_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidScript, std::string("bad script JSON: ") + e.what());
  }
  PhaseScript script;
  try {
    script.rate_hz = root.value("rate_hz", 250.0);
    script.seed = root.value("seed", 0ULL);
    if (root.contains("noise")) {
      const auto& jn = root["noise"];
      script.sigma_pos = jn.value("sigma_pos", 0.0);
      script.sigma_quat = jn.value("sigma_quat", 0.0);
      script.sigma_wrench = jn.value("sigma_wrench", 0.0);
    }
    const auto& ch = root.at("channels");
    script.translation_names =
        ch.value("translation", std::vector<std::string>{});
    script.quaternion_names =
        ch.value("quaternion", std::vector<std::string>{});
    script.wrench_names = ch.value("wrench", std::vector<std::string>{});
    for (const auto& jp : root.at("phases")) {
      Phase p;
      p.kind = kind_from_name(jp.at("kind").get<std::string>());
      p.duration = jp.value("duration", 0.0);
      p.speed = jp.value("speed", 0.0);
      p.wall_distance = jp.value("wall_distance", 0.0);
      if (jp.contains("direction")) p.direction = vec_of(jp["direction"]);
      if (jp.contains("rates")) p.rates = vec_of(jp["rates"]);
      if (jp.contains("contact_wrench"))
        p.contact_wrench = vec_of(jp["contact_wrench"]);
      p.contact_on_entry = jp.value("contact_on_entry", false);
      if ((p.kind == PhaseKind::kMoveLine || p.kind == PhaseKind::kMoveUntilWall) &&
          p.direction.size() == 0)
        throw Error(ErrorCode::kInvalidScript, "move phase needs a direction");
      if (p.kind == PhaseKind::kRotate && p.rates.size() == 0)
        throw Error(ErrorCode::kInvalidScript, "rotate phase needs rates");
      script.phases.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidScript, std::string("bad script: ") + e.what());
  }
  return script;
}

std::string script_to_json(const PhaseScript& script) {
  json root;
  root["rate_hz"] = script.rate_hz;
  root["seed"] = script.seed;
  root["noise"] = {{"sigma_pos", script.sigma_pos},
                   {"sigma_quat", script.sigma_quat},
                   {"sigma_wrench", script.sigma_wrench}};
  root["channels"] = {{"translation", script.translation_names},
                      {"quaternion", script.quaternion_names},
                      {"wrench", script.wrench_names}};
  root["phases"] = json::array();
  for (const auto& p : script.phases) {
    json jp;
    jp["kind"] = kind_name(p.kind);
    if (p.kind == PhaseKind::kMoveUntilWall) {
      jp["wall_distance"] = p.wall_distance;
    } else {
      jp["duration"] = p.duration;
    }
    if (p.direction.size()) jp["direction"] = vec_json(p.direction);
    if (p.speed > 0) jp["speed"] = p.speed;
    if (p.rates.size()) jp["rates"] = vec_json(p.rates);
    if (p.contact_wrench.size()) jp["contact_wrench"] = vec_json(p.contact_wrench);
    if (p.contact_on_entry) jp["contact_on_entry"] = true;
    root["phases"].push_back(jp);
  }
  return root.dump(2);
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  json root;
  root["boundary_times"] = truth.boundary_times;
  root["contact_times"] = truth.contact_times;
  root["idle_flags"] = truth.idle_flags;
  return root.dump(2);
}

PhaseScript setup1_script(std::uint64_t seed) {
  PhaseScript s;
  s.translation_names = {"x", "y", "z"};
  s.wrench_names = {"fx", "fy", "fz"};
  s.rate_hz = 250.0;
  s.sigma_pos = 1e-3;
  s.sigma_wrench = 0.1;
  s.seed = seed;
  Phase fwd;
  fwd.kind = PhaseKind::kMoveLine;
  fwd.direction = Eigen::Vector3d(1, 0, 0);
  fwd.speed = 0.05;
  fwd.duration = 1.5;
  Phase idle;
  idle.kind = PhaseKind::kIdle;
  idle.duration = 1.0;
  Phase down;
  down.kind = PhaseKind::kMoveUntilWall;
  down.direction = Eigen::Vector3d(0, 0, -1);
  down.speed = 0.05;
  down.wall_distance = 0.05;
  Phase side;
  side.kind = PhaseKind::kMoveUntilWall;
  side.direction = Eigen::Vector3d(0, 1, 0);
  side.speed = 0.05;
  side.wall_distance = 0.06;
  s.phases = {fwd, idle, down, idle, side};
  return s;
}

PhaseScript setup2_script(std::uint64_t seed) {
  PhaseScript s;
  s.translation_names = {"x", "y", "z"};
  s.quaternion_names = {"qx", "qy", "qz"};
  s.wrench_names = {"fx", "fy", "fz", "tx", "ty", "tz"};
  s.rate_hz = 250.0;
  s.sigma_pos = 1e-3;
  s.sigma_quat = 2e-3;
  s.sigma_wrench = 0.1;
  s.seed = seed;
  Phase rotate;
  rotate.kind = PhaseKind::kRotate;
  rotate.rates = Eigen::Vector3d(0, 0, 0.25);
  rotate.duration = 2.0;
  Phase down;
  down.kind = PhaseKind::kMoveUntilWall;
  down.direction = Eigen::Vector3d(0, 0, -1);
  down.speed = 0.04;
  down.wall_distance = 0.06;
  Eigen::VectorXd wall_wrench(6);
  wall_wrench << 0, 0, 10.0, 0, 0, 0;
  down.contact_wrench = wall_wrench;
  Phase side_fast;
  side_fast.kind = PhaseKind::kMoveLine;
  side_fast.direction = Eigen::Vector3d(0, 1, 0);
  side_fast.speed = 0.05;
  side_fast.duration = 1.5;
  Phase side_push;
  side_push.kind = PhaseKind::kMoveLine;
  side_push.direction = Eigen::Vector3d(0, 1, 0);
  side_push.speed = 0.03;
  side_push.duration = 1.5;
  Eigen::VectorXd push_wrench(6);
  push_wrench << 0, -6.0, 0, 0, 0, 0.3;
  side_push.contact_wrench = push_wrench;
  side_push.contact_on_entry = true;
  s.phases = {rotate, down, side_fast, side_push};
  return s;
}

}  // namespace segflow
