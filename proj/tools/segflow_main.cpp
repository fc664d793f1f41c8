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

// segflow: segments demonstrated trajectories by fusing position-based GMM
// clustering with Kalman-filter contact-change detection, then replays the
// segments as movement primitives against a simulated robot.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "segflow/config.hpp"
#include "segflow/pipeline.hpp"
#include "segflow/replay.hpp"
#include "segflow/synth.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace segflow;

constexpr const char* kVersion = "0.1.0";
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn:
    case ErrorCode::kNonNumericCell:
    case ErrorCode::kNonMonotonicTime:
    case ErrorCode::kDegenerateSpan:
    case ErrorCode::kTooFewSamples:
    case ErrorCode::kPointOutOfSpan:
    case ErrorCode::kModelCountMismatch:
    case ErrorCode::kNonSpdCovariance:
    case ErrorCode::kInvalidScript:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kIoError:
      return kExitInput;
    default:
      return kExitRuntime;
  }
}

void emit_error(const Error& e) {
  json root;
  root["error"]["code"] = e.code_name();
  root["error"]["message"] = e.what();
  if (e.row() >= 0) root["error"]["row"] = e.row();
  if (!e.column().empty()) root["error"]["column"] = e.column();
  std::cerr << root.dump() << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write-to-temp plus rename, so failed runs leave no partial outputs.
void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + tmp + "'");
    out << content;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw Error(ErrorCode::kIoError,
                "cannot move '" + tmp + "' to '" + path + "'");
}

RunConfig load_config(const std::string& config_path,
                      const std::vector<std::string>& overrides) {
  RunConfig config;
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SEGFLOW_CONFIG")) path = env;
  }
  if (!path.empty()) config = config_from_json(read_file(path));
  for (const auto& o : overrides) apply_override(&config, o);
  return config;
}

Demonstration load_and_check(const std::string& path) {
  Demonstration demo = load_demonstration(path);
  const ValidationReport report = validate(demo);
  if (!report.ok()) {
    const auto& first = report.errors.front();
    throw Error(ErrorCode::kNonNumericCell,
                "validation failed (" + std::to_string(report.errors.size()) +
                    " errors), first: sample " + std::to_string(first.index) +
                    ": " + first.description,
                first.index);
  }
  for (const auto& w : report.warnings) {
    if (w.description.rfind("sample spacing", 0) == 0) {
      const double rate = std::round(demo.rate_hz);
      demo = resample_uniform(demo, rate > 0 ? rate : 250.0);
      break;
    }
  }
  return demo;
}

int cmd_segment(const std::string& input, const std::string& out_dir,
                const RunConfig& config) {
  const Demonstration demo = load_and_check(input);
  const SegmentationResult result = run_segmentation(demo, config);

  std::filesystem::create_directories(out_dir);
  const auto out = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_file_atomic(out("plan.json"), plan_to_json(result.plan));
  write_file_atomic(out("gmm.json"), gmm_to_json(result.gmm));
  {
    std::ostringstream nis;
    nis << "t,value\n";
    char buf[64];
    for (size_t i = 0; i < result.nis.t.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", result.nis.t[i],
                    result.nis.value[i]);
      nis << buf;
    }
    write_file_atomic(out("nis.csv"), nis.str());
  }

  std::printf("%zu segments over [%g, %g] s, %d mixture components\n",
              result.plan.segments.size(), result.plan.t_start,
              result.plan.t_end, result.gmm.size());
  std::printf("%-4s %-10s %-10s %-6s %-9s %-22s %s\n", "#", "t_start",
              "t_end", "idle", "source", "end condition", "label");
  for (size_t i = 0; i < result.plan.segments.size(); ++i) {
    const Segment& seg = result.plan.segments[i];
    const char* source =
        i < result.plan.points.size()
            ? point_source_name(result.plan.points[i].source)
            : "span-end";
    char cond[64];
    if (seg.end_condition.kind == EndConditionKind::kContactChange)
      std::snprintf(cond, sizeof(cond), "contact > %.2f N",
                    seg.end_condition.force_threshold);
    else
      std::snprintf(cond, sizeof(cond), "goal reached");
    std::printf("%-4zu %-10.3f %-10.3f %-6s %-9s %-22s %s\n", i + 1,
                seg.t_start, seg.t_end, seg.idle ? "yes" : "no", source, cond,
                seg.label.c_str());
  }
  return 0;
}

int cmd_detect(const std::string& input, bool fixture_mode,
               const RunConfig& config) {
  NisSeries series;
  if (fixture_mode) {
    series = load_nis_csv(input);
  } else {
    const Demonstration demo = load_and_check(input);
    const NoiseConfig noise =
        estimate_noise(demo, config.kalman.r2_window_s, config.kalman.r1_scale,
                       config.kalman.r2_ridge);
    series = nis_series(demo, noise, {config.normalizer()});
  }
  const auto peaks = detect_peaks(series, config.detector.threshold,
                                  config.detector.min_separation_s);
  for (const auto& p : peaks) std::printf("%g %.3f\n", p.t, p.strength);
  return 0;
}

int cmd_replay(const std::string& plan_path, const std::string& demo_path,
               const std::string& out_dir, const RunConfig& config) {
  const SegmentPlan plan = plan_from_json(read_file(plan_path));
  const Demonstration demo = load_and_check(demo_path);
  const std::vector<DmpModel> models = fit_segment_models(demo, plan, config);

  SimConfig sim;
  sim.rate_hz = config.sim.rate_hz;
  sim.walls = config.sim.walls;
  sim.translation_channels = demo.channels_with_unit("m");
  ExecConfig exec;
  exec.goal_tol = config.dmp.goal_tol;
  exec.vel_tol = config.dmp.vel_tol;

  const ExecutionTrace trace = execute_sequence(plan, models, sim, exec);

  std::filesystem::create_directories(out_dir);
  const auto out = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_file_atomic(out("trace.json"), trace_to_json(trace));
  save_trace_csv(trace, out("trace.csv"));
  {
    json jm = json::array();
    for (const auto& m : models) jm.push_back(json::parse(dmp_to_json(m)));
    write_file_atomic(out("models.json"), jm.dump(2));
  }

  for (const auto& e : trace.events)
    std::printf("segment %d: %s at t=%.3f s (%s)\n", e.segment_index + 1,
                event_type_name(e.type), e.t, e.detail.c_str());
  if (!trace.all_completed()) {
    std::fprintf(stderr,
                 "{\"error\":{\"code\":\"SegmentTimeout\",\"message\":\"a "
                 "segment did not complete\"}}\n");
    return kExitRuntime;
  }
  return 0;
}

int cmd_synth(const std::string& script_path, const std::string& out_csv) {
  const PhaseScript script = script_from_json(read_file(script_path));
  const auto [demo, truth] = generate(script);

  {
    const std::string tmp = out_csv + ".tmp";
    save_demonstration(demo, tmp);
    std::error_code ec;
    std::filesystem::rename(tmp, out_csv, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot write '" + out_csv + "'");
  }
  std::string truth_path = out_csv;
  if (truth_path.size() > 4 && truth_path.substr(truth_path.size() - 4) == ".csv")
    truth_path = truth_path.substr(0, truth_path.size() - 4);
  truth_path += "_truth.json";
  write_file_atomic(truth_path, ground_truth_to_json(truth));

  std::printf("%lld samples, %zu phases, %zu boundaries, %zu contacts\n",
              static_cast<long long>(demo.size()), truth.idle_flags.size(),
              truth.boundary_times.size(), truth.contact_times.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajectory segmentation from position and force data"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path,
                 "JSON config file (flat dotted keys); defaults to "
                 "$SEGFLOW_CONFIG");
  app.add_option("--set", overrides,
                 "override a config key, e.g. --set detector.threshold=4.0");

  auto* segment = app.add_subcommand(
      "segment", "demonstration CSV -> segment plan + diagnostics");
  std::string seg_input, seg_out = ".";
  segment->add_option("input", seg_input, "demonstration CSV")->required();
  segment->add_option("-o,--out-dir", seg_out,
                      "output directory for plan.json, gmm.json, nis.csv");

  auto* detect = app.add_subcommand(
      "detect", "print force-change peaks, one 't value' line each");
  std::string det_input;
  bool det_fixture = false;
  detect->add_option("input", det_input, "demonstration CSV or NIS series")
      ->required();
  detect->add_flag("--fixture", det_fixture,
                   "input is a precomputed NIS series (t,value)");

  auto* replay = app.add_subcommand(
      "replay", "execute a segment plan against the simulated robot");
  std::string rep_plan, rep_demo, rep_out = ".";
  replay->add_option("plan", rep_plan, "plan JSON from 'segment'")->required();
  replay->add_option("demo", rep_demo, "demonstration CSV")->required();
  replay->add_option("-o,--out-dir", rep_out,
                     "output directory for trace.json, trace.csv, models.json");

  auto* synth = app.add_subcommand(
      "synth", "generate a scripted demonstration with ground truth");
  std::string syn_script, syn_out = "synth.csv";
  synth->add_option("script", syn_script, "phase script JSON")->required();
  synth->add_option("-o,--out", syn_out, "output CSV path");

  auto* version = app.add_subcommand("version", "print version");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig config = load_config(config_path, overrides);
    if (version->parsed()) {
      std::printf("segflow %s\n", kVersion);
      return 0;
    }
    if (segment->parsed()) return cmd_segment(seg_input, seg_out, config);
    if (detect->parsed()) return cmd_detect(det_input, det_fixture, config);
    if (replay->parsed())
      return cmd_replay(rep_plan, rep_demo, rep_out, config);
    if (synth->parsed()) return cmd_synth(syn_script, syn_out);
  } catch (const Error& e) {
    emit_error(e);
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":{\"code\":\"Internal\",\"message\":\"" << e.what()
              << "\"}}\n";
    return kExitRuntime;
  }
  return 0;
}
