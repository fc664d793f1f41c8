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

#ifndef SEGFLOW_DEMONSTRATION_HPP_
#define SEGFLOW_DEMONSTRATION_HPP_

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "segflow/errors.hpp"

namespace segflow {

// One time step of a demonstration: configuration channels q (meters for
// translation channels, dimensionless for quaternion-imaginary channels) and
// wrench channels w (N for forces, Nm for torques).
struct Sample {
  double t = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd w;
};

// A demonstrated trajectory, stored column-per-channel. Rows are samples in
// strictly increasing time order; all rows share the same channel layout.
class Demonstration {
 public:
  Eigen::VectorXd t;   // N
  Eigen::MatrixXd q;   // N x n
  Eigen::MatrixXd w;   // N x m
  double rate_hz = 0.0;
  std::vector<std::string> q_names;
  std::vector<std::string> w_names;
  std::vector<std::string> q_units;  // "m" or "quat"
  std::vector<std::string> w_units;  // "N" or "Nm"

  Eigen::Index size() const { return t.size(); }
  Eigen::Index n_config() const { return q.cols(); }
  Eigen::Index n_wrench() const { return w.cols(); }
  double t_start() const { return t.size() ? t(0) : 0.0; }
  double t_end() const { return t.size() ? t(t.size() - 1) : 0.0; }
  double span() const { return t_end() - t_start(); }

  Sample sample(Eigen::Index i) const {
    return Sample{t(i), q.row(i).transpose(), w.row(i).transpose()};
  }

  // Copy of the sample range whose timestamps fall in [ta, tb].
  Demonstration slice(double ta, double tb) const;

  // Indices of q channels carrying the given unit tag.
  std::vector<int> channels_with_unit(const std::string& unit) const;
};

struct ValidationIssue {
  Eigen::Index index;  // sample index, -1 for whole-file findings
  std::string description;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  bool ok() const { return errors.empty(); }
};

// Optional per-column role overrides for CSV ingestion. Keys are raw header
// names, values are roles in header syntax ("t", "q:<name>", "w:<name>",
// "ignore"). Columns not listed keep their header-declared role.
using CsvSchema = std::map<std::string, std::string>;

// Reads a demonstration from CSV. Header declares roles:
// `t,q:<name>[,q:<name>...],w:<name>[,w:<name>...]`. Timestamps are kept as
// read; rate_hz is inferred from the mean spacing. Throws Error with code
// kMissingColumn, kNonNumericCell (row and column reported) or
// kNonMonotonicTime.
Demonstration load_demonstration(const std::string& path,
                                 const CsvSchema& schema = {});

// Writes the CSV form accepted by load_demonstration.
void save_demonstration(const Demonstration& demo, const std::string& path);

// Linear interpolation of every channel onto a uniform grid spanning
// [t_start, t_end] at rate_hz. Throws kDegenerateSpan when the span is empty.
Demonstration resample_uniform(const Demonstration& demo, double rate_hz);

// Non-mutating integrity scan: non-finite entries, duplicate or decreasing
// timestamps, metadata/dimension mismatches. Findings are returned, never
// thrown.
ValidationReport validate(const Demonstration& demo);

// Unit tag conventions used when a loaded file does not specify units:
// q channels whose name starts with 'q' are quaternion-imaginary parts,
// w channels whose name starts with 't' are torques.
std::string infer_config_unit(const std::string& channel_name);
std::string infer_wrench_unit(const std::string& channel_name);

}  // namespace segflow

#endif  // SEGFLOW_DEMONSTRATION_HPP_
