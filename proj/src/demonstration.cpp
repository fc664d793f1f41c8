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

#include "segflow/demonstration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace segflow {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kNonNumericCell: return "NonNumericCell";
    case ErrorCode::kNonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::kDegenerateSpan: return "DegenerateSpan";
    case ErrorCode::kSingularComponent: return "SingularComponent";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kAllFitsFailed: return "AllFitsFailed";
    case ErrorCode::kUnorderedGmm: return "UnorderedGmm";
    case ErrorCode::kNonSpdCovariance: return "NonSpdCovariance";
    case ErrorCode::kSingularInnovationCovariance:
      return "SingularInnovationCovariance";
    case ErrorCode::kPointOutOfSpan: return "PointOutOfSpan";
    case ErrorCode::kDegenerateSegment: return "DegenerateSegment";
    case ErrorCode::kModelCountMismatch: return "ModelCountMismatch";
    case ErrorCode::kInvalidScript: return "InvalidScript";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

std::string infer_config_unit(const std::string& channel_name) {
  return (!channel_name.empty() && channel_name[0] == 'q') ? "quat" : "m";
}

std::string infer_wrench_unit(const std::string& channel_name) {
  return (!channel_name.empty() && channel_name[0] == 't') ? "Nm" : "N";
}

Demonstration Demonstration::slice(double ta, double tb) const {
  Eigen::Index i0 = 0;
  while (i0 < size() && t(i0) < ta - 1e-12) ++i0;
  Eigen::Index i1 = size();
  while (i1 > i0 && t(i1 - 1) > tb + 1e-12) --i1;
  Demonstration out = *this;
  out.t = t.segment(i0, i1 - i0);
  out.q = q.middleRows(i0, i1 - i0);
  out.w = w.middleRows(i0, i1 - i0);
  return out;
}

std::vector<int> Demonstration::channels_with_unit(
    const std::string& unit) const {
  std::vector<int> idx;
  for (size_t c = 0; c < q_units.size(); ++c) {
    if (q_units[c] == unit) idx.push_back(static_cast<int>(c));
  }
  return idx;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& cell, long row, const std::string& col) {
  const std::string v = strip(cell);
  if (v.empty())
    throw Error(ErrorCode::kNonNumericCell,
                "empty cell at row " + std::to_string(row) + ", column " + col,
                row, col);
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size())
    throw Error(ErrorCode::kNonNumericCell,
                "non-numeric cell '" + v + "' at row " + std::to_string(row) +
                    ", column " + col,
                row, col);
  return x;
}

}  // namespace

Demonstration load_demonstration(const std::string& path,
                                 const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");

  std::string header;
  if (!std::getline(in, header))
    throw Error(ErrorCode::kMissingColumn, "empty file '" + path + "'");
  std::vector<std::string> cols = split_csv_line(header);

  int t_col = -1;
  std::vector<int> q_cols, w_cols;
  std::vector<std::string> q_names, w_names;
  for (size_t c = 0; c < cols.size(); ++c) {
    std::string role = strip(cols[c]);
    if (auto it = schema.find(role); it != schema.end()) role = it->second;
    if (role == "t") {
      t_col = static_cast<int>(c);
    } else if (role.rfind("q:", 0) == 0) {
      q_cols.push_back(static_cast<int>(c));
      q_names.push_back(role.substr(2));
    } else if (role.rfind("w:", 0) == 0) {
      w_cols.push_back(static_cast<int>(c));
      w_names.push_back(role.substr(2));
    } else if (role == "ignore") {
      continue;
    } else {
      throw Error(ErrorCode::kMissingColumn,
                  "unrecognized column '" + role + "' in '" + path + "'", 0,
                  role);
    }
  }
  if (t_col < 0)
    throw Error(ErrorCode::kMissingColumn, "no 't' column in '" + path + "'");
  if (q_cols.empty() && w_cols.empty())
    throw Error(ErrorCode::kMissingColumn,
                "no 'q:*' or 'w:*' column in '" + path + "'");
  if (q_cols.empty() && schema.empty())
    throw Error(ErrorCode::kMissingColumn,
                "no 'q:*' column in '" + path + "'");

  std::vector<double> ts;
  std::vector<Eigen::VectorXd> qs, ws;
  std::string line;
  long row = 0;  // data row index, 0-based
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != cols.size())
      throw Error(ErrorCode::kNonNumericCell,
                  "row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(cols.size()),
                  row);
    double tv = parse_cell(cells[t_col], row, "t");
    if (!ts.empty() && tv <= ts.back())
      throw Error(ErrorCode::kNonMonotonicTime,
                  "non-increasing time at row " + std::to_string(row), row);
    Eigen::VectorXd qv(q_cols.size()), wv(w_cols.size());
    for (size_t j = 0; j < q_cols.size(); ++j)
      qv(j) = parse_cell(cells[q_cols[j]], row, "q:" + q_names[j]);
    for (size_t j = 0; j < w_cols.size(); ++j)
      wv(j) = parse_cell(cells[w_cols[j]], row, "w:" + w_names[j]);
    ts.push_back(tv);
    qs.push_back(std::move(qv));
    ws.push_back(std::move(wv));
    ++row;
  }

  Demonstration demo;
  demo.t.resize(ts.size());
  demo.q.resize(ts.size(), q_cols.size());
  demo.w.resize(ts.size(), w_cols.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    demo.t(i) = ts[i];
    if (!q_cols.empty()) demo.q.row(i) = qs[i].transpose();
    if (!w_cols.empty()) demo.w.row(i) = ws[i].transpose();
  }
  demo.q_names = q_names;
  demo.w_names = w_names;
  for (const auto& n : q_names) demo.q_units.push_back(infer_config_unit(n));
  for (const auto& n : w_names) demo.w_units.push_back(infer_wrench_unit(n));
  if (demo.size() >= 2 && demo.span() > 0)
    demo.rate_hz = static_cast<double>(demo.size() - 1) / demo.span();
  return demo;
}

void save_demonstration(const Demonstration& demo, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out << "t";
  for (const auto& n : demo.q_names) out << ",q:" << n;
  for (const auto& n : demo.w_names) out << ",w:" << n;
  out << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (Eigen::Index i = 0; i < demo.size(); ++i) {
    put(demo.t(i));
    for (Eigen::Index c = 0; c < demo.n_config(); ++c) {
      out << ",";
      put(demo.q(i, c));
    }
    for (Eigen::Index c = 0; c < demo.n_wrench(); ++c) {
      out << ",";
      put(demo.w(i, c));
    }
    out << "\n";
  }
}

Demonstration resample_uniform(const Demonstration& demo, double rate_hz) {
  if (demo.size() < 2)
    throw Error(ErrorCode::kTooFewSamples, "need at least 2 samples");
  if (rate_hz <= 0)
    throw Error(ErrorCode::kInvalidConfig, "rate_hz must be positive");
  const double t0 = demo.t_start(), t1 = demo.t_end();
  if (t1 <= t0)
    throw Error(ErrorCode::kDegenerateSpan, "t_end <= t_start");

  const Eigen::Index n_out =
      static_cast<Eigen::Index>(std::floor((t1 - t0) * rate_hz + 1e-9)) + 1;
  Demonstration out;
  out.q_names = demo.q_names;
  out.w_names = demo.w_names;
  out.q_units = demo.q_units;
  out.w_units = demo.w_units;
  out.rate_hz = rate_hz;
  out.t.resize(n_out);
  out.q.resize(n_out, demo.n_config());
  out.w.resize(n_out, demo.n_wrench());

  Eigen::Index lo = 0;
  for (Eigen::Index i = 0; i < n_out; ++i) {
    const double ti = t0 + static_cast<double>(i) / rate_hz;
    out.t(i) = ti;
    while (lo + 2 < demo.size() && demo.t(lo + 1) <= ti) ++lo;
    const double ta = demo.t(lo), tb = demo.t(lo + 1);
    double a = (ti - ta) / (tb - ta);
    // Snap onto source samples so resampling at the native rate is exact.
    if (a < 1e-12) a = 0.0;
    if (a > 1.0 - 1e-12) a = 1.0;
    out.q.row(i) = (1.0 - a) * demo.q.row(lo) + a * demo.q.row(lo + 1);
    out.w.row(i) = (1.0 - a) * demo.w.row(lo) + a * demo.w.row(lo + 1);
  }
  return out;
}

ValidationReport validate(const Demonstration& demo) {
  ValidationReport report;
  auto err = [&](Eigen::Index i, std::string d) {
    report.errors.push_back({i, std::move(d)});
  };
  auto warn = [&](Eigen::Index i, std::string d) {
    report.warnings.push_back({i, std::move(d)});
  };

  if (demo.q_names.size() != static_cast<size_t>(demo.n_config()))
    err(-1, "q channel name count does not match data width");
  if (demo.w_names.size() != static_cast<size_t>(demo.n_wrench()))
    err(-1, "w channel name count does not match data width");

  for (Eigen::Index i = 0; i < demo.size(); ++i) {
    if (!std::isfinite(demo.t(i))) err(i, "non-finite timestamp");
    if (!demo.q.row(i).allFinite()) err(i, "non-finite configuration entry");
    if (!demo.w.row(i).allFinite()) err(i, "non-finite wrench entry");
    if (i > 0) {
      if (demo.t(i) == demo.t(i - 1))
        err(i, "duplicate timestamp");
      else if (demo.t(i) < demo.t(i - 1))
        err(i, "decreasing timestamp");
    }
  }

  if (demo.rate_hz > 0 && demo.size() >= 3) {
    const double dt = 1.0 / demo.rate_hz;
    double max_dev = 0.0;
    for (Eigen::Index i = 1; i < demo.size(); ++i)
      max_dev = std::max(max_dev, std::abs(demo.t(i) - demo.t(i - 1) - dt));
    if (max_dev > 1e-6)
      warn(-1, "sample spacing deviates from 1/rate_hz by more than 1e-6 s");
  }
  return report;
}

}  // namespace segflow
