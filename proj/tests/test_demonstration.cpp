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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "support/paths.hpp"

using namespace segflow;

namespace {

std::string write_temp_csv(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

Demonstration make_uniform(int n, double rate, int n_q = 1, int n_w = 1) {
  Demonstration demo;
  demo.t.resize(n);
  demo.q.resize(n, n_q);
  demo.w.resize(n, n_w);
  for (int i = 0; i < n; ++i) {
    demo.t(i) = i / rate;
    for (int c = 0; c < n_q; ++c) demo.q(i, c) = 0.1 * i + c;
    for (int c = 0; c < n_w; ++c) demo.w(i, c) = 0.0;
  }
  demo.rate_hz = rate;
  for (int c = 0; c < n_q; ++c) {
    demo.q_names.push_back("c" + std::to_string(c));
    demo.q_units.push_back("m");
  }
  for (int c = 0; c < n_w; ++c) {
    demo.w_names.push_back("f" + std::to_string(c));
    demo.w_units.push_back("N");
  }
  return demo;
}

}  // namespace

TEST_CASE("load: three-row csv infers 250 Hz") {
  const auto path = write_temp_csv("segflow_load3.csv",
                                   "t,q:x,w:fz\n"
                                   "0,0.0,0.1\n"
                                   "0.004,0.5,0.2\n"
                                   "0.008,1.0,0.3\n");
  const Demonstration demo = load_demonstration(path);
  CHECK(demo.size() == 3);
  CHECK(demo.n_config() == 1);
  CHECK(demo.n_wrench() == 1);
  CHECK(demo.rate_hz == doctest::Approx(250.0));
  CHECK(demo.q(1, 0) == 0.5);
  CHECK(demo.q_names[0] == "x");
  CHECK(demo.w_names[0] == "fz");
}

TEST_CASE("load: decreasing time reports the row") {
  std::string body = "t,q:x\n";
  for (int i = 0; i < 5; ++i) body += std::to_string(0.01 * i) + ",0\n";
  body += "0.02,0\n";  // row 5 goes backwards
  const auto path = write_temp_csv("segflow_nonmono.csv", body);
  try {
    load_demonstration(path);
    FAIL("expected NonMonotonicTime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonMonotonicTime);
    CHECK(e.row() == 5);
  }
}

TEST_CASE("load: non-numeric cell reports row and column") {
  const auto path = write_temp_csv("segflow_nonnum.csv",
                                   "t,q:x\n0,0\n0.1,oops\n");
  try {
    load_demonstration(path);
    FAIL("expected NonNumericCell");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonNumericCell);
    CHECK(e.row() == 1);
    CHECK(e.column() == "q:x");
  }
}

TEST_CASE("load: missing q column") {
  const auto path = write_temp_csv("segflow_noq.csv", "t,w:fz\n0,0\n");
  CHECK_THROWS_WITH_AS(load_demonstration(path),
                       doctest::Contains("q:"), Error);
}

TEST_CASE("load: plotted-series fixture via schema override") {
  const Demonstration demo = load_demonstration(
      testpaths::fixture("setup1_nis.csv"), {{"value", "w:nis"}});
  CHECK(demo.size() == 337);
  CHECK(demo.n_wrench() == 1);
  CHECK(demo.t(0) == 0.02);
  CHECK(demo.rate_hz == doctest::Approx(50.0));
}

TEST_CASE("load: crlf line endings accepted") {
  const auto path =
      write_temp_csv("segflow_crlf.csv", "t,q:x\r\n0,1\r\n0.1,2\r\n");
  const Demonstration demo = load_demonstration(path);
  CHECK(demo.size() == 2);
  CHECK(demo.q(1, 0) == 2.0);
}

TEST_CASE("resample: ramp to 4 Hz") {
  Demonstration demo;
  demo.t.resize(2);
  demo.t << 0.0, 1.0;
  demo.q.resize(2, 1);
  demo.q << 0.0, 1.0;
  demo.w.resize(2, 1);
  demo.w << 0.0, 0.0;
  demo.q_names = {"x"};
  demo.w_names = {"fz"};
  demo.q_units = {"m"};
  demo.w_units = {"N"};

  const Demonstration out = resample_uniform(demo, 4.0);
  REQUIRE(out.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(out.t(i) == doctest::Approx(0.25 * i).epsilon(1e-12));
    CHECK(out.q(i, 0) == doctest::Approx(0.25 * i).epsilon(1e-12));
  }
}

TEST_CASE("resample: identity at the native rate") {
  const Demonstration demo = make_uniform(251, 250.0, 2, 2);
  const Demonstration out = resample_uniform(demo, 250.0);
  REQUIRE(out.size() == demo.size());
  CHECK((out.t - demo.t).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((out.q - demo.q).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((out.w - demo.w).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("resample: quadratic interpolation error bound h^2/8") {
  Demonstration demo;
  const int n = 11;  // 10 Hz over [0, 1]
  demo.t.resize(n);
  demo.q.resize(n, 1);
  demo.w.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    demo.t(i) = 0.1 * i;
    demo.q(i, 0) = demo.t(i) * demo.t(i);
    demo.w(i, 0) = 0.0;
  }
  demo.q_names = {"x"};
  demo.w_names = {"fz"};
  demo.q_units = {"m"};
  demo.w_units = {"N"};
  const Demonstration out = resample_uniform(demo, 100.0);
  double max_dev = 0.0;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    max_dev = std::max(max_dev, std::abs(out.q(i, 0) - out.t(i) * out.t(i)));
  CHECK(max_dev <= 0.0025 + 1e-12);
  CHECK(max_dev > 0.0);
}

TEST_CASE("resample: affine signals are exact") {
  Demonstration demo = make_uniform(100, 100.0, 3, 1);
  for (Eigen::Index i = 0; i < demo.size(); ++i)
    for (int c = 0; c < 3; ++c) demo.q(i, c) = 2.5 * demo.t(i) - 1.0 + c;
  const Demonstration out = resample_uniform(demo, 173.0);
  for (Eigen::Index i = 0; i < out.size(); ++i)
    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(out.q(i, c) - (2.5 * out.t(i) - 1.0 + c)) <= 1e-12);
  CHECK(out.q_names == demo.q_names);
  CHECK(out.w_names == demo.w_names);
}

TEST_CASE("resample: degenerate span") {
  Demonstration flat = make_uniform(2, 100.0);
  flat.t << 1.0, 1.0;  // load_demonstration would reject this; build directly
  CHECK_THROWS_AS(resample_uniform(flat, 10.0), Error);
}

TEST_CASE("validate: clean demonstration") {
  const ValidationReport report = validate(make_uniform(250, 250.0));
  CHECK(report.ok());
  CHECK(report.warnings.empty());
}

TEST_CASE("validate: nan wrench at index 7") {
  Demonstration demo = make_uniform(20, 250.0);
  demo.w(7, 0) = std::nan("");
  const ValidationReport report = validate(demo);
  REQUIRE(report.errors.size() == 1);
  CHECK(report.errors[0].index == 7);
  CHECK(report.errors[0].description == "non-finite wrench entry");
}

TEST_CASE("validate: duplicate timestamps") {
  Demonstration demo = make_uniform(20, 250.0);
  demo.t(5) = demo.t(4);
  const ValidationReport report = validate(demo);
  bool found = false;
  for (const auto& e : report.errors)
    if (e.description == "duplicate timestamp" && e.index == 5) found = true;
  CHECK(found);
}

TEST_CASE("validate: metadata width mismatch") {
  Demonstration demo = make_uniform(20, 250.0);
  demo.q_names.push_back("ghost");
  CHECK_FALSE(validate(demo).ok());
}

TEST_CASE("slice keeps the requested time range") {
  const Demonstration demo = make_uniform(101, 100.0);
  const Demonstration cut = demo.slice(0.25, 0.5);
  CHECK(cut.size() == 26);
  CHECK(cut.t(0) == doctest::Approx(0.25));
  CHECK(cut.t(cut.size() - 1) == doctest::Approx(0.5));
}

TEST_CASE("save/load round trip") {
  const Demonstration demo = make_uniform(50, 250.0, 2, 3);
  const auto path = (std::filesystem::temp_directory_path() /
                     "segflow_roundtrip.csv").string();
  save_demonstration(demo, path);
  const Demonstration back = load_demonstration(path);
  CHECK(back.size() == demo.size());
  CHECK((back.q - demo.q).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.w - demo.w).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.q_names == demo.q_names);
}
