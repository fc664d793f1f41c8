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

#ifndef SEGFLOW_ERRORS_HPP_
#define SEGFLOW_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace segflow {

enum class ErrorCode {
  kMissingColumn,
  kNonNumericCell,
  kNonMonotonicTime,
  kDegenerateSpan,
  kSingularComponent,
  kTooFewSamples,
  kAllFitsFailed,
  kUnorderedGmm,
  kNonSpdCovariance,
  kSingularInnovationCovariance,
  kPointOutOfSpan,
  kDegenerateSegment,
  kModelCountMismatch,
  kInvalidScript,
  kInvalidConfig,
  kIoError,
};

const char* error_code_name(ErrorCode code);

// Library-wide exception. `row`/`column` locate the offending cell for file
// ingestion errors; -1 / empty when not applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long row = -1,
        std::string column = {})
      : std::runtime_error(message), code_(code), row_(row),
        column_(std::move(column)) {}

  ErrorCode code() const { return code_; }
  long row() const { return row_; }
  const std::string& column() const { return column_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
  long row_;
  std::string column_;
};

}  // namespace segflow

#endif  // SEGFLOW_ERRORS_HPP_
