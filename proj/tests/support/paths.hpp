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

#ifndef SEGFLOW_TESTS_SUPPORT_PATHS_HPP_
#define SEGFLOW_TESTS_SUPPORT_PATHS_HPP_

#include <string>

#ifndef SEGFLOW_SOURCE_DIR
#define SEGFLOW_SOURCE_DIR "."
#endif

namespace testpaths {

inline std::string source_dir() { return SEGFLOW_SOURCE_DIR; }
inline std::string fixture(const std::string& name) {
  return source_dir() + "/fixtures/" + name;
}
inline std::string script(const std::string& name) {
  return source_dir() + "/scripts/" + name;
}

}  // namespace testpaths

#endif  // SEGFLOW_TESTS_SUPPORT_PATHS_HPP_
