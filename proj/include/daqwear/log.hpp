// Copyright 2026 The daqwear Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string_view>

namespace daqwear {

/// Release builds log nothing at all; debug builds log flow, warnings and
/// errors to standard error.
enum class LogMode { kRelease, kDebug };

enum class LogLevel { kFlow, kWarning, kError };

#ifdef NDEBUG
inline constexpr LogMode kBuildLogMode = LogMode::kRelease;
#else
inline constexpr LogMode kBuildLogMode = LogMode::kDebug;
#endif

class Logger {
 public:
  explicit Logger(LogMode mode = kBuildLogMode) : mode_(mode) {}

  LogMode mode() const { return mode_; }
  void log(LogLevel level, std::string_view message) const;

  void flow(std::string_view message) const { log(LogLevel::kFlow, message); }
  void warning(std::string_view message) const { log(LogLevel::kWarning, message); }
  void error(std::string_view message) const { log(LogLevel::kError, message); }

 private:
  LogMode mode_;
};

}  // namespace daqwear
