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

#include "daqwear/log.hpp"

#include <iostream>

namespace daqwear {

void Logger::log(LogLevel level, std::string_view message) const {
  if (mode_ == LogMode::kRelease) return;
  std::string_view tag = "flow";
  if (level == LogLevel::kWarning) tag = "warning";
  if (level == LogLevel::kError) tag = "error";
  std::clog << "[daqwear " << tag << "] " << message << '\n';
}

}  // namespace daqwear
