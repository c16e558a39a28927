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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "daqwear/bridge.hpp"
#include "daqwear/recorder.hpp"

namespace daqwear {

/// Sends one bridge request and returns the response object.
using RequestFn = std::function<Json(const Json&)>;

/// Requests answered directly by a local host, without a socket.
RequestFn in_process(DeviceHost& host);

/// `P<person>/<YYYYMMDD_HHMMSS>`, relative to the pull root.
std::filesystem::path session_dir(const FileNameInfo& info);

struct ScrubResult {
  std::string text;
  std::size_t kept = 0;
  std::size_t removed = 0;
  /// 1-based line numbers of rows retained because they did not parse.
  std::vector<std::size_t> malformed_lines;
};

/// Drops the well-formed rows labeled 'P' from measurement-file text. All
/// other bytes are kept as they were.
ScrubResult scrub_text(std::string_view text);

struct PullFailure {
  std::string name;
  std::string reason;
};

struct PulledFile {
  std::string name;
  std::filesystem::path path;
  std::uint64_t bytes = 0;
  std::size_t removed_rows = 0;
};

struct PullReport {
  std::vector<PulledFile> files;
  std::vector<PullFailure> failures;

  bool ok() const { return failures.empty(); }
};

/// Copies every device file into `out_dir` as a person/session tree. Files
/// are written under a `.part` name and renamed when complete. With `scrub`,
/// private rows are removed on the way.
PullReport pull_all(const RequestFn& request, const std::filesystem::path& out_dir,
                    bool scrub = false);

struct ScrubFileReport {
  std::filesystem::path relative;
  bool measurement = false;
  std::size_t kept = 0;
  std::size_t removed = 0;
  std::vector<std::size_t> malformed_lines;
};

struct ScrubReport {
  std::vector<ScrubFileReport> files;
  std::vector<std::string> errors;

  std::size_t removed() const;
  std::size_t malformed() const;
};

/// Scrubs a pulled tree into `out_tree` (which may equal `in_tree`).
/// Metafiles and other files are copied unchanged.
ScrubReport scrub(const std::filesystem::path& in_tree, const std::filesystem::path& out_tree);

}  // namespace daqwear
