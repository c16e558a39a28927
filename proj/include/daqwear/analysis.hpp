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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daqwear/config.hpp"
#include "daqwear/kernels.hpp"
#include "daqwear/recorder.hpp"

namespace daqwear {

/// A measurement file read back from disk.
struct MeasurementData {
  FileHeader header;
  SensorGroup group;
  std::vector<RowRecord> rows;
  /// 1-based line numbers of rows that did not parse.
  std::vector<std::size_t> malformed_lines;
};

/// Parses measurement-file text. Nothing when the header line is unusable.
std::optional<MeasurementData> parse_measurement(std::string_view text);
std::optional<MeasurementData> read_measurement(const std::filesystem::path& path);

struct SensorDensity {
  std::filesystem::path file;
  SensorKind kind = SensorKind::kAccel;
  std::int64_t interval_ms = 0;
  std::int64_t duration_ms = 0;
  std::uint64_t recorded = 0;
  std::uint64_t expected = 0;

  /// recorded / expected; 0 when nothing was expected.
  double density() const;
};

struct DensityReport {
  std::vector<SensorDensity> entries;
  std::vector<std::string> warnings;

  const SensorDensity* find(SensorKind kind) const;
};

/// Sample density of one measurement file, or of every measurement file
/// under a directory (sorted by path). The session duration comes from the
/// metafile next to each file.
DensityReport density(const std::filesystem::path& file_or_tree);

/// Density table as printed by the CLI (3 decimals).
std::string format_density(const DensityReport& report);

/// Mean and standard deviation of G = |accel| over the fresh accel cells of
/// a file. Nothing when there are none.
std::optional<kernels::Moments> gstats(const MeasurementData& data);
std::optional<kernels::Moments> gstats(const std::filesystem::path& file);

/// Height change for a pressure change, at kMetersPerHpa.
double altitude(double delta_p_hpa);

}  // namespace daqwear
