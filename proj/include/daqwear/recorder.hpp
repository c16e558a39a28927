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

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daqwear/config.hpp"
#include "daqwear/geofence.hpp"
#include "daqwear/sensor.hpp"

namespace daqwear {

// ---------------------------------------------------------------------------
// File naming and headers

/// `P<person>_<YYYYMMDD>_<HHMMSS>_<watch>_<kind1-kind2-...>.csv`
std::string make_filename(int person_id, WallTime start, std::string_view watch_id,
                          const SensorGroup& group);
/// `P<person>_<YYYYMMDD>_<HHMMSS>_<watch>_meta.txt`
std::string make_metafile_name(int person_id, WallTime start, std::string_view watch_id);

struct FileNameInfo {
  int person_id = 0;
  WallTime start{};
  std::string watch_id;
  /// Sensor kinds for measurement files; empty for metafiles.
  std::vector<SensorKind> kinds;
  bool metafile = false;
};

std::optional<FileNameInfo> parse_filename(std::string_view name);

/// `YYYYMMDD_HHMMSS`, the session directory name used on the host side.
std::string session_stamp(WallTime start);

std::vector<std::string> column_schema(const SensorGroup& group);

struct FileHeader {
  int person_id = 0;
  WallTime start{};
  std::string watch_id;
  std::vector<SensorKind> kinds;
  std::int64_t interval_ms = 0;
  std::int64_t write_interval_ms = 0;
  /// Central-clock time at which the session started.
  std::int64_t t0_ms = 0;
  std::string package_version;
  std::vector<std::string> columns;
};

/// The first line of a measurement file, without the trailing LF.
std::string write_header(const Config& config, const SessionInfo& session,
                         const SensorGroup& group, std::int64_t t0_ms);
std::optional<FileHeader> parse_header(std::string_view line);

// ---------------------------------------------------------------------------
// Rows

using LatestSamples = std::array<std::optional<Sample>, kSensorKindCount>;

struct RowRecord {
  PrivacyLabel label = PrivacyLabel::kUnknown;
  std::int64_t t_ms = 0;
  /// One entry per group member, in member order.
  std::vector<bool> fresh;
  std::vector<std::optional<Sample>> cells;
};

/// Per-file memory of the last sequence number written for each member.
using WrittenSeqs = std::vector<std::optional<std::uint64_t>>;

/// Builds the row a writer tick emits for `group`, or nothing when no member
/// has a sample newer than `written`.
std::optional<RowRecord> compose_row(const SensorGroup& group, const LatestSamples& latest,
                                     const WrittenSeqs& written, std::int64_t now_ms,
                                     PrivacyLabel label);

/// CSV text of a row, including the trailing LF.
std::string format_row(const RowRecord& row, const SensorGroup& group);
/// Inverse of format_row for one line (without LF). Sensor times come back
/// rounded to whole milliseconds and values at their written precision.
std::optional<RowRecord> parse_row(std::string_view line, const SensorGroup& group);

/// Storage budget shared by all files of a device.
struct StorageBudget {
  std::uint64_t capacity = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t used = 0;

  bool try_reserve(std::uint64_t bytes) {
    if (bytes > capacity || used > capacity - bytes) return false;
    used += bytes;
    return true;
  }
};

/// Latest-value mailbox: a newer sample of a kind overwrites the older one.
/// Producers may post from any thread.
class SampleMailbox {
 public:
  void post(const Sample& sample);
  LatestSamples snapshot() const;
  void clear();

 private:
  mutable std::mutex mutex_;
  LatestSamples latest_{};
};

struct MeasurementFile {
  std::filesystem::path path;
  SensorGroup group;
  std::string header_line;
  std::uint64_t rows_written = 0;
  std::uint64_t bytes_written = 0;
  /// Fresh cells written per member, in member order.
  std::vector<std::uint64_t> fresh_cells;
};

struct TickResult {
  /// Rows written per file, in files() order.
  std::vector<std::size_t> rows;
  bool write_failed = false;
};

/// One recording session: the metafile plus one CSV file per sensor group.
/// Single owner; only the mailbox may be touched from other threads.
class Recorder {
 public:
  using RowObserver = std::function<void(const MeasurementFile&, const RowRecord&)>;

  Recorder(std::filesystem::path data_dir, Config config, SessionInfo session,
           std::int64_t t0_ms, std::shared_ptr<StorageBudget> budget = nullptr);
  ~Recorder();

  Recorder(const Recorder&) = delete;
  Recorder& operator=(const Recorder&) = delete;

  SampleMailbox& mailbox() { return mailbox_; }

  /// Writes one row per group that has fresh data. A failed write leaves the
  /// sequence bookkeeping untouched.
  TickResult writer_tick(std::int64_t now_ms, PrivacyLabel label);

  void flush();
  /// Closes every file. With `stop_ms`, the session end is recorded in the
  /// metafile.
  void close(std::optional<std::int64_t> stop_ms = std::nullopt);
  bool closed() const { return closed_; }

  const Config& config() const { return config_; }
  const SessionInfo& session() const { return session_; }
  const std::vector<MeasurementFile>& files() const { return files_; }
  const std::filesystem::path& metafile_path() const { return metafile_path_; }

  void set_row_observer(RowObserver observer) { observer_ = std::move(observer); }

 private:
  struct OpenFile {
    std::ofstream stream;
    WrittenSeqs written;
  };

  bool append(std::size_t index, const std::string& text);

  Config config_;
  SessionInfo session_;
  std::shared_ptr<StorageBudget> budget_;
  SampleMailbox mailbox_;
  std::vector<MeasurementFile> files_;
  std::vector<OpenFile> open_;
  std::filesystem::path metafile_path_;
  RowObserver observer_;
  bool closed_ = false;
};

/// Bytes needed to write `rows_per_second` rows of `bytes_per_row`.
double estimate_storage(double rows_per_second, double hours_per_day, double days,
                        double bytes_per_row);
/// Bytes needed to record `groups` for the given time, assuming one row per
/// readout interval.
double estimate_storage(const std::vector<SensorGroup>& groups, double hours_per_day,
                        double days, double bytes_per_row);
double estimate_storage(const Config& config, double hours_per_day, double days,
                        double bytes_per_row);

}  // namespace daqwear
