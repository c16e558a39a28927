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
#include <map>
#include <string>
#include <string_view>

namespace daqwear::testkit {

/// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Relative path -> file content for every regular file under `root`.
std::map<std::string, std::string> tree_contents(const std::filesystem::path& root);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// Digest of a whole tree (paths and contents).
std::uint64_t tree_digest(const std::filesystem::path& root);

std::string golden(std::string_view name);

// Independent geodesy used as oracles.

/// Vincenty inverse solution on the WGS84 ellipsoid, meters.
double vincenty_m(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);
/// Great-circle distance via the 3-D chord between points on a sphere.
double chord_arc_m(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg,
                   double radius_m = 6'371'000.0);

}  // namespace daqwear::testkit
