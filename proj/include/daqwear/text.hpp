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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the config, recorder and host modules.
namespace daqwear::text {

std::string_view trim(std::string_view s);

/// Splits on LF; a trailing CR on each line is dropped.
std::vector<std::string_view> split_lines(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

/// Whole-string integer parse; no sign prefix other than '-'.
std::optional<std::int64_t> parse_int(std::string_view s);

/// Whole-string finite double parse.
std::optional<double> parse_double(std::string_view s);

/// Shortest representation that parses back to the same double.
std::string format_shortest(double v);

/// Fixed-point with `decimals` digits; never prints "-0.000".
std::string format_fixed(double v, int decimals);

std::string zero_pad(std::int64_t v, int width);

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace daqwear::text
