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
#include <optional>
#include <span>
#include <string_view>

// Data-parallel reductions over per-row sensor vectors. Each kernel has a
// scalar reference and SIMD variants; the variant is picked once at runtime
// from the CPU's capabilities (override with DAQWEAR_SIMD=scalar).
namespace daqwear::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct Table {
  Isa isa;
  /// out[i] = sqrt(x[i]^2 + y[i]^2 + z[i]^2)
  void (*norm3)(const double* x, const double* y, const double* z, double* out, std::size_t n);
  double (*sum)(const double* v, std::size_t n);
  /// Sum of (v[i] - mean)^2.
  double (*sum_sq_dev)(const double* v, std::size_t n, double mean);
};

namespace scalar {
const Table& table();
}
namespace avx2 {
/// nullptr when not compiled in.
const Table* table();
}
namespace neon {
const Table* table();
}

/// Whether the running CPU can execute `isa`.
bool supported(Isa isa);

/// The table used by the convenience wrappers below.
const Table& active();
/// Forces a variant (tests, benchmarking). Returns false if unsupported.
bool force(Isa isa);

void norm3(std::span<const double> x, std::span<const double> y, std::span<const double> z,
           std::span<double> out);
double sum(std::span<const double> v);
double sum_sq_dev(std::span<const double> v, double mean);

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  /// Sample standard deviation (n - 1 denominator); 0 for a single value.
  double stddev = 0.0;
};

/// Mean and standard deviation of |(x, y, z)| over all rows; nullopt when
/// there are no rows.
std::optional<Moments> magnitude_moments(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> z);

}  // namespace daqwear::kernels
