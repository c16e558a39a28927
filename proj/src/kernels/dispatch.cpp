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

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "daqwear/kernels.hpp"

namespace daqwear::kernels {

namespace {

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return &scalar::table();
    case Isa::kAvx2: return avx2::table();
    case Isa::kNeon: return neon::table();
  }
  return nullptr;
}

const Table* detect() {
  if (const char* env = std::getenv("DAQWEAR_SIMD"); env && std::string(env) == "scalar") {
    return &scalar::table();
  }
  if (supported(Isa::kAvx2)) return avx2::table();
  if (supported(Isa::kNeon)) return neon::table();
  return &scalar::table();
}

std::atomic<const Table*>& slot() {
  static std::atomic<const Table*> current{detect()};
  return current;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel inputs differ in length");
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) {
  if (table_for(isa) == nullptr) return false;
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon: return true;  // compiled only for aarch64, where it is baseline
  }
  return false;
}

const Table& active() { return *slot().load(std::memory_order_acquire); }

bool force(Isa isa) {
  if (!supported(isa)) return false;
  slot().store(table_for(isa), std::memory_order_release);
  return true;
}

void norm3(std::span<const double> x, std::span<const double> y, std::span<const double> z,
           std::span<double> out) {
  require_same_size(x.size(), y.size());
  require_same_size(x.size(), z.size());
  require_same_size(x.size(), out.size());
  active().norm3(x.data(), y.data(), z.data(), out.data(), x.size());
}

double sum(std::span<const double> v) { return active().sum(v.data(), v.size()); }

double sum_sq_dev(std::span<const double> v, double mean) {
  return active().sum_sq_dev(v.data(), v.size(), mean);
}

std::optional<Moments> magnitude_moments(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> z) {
  if (x.empty()) return std::nullopt;
  std::vector<double> mag(x.size());
  norm3(x, y, z, mag);
  Moments m;
  m.count = mag.size();
  m.mean = sum(mag) / static_cast<double>(m.count);
  if (m.count > 1) {
    m.stddev = std::sqrt(sum_sq_dev(mag, m.mean) / static_cast<double>(m.count - 1));
  }
  return m;
}

}  // namespace daqwear::kernels
