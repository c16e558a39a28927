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

#include "daqwear/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace daqwear::kernels::neon {

namespace {

void norm3(const double* x, const double* y, const double* z, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    const float64x2_t vz = vld1q_f64(z + i);
    float64x2_t sq = vmulq_f64(vx, vx);
    sq = vaddq_f64(sq, vmulq_f64(vy, vy));
    sq = vaddq_f64(sq, vmulq_f64(vz, vz));
    vst1q_f64(out + i, vsqrtq_f64(sq));
  }
  for (; i < n; ++i) {
    const double sq = x[i] * x[i] + y[i] * y[i] + z[i] * z[i];
    out[i] = std::sqrt(sq);
  }
}

double sum(const double* v, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(v + i));
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) total += v[i];
  return total;
}

double sum_sq_dev(const double* v, std::size_t n, double mean) {
  const float64x2_t m = vdupq_n_f64(mean);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(v + i), m);
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    const double d = v[i] - mean;
    total += d * d;
  }
  return total;
}

constexpr Table kTable{Isa::kNeon, norm3, sum, sum_sq_dev};

}  // namespace

const Table* table() { return &kTable; }

}  // namespace daqwear::kernels::neon

#else

namespace daqwear::kernels::neon {
const Table* table() { return nullptr; }
}  // namespace daqwear::kernels::neon

#endif
