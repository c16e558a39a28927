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

#if defined(DAQWEAR_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace daqwear::kernels::avx2 {

namespace {

void norm3(const double* x, const double* y, const double* z, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vz = _mm256_loadu_pd(z + i);
    __m256d sq = _mm256_mul_pd(vx, vx);
    sq = _mm256_add_pd(sq, _mm256_mul_pd(vy, vy));
    sq = _mm256_add_pd(sq, _mm256_mul_pd(vz, vz));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(sq));
  }
  for (; i < n; ++i) {
    const double sq = x[i] * x[i] + y[i] * y[i] + z[i] * z[i];
    out[i] = std::sqrt(sq);
  }
}

double horizontal(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double sum(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  double total = horizontal(acc);
  for (; i < n; ++i) total += v[i];
  return total;
}

double sum_sq_dev(const double* v, std::size_t n, double mean) {
  const __m256d m = _mm256_set1_pd(mean);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), m);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = horizontal(acc);
  for (; i < n; ++i) {
    const double d = v[i] - mean;
    total += d * d;
  }
  return total;
}

constexpr Table kTable{Isa::kAvx2, norm3, sum, sum_sq_dev};

}  // namespace

const Table* table() { return &kTable; }

}  // namespace daqwear::kernels::avx2

#else

namespace daqwear::kernels::avx2 {
const Table* table() { return nullptr; }
}  // namespace daqwear::kernels::avx2

#endif
