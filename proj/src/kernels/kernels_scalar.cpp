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

#include <cmath>

#include "daqwear/kernels.hpp"

namespace daqwear::kernels::scalar {

namespace {

void norm3(const double* x, const double* y, const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double sq = x[i] * x[i] + y[i] * y[i] + z[i] * z[i];
    out[i] = std::sqrt(sq);
  }
}

double sum(const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += v[i];
  return acc;
}

double sum_sq_dev(const double* v, std::size_t n, double mean) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - mean;
    acc += d * d;
  }
  return acc;
}

constexpr Table kTable{Isa::kScalar, norm3, sum, sum_sq_dev};

}  // namespace

const Table& table() { return kTable; }

}  // namespace daqwear::kernels::scalar
