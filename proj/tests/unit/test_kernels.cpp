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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "daqwear/kernels.hpp"

using namespace daqwear;

namespace {

std::vector<const kernels::Table*> variants() {
  std::vector<const kernels::Table*> out{&kernels::scalar::table()};
  if (kernels::supported(kernels::Isa::kAvx2)) out.push_back(kernels::avx2::table());
  if (kernels::supported(kernels::Isa::kNeon)) out.push_back(kernels::neon::table());
  return out;
}

struct Columns {
  std::vector<double> x, y, z;
};

Columns random_columns(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 5.0);
  Columns c;
  for (std::size_t i = 0; i < n; ++i) {
    c.x.push_back(d(rng));
    c.y.push_back(d(rng));
    c.z.push_back(9.81 + d(rng));
  }
  return c;
}

// Restores the dispatcher after a test forces a variant.
struct ActiveGuard {
  kernels::Isa saved = kernels::active().isa;
  ~ActiveGuard() { kernels::force(saved); }
};

}  // namespace

TEST(Kernels, ScalarReference) {
  const auto& t = kernels::scalar::table();
  const double x[] = {3.0, 0.0}, y[] = {4.0, 0.0}, z[] = {0.0, 9.81};
  double out[2];
  t.norm3(x, y, z, out, 2);
  EXPECT_EQ(out[0], 5.0);
  EXPECT_EQ(out[1], 9.81);
  const double v[] = {1.0, 2.0, 3.0, 4.0};
  EXPECT_EQ(t.sum(v, 4), 10.0);
  EXPECT_EQ(t.sum_sq_dev(v, 4, 2.5), 5.0);
  EXPECT_EQ(t.sum(v, 0), 0.0);
}

TEST(Kernels, VariantsMatchScalar) {
  const auto& ref = kernels::scalar::table();
  for (const kernels::Table* t : variants()) {
    SCOPED_TRACE(std::string(kernels::to_string(t->isa)));
    // Lengths around every lane boundary plus a long run.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 1000u, 100003u}) {
      const Columns c = random_columns(n, n + 1);
      std::vector<double> expected(n), got(n);
      ref.norm3(c.x.data(), c.y.data(), c.z.data(), expected.data(), n);
      t->norm3(c.x.data(), c.y.data(), c.z.data(), got.data(), n);
      ASSERT_EQ(got, expected) << n;

      const double s_ref = ref.sum(expected.data(), n);
      const double s = t->sum(expected.data(), n);
      // Only the summation order differs.
      ASSERT_NEAR(s, s_ref, 1e-12 * std::max(1.0, std::abs(s_ref)) * std::log2(n + 2.0));
      const double mean = n ? s_ref / static_cast<double>(n) : 0.0;
      const double d_ref = ref.sum_sq_dev(expected.data(), n, mean);
      ASSERT_NEAR(t->sum_sq_dev(expected.data(), n, mean), d_ref,
                  1e-12 * std::max(1.0, d_ref) * std::log2(n + 2.0));
    }
  }
}

TEST(Kernels, SpecialValues) {
  const double big = 1e153;
  for (const kernels::Table* t : variants()) {
    const double x[] = {big, -0.0, std::nan(""), 0.0, 1.0};
    const double y[] = {big, -0.0, 0.0, std::numeric_limits<double>::infinity(), 1.0};
    const double z[] = {0.0, 0.0, 0.0, 0.0, 1.0};
    double out[5];
    t->norm3(x, y, z, out, 5);
    EXPECT_DOUBLE_EQ(out[0], std::sqrt(2.0) * big);
    EXPECT_EQ(out[1], 0.0);
    EXPECT_TRUE(std::isnan(out[2]));
    EXPECT_TRUE(std::isinf(out[3]));
    EXPECT_EQ(out[4], std::sqrt(3.0));
  }
}

TEST(Kernels, DispatchAndForce) {
  ActiveGuard guard;
  EXPECT_TRUE(kernels::supported(kernels::Isa::kScalar));
  EXPECT_TRUE(kernels::force(kernels::Isa::kScalar));
  EXPECT_EQ(kernels::active().isa, kernels::Isa::kScalar);
#if defined(__x86_64__)
  EXPECT_FALSE(kernels::force(kernels::Isa::kNeon));
#endif
  EXPECT_EQ(kernels::to_string(kernels::Isa::kAvx2), "avx2");
}

TEST(Kernels, SpanWrappersCheckSizes) {
  std::vector<double> a(3), b(4), out(3);
  EXPECT_THROW(kernels::norm3(a, b, a, out), std::invalid_argument);
  EXPECT_NO_THROW(kernels::norm3(a, a, a, out));
}

TEST(Kernels, MagnitudeMoments) {
  ActiveGuard guard;
  EXPECT_FALSE(kernels::magnitude_moments({}, {}, {}));

  const std::vector<double> three(10, 3.0), four(10, 4.0), zero(10, 0.0);
  for (const kernels::Table* t : variants()) {
    kernels::force(t->isa);
    const auto m = kernels::magnitude_moments(three, four, zero);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->count, 10u);
    EXPECT_EQ(m->mean, 5.0);
    EXPECT_EQ(m->stddev, 0.0);

    const std::vector<double> g{9.81}, none{0.0};
    const auto single = kernels::magnitude_moments(none, none, g);
    ASSERT_TRUE(single);
    EXPECT_EQ(single->count, 1u);
    EXPECT_EQ(single->mean, 9.81);
    EXPECT_EQ(single->stddev, 0.0);
  }
}

TEST(Kernels, MomentsAgainstTwoPassOracle) {
  ActiveGuard guard;
  const Columns c = random_columns(5001, 99);
  double mean = 0.0;
  std::vector<double> g;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    g.push_back(std::sqrt(c.x[i] * c.x[i] + c.y[i] * c.y[i] + c.z[i] * c.z[i]));
    mean += g.back();
  }
  mean /= static_cast<double>(g.size());
  double ss = 0.0;
  for (double v : g) ss += (v - mean) * (v - mean);
  const double stddev = std::sqrt(ss / static_cast<double>(g.size() - 1));

  for (const kernels::Table* t : variants()) {
    kernels::force(t->isa);
    const auto m = kernels::magnitude_moments(c.x, c.y, c.z);
    ASSERT_TRUE(m);
    EXPECT_NEAR(m->mean, mean, 1e-12 * mean);
    EXPECT_NEAR(m->stddev, stddev, 1e-10 * stddev);
  }
}
