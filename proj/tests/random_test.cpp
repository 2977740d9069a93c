// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spectral/random.hpp"

#include <cmath>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

namespace spectral {
namespace {

TEST(Splitmix, KnownValues) {
  // Reference outputs of the splitmix64 finalizer for state increments of
  // the golden gamma starting from 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_NE(splitmix64(1), splitmix64(2));
}

TEST(HashTag, Fnv1a) {
  EXPECT_EQ(hash_tag(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hash_tag("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(DeriveSeed, DistinctAcrossTagsAndIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    seen.insert(derive_seed(7, "trial", i));
    seen.insert(derive_seed(7, "path", i));
    seen.insert(derive_seed(8, "trial", i));
  }
  EXPECT_EQ(seen.size(), 3000u);
}

TEST(NormalStream, Deterministic) {
  NormalStream a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs |= x != c.normal();
  }
  EXPECT_TRUE(differs);
}

TEST(NormalStream, UniformInOpenInterval) {
  NormalStream s(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(NormalStream, Moments) {
  NormalStream s(2024);
  const int n = 1000000;
  double sum = 0, sq = 0, fourth = 0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    sum += x;
    sq += x * x;
    fourth += x * x * x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(double(n)));
  EXPECT_LT(std::abs(var - 1.0), 0.01);
  // E x^4 = 3, Var x^4 = 96.
  EXPECT_LT(std::abs(fourth / n - 3.0), 4.0 * std::sqrt(96.0 / n));
}

TEST(GaussianMatrix, RowMajorOrder) {
  NormalStream a(5), b(5);
  const DenseMatrix g = gaussian_matrix(3, 4, a);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(g(i, j), b.normal());
  }
}

TEST(TrialSeeds, FirstDrawsNeverCollide) {
  std::set<std::tuple<double, double, double, double>> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    NormalStream s(derive_seed(99, "trial", i));
    const double a = s.normal(), b = s.normal(), c = s.normal(), d = s.normal();
    seen.emplace(a, b, c, d);
  }
  EXPECT_EQ(seen.size(), 10000u);
}

}  // namespace
}  // namespace spectral
