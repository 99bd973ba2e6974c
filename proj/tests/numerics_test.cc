// Copyright 2026 The Satpath Authors
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
#include <numeric>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "satpath/linalg.h"
#include "satpath/rng.h"

namespace satpath {
namespace {

TEST(RngTest, Reproducible) {
  Rng a(123, {4, 5}), b(123, {4, 5}), c(123, {4, 6});
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const double x = a.Uniform01();
    EXPECT_EQ(x, b.Uniform01());
    differs |= x != c.Uniform01();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 50; ++s) {
    for (std::uint64_t k = 0; k < 50; ++k) seen.insert(DeriveSeed(s, {k}));
  }
  EXPECT_EQ(seen.size(), 2500u);
}

TEST(RngTest, RangesAndSimplex) {
  Rng rng(9);
  std::vector<int> hits(5, 0);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.Uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    hits[rng.Below(5)]++;
  }
  for (int h : hits) EXPECT_NEAR(h, 2000, 200);
  for (int k = 0; k < 100; ++k) {
    const auto p = rng.SimplexPoint(4);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    for (double v : p) EXPECT_GE(v, 0.0);
  }
  EXPECT_EQ(rng.Categorical({0.0, 1.0, 0.0}), 1);
}

TEST(LinalgTest, SolveSquare) {
  Matrix a(3, 3);
  const double m[3][3] = {{0, 2, 1}, {1, 1, 1}, {2, 0, 3}};
  for (int r = 0; r < 3; ++r) for (int c = 0; c < 3; ++c) a(r, c) = m[r][c];
  // x = (1, 2, 3).
  const auto x = SolveSquare(a, {7, 6, 11});
  ASSERT_TRUE(x.has_value());
  EXPECT_NEAR((*x)[0], 1, 1e-14);
  EXPECT_NEAR((*x)[1], 2, 1e-14);
  EXPECT_NEAR((*x)[2], 3, 1e-14);
  Matrix singular(2, 2);
  singular(0, 0) = 1, singular(0, 1) = 2, singular(1, 0) = 2, singular(1, 1) = 4;
  EXPECT_FALSE(SolveSquare(singular, {1, 2}).has_value());
}

TEST(LinalgTest, SolveConsistent) {
  Matrix a(3, 2);
  a(0, 0) = 1, a(0, 1) = 1, a(1, 0) = 1, a(1, 1) = -1, a(2, 0) = 2, a(2, 1) = 0;
  const auto x = SolveConsistent(a, {3, 1, 4});
  ASSERT_TRUE(x.has_value());
  EXPECT_NEAR((*x)[0], 2, 1e-12);
  EXPECT_NEAR((*x)[1], 1, 1e-12);
  EXPECT_FALSE(SolveConsistent(a, {3, 1, 5}).has_value());
}

TEST(LinalgTest, Newton) {
  const ResidualFn f = [](std::span<const double> x, std::span<double> out) {
    out[0] = x[0] * x[0] - 2;
    out[1] = x[0] * x[1] - 1;
  };
  const auto root = NewtonSolve(f, std::vector<double>{1, 1}, {});
  ASSERT_TRUE(root.has_value());
  EXPECT_NEAR((*root)[0], std::sqrt(2.0), 1e-12);
  EXPECT_NEAR((*root)[1], 1 / std::sqrt(2.0), 1e-12);
}

}  // namespace
}  // namespace satpath
