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

#include "satpath/generators.h"

#include <cmath>
#include <variant>

#include "gtest/gtest.h"

namespace satpath {
namespace {

TEST(GeneratorsTest, MatchingPenniesTensor) {
  const NormalFormGame mp = MatchingPennies();
  // Row wins on a match, column on a mismatch.
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double row = a == b ? 1.0 : -1.0;
      EXPECT_EQ(mp.payoff(0, a * 2 + b), row);
      EXPECT_EQ(mp.payoff(1, a * 2 + b), -row);
    }
  }
}

TEST(GeneratorsTest, RockPaperScissorsIsZeroSumCyclic) {
  const NormalFormGame rps = RockPaperScissors();
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(rps.payoff(0, a * 3 + a), 0.0);
    // a beats (a + 2) mod 3.
    EXPECT_EQ(rps.payoff(0, a * 3 + (a + 2) % 3), 1.0);
    for (int b = 0; b < 3; ++b) EXPECT_EQ(rps.payoff(0, a * 3 + b), -rps.payoff(1, a * 3 + b));
  }
}

TEST(GeneratorsTest, AllZero) {
  const std::vector<int> counts = {3, 2, 4};
  const NormalFormGame game = AllZeroGame(counts);
  for (double v : game.payoffs()) EXPECT_EQ(v, 0.0);
}

TEST(GeneratorsTest, RandomPayoffsAreRoundedAndBounded) {
  const NormalFormGame game = RandomNormalFormGame(std::vector<int>{3, 3, 3}, 5);
  for (double v : game.payoffs()) {
    EXPECT_LE(std::abs(v), 1.0);
    EXPECT_NEAR(v * 1e6, std::round(v * 1e6), 1e-6);
  }
}

TEST(GeneratorsTest, SameSeedSameJson) {
  GeneratorParams params;
  params.players = 3;
  params.actions = {2, 3, 2};
  params.states = 3;
  for (const auto& kind : {"normal_form", "stochastic", "kstep"}) {
    EXPECT_EQ(GeneratedGameToJson(GenerateGame(kind, params, 77)).dump(),
              GeneratedGameToJson(GenerateGame(kind, params, 77)).dump());
    EXPECT_NE(GeneratedGameToJson(GenerateGame(kind, params, 77)).dump(),
              GeneratedGameToJson(GenerateGame(kind, params, 78)).dump());
  }
}

TEST(GeneratorsTest, KindsAndErrors) {
  GeneratorParams params;
  for (const auto& kind : GeneratorKinds()) EXPECT_NO_THROW(GenerateGame(kind, params, 0));
  EXPECT_TRUE(std::holds_alternative<KStepGame>(GenerateGame("kstep", params, 0)));
  EXPECT_THROW(GenerateGame("nope", params, 0), Error);
  params.players = 8;
  params.actions = {10};
  EXPECT_THROW(GenerateGame("normal_form", params, 0), Error);
  GeneratorParams deep;
  deep.k = 12;
  EXPECT_THROW(GenerateGame("kstep", deep, 0), Error);
}

}  // namespace
}  // namespace satpath
