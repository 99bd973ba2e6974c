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

#include "satpath/serialization.h"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "satpath/generators.h"
#include "test_util.h"

namespace satpath {
namespace {

std::string SchemaMessage(const Json& j) {
  try {
    GameFromJson(j);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
    return e.what();
  }
  return "";
}

TEST(GameJsonTest, LayoutIsPlayerMajor) {
  const Json j = GameToJson(MatchingPennies());
  EXPECT_EQ(j["players"], 2);
  EXPECT_EQ(j["actions"], Json({2, 2}));
  EXPECT_EQ(j["payoffs"], Json({1, -1, -1, 1, -1, 1, 1, -1}));
}

TEST(GameJsonTest, RoundTrip) {
  Rng rng(1);
  const NormalFormGame game = testing::RandomGame({2, 3, 2}, rng);
  const NormalFormGame back = GameFromJson(Json::parse(GameToJson(game).dump()));
  EXPECT_EQ(back.action_counts(), game.action_counts());
  EXPECT_TRUE(std::equal(back.payoffs().begin(), back.payoffs().end(),
                         game.payoffs().begin(), game.payoffs().end()));
}

TEST(GameJsonTest, SchemaErrorsPointAtField) {
  EXPECT_NE(SchemaMessage(Json::parse(R"({"actions":[2],"payoffs":[1,2]})")).find("/players"),
            std::string::npos);
  EXPECT_NE(SchemaMessage(Json::parse(R"({"players":2,"actions":[2,"a"],"payoffs":[]})"))
                .find("/actions/1"),
            std::string::npos);
  EXPECT_NE(SchemaMessage(Json::parse(R"({"players":2,"actions":[2,2],"payoffs":[1,2]})"))
                .find("/payoffs"),
            std::string::npos);
  EXPECT_NE(SchemaMessage(Json::parse(R"({"players":1,"actions":[2],"payoffs":[1,null]})"))
                .find("/payoffs/1"),
            std::string::npos);
  EXPECT_NE(SchemaMessage(Json::parse("[1,2]")).find("expected an object"), std::string::npos);
}

TEST(ProfileJsonTest, RoundTripAndValidation) {
  const MixedProfile p({{0.25, 0.75}, {1.0, 0.0, 0.0}});
  EXPECT_TRUE(ProfileFromJson(ProfileToJson(p)).SameAs(p));
  EXPECT_THROW(ProfileFromJson(Json::parse("[[0.5, 0.6]]")), Error);
  EXPECT_THROW(ProfileFromJson(Json::parse("[[0.5, \"x\"]]")), Error);
}

TEST(PathJsonTest, RoundTrip) {
  PathRecord path;
  path.config = {0.01, GroupPartition({{0, 1}})};
  path.profiles = {MixedProfile({{1, 0}, {1, 0}}), MixedProfile({{0.5, 0.5}, {0.5, 0.5}})};
  path.per_step_satisfied = {{}, {0}};
  path.step_count = 1;
  path.terminal_is_equilibrium = true;
  const Json j = PathToJson(path);
  EXPECT_EQ(j["group_counts"], Json({0, 1}));
  const PathRecord back = PathFromJson(Json::parse(j.dump()));
  EXPECT_EQ(back.config.epsilon, 0.01);
  EXPECT_EQ(back.config.partition.groups(), path.config.partition.groups());
  EXPECT_EQ(back.per_step_satisfied, path.per_step_satisfied);
  EXPECT_EQ(back.step_count, 1u);
  EXPECT_TRUE(back.terminal_is_equilibrium);
  EXPECT_EQ(back.status, PathStatus::kEquilibrium);
  ASSERT_EQ(back.profiles.size(), 2u);
  EXPECT_TRUE(back.profiles[1].SameAs(path.profiles[1]));
  EXPECT_EQ(PathToJson(back).dump(), j.dump());
}

TEST(StochasticGameJsonTest, RoundTripIsExact) {
  Rng rng(2);
  const StochasticGame game = testing::RandomMarkovGame({2, 3}, 3, 0.85, rng);
  const Json j = StochasticGameToJson(game);
  EXPECT_TRUE(IsStochasticGameJson(j));
  EXPECT_FALSE(IsStochasticGameJson(GameToJson(MatchingPennies())));
  const StochasticGame back = StochasticGameFromJson(Json::parse(j.dump()));
  EXPECT_EQ(StochasticGameToJson(back).dump(), j.dump());
  for (int x = 0; x < 3; ++x) {
    for (std::size_t s = 0; s < 6; ++s) {
      EXPECT_EQ(back.TransitionRow(x, s), game.TransitionRow(x, s));
    }
  }
}

TEST(StochasticGameJsonTest, SchemaErrors) {
  Json j = StochasticGameToJson(TwoStateSwitchGame());
  j["transitions"][0][0] = Json({0.5, 0.4});
  EXPECT_THROW(StochasticGameFromJson(j), Error);
  Json k = StochasticGameToJson(TwoStateSwitchGame());
  k.erase("discounts");
  try {
    StochasticGameFromJson(k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/discounts"), std::string::npos);
  }
  EXPECT_THROW(KStepGameFromJson(StochasticGameToJson(TwoStateSwitchGame())), Error);
}

TEST(PolicyJsonTest, RoundTrip) {
  Rng rng(3);
  const auto pi = testing::RandomPolicy({2, 3}, 2, rng);
  const auto back = PolicyFromJson(Json::parse(PolicyToJson(pi).dump()));
  EXPECT_EQ(back.policies(), pi.policies());
}

TEST(KStepJsonTest, CompilationExportsIndexMap) {
  const Json j = KStepCompilationToJson(CompileKStep({TwoStateSwitchGame(), 1}), 1);
  ASSERT_EQ(j["state_index"].size(), 4u);
  EXPECT_EQ(j["state_index"][3]["state"], 1);
  EXPECT_EQ(j["state_index"][3]["history"], Json({1}));
  EXPECT_EQ(j["game"]["states"], 4);
}

TEST(DumpJsonTest, StableForEqualValues) {
  Rng a(4), b(4);
  EXPECT_EQ(DumpJson(GameToJson(testing::RandomGame({3, 3}, a))),
            DumpJson(GameToJson(testing::RandomGame({3, 3}, b))));
}

}  // namespace
}  // namespace satpath
