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

#include "satpath/experiment.h"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "satpath/dynamics.h"
#include "satpath/generators.h"
#include "satpath/markov_dynamics.h"
#include "test_util.h"

namespace satpath {
namespace {

ExperimentConfig SmallConfig(ExperimentKind kind) {
  ExperimentConfig config;
  config.kind = kind;
  config.seeds = {3, 1, 2, 0};
  config.max_states = 2;
  config.episodes = 5000;
  return config;
}

TEST(ExperimentConfigTest, Validation) {
  ExperimentConfig config;
  EXPECT_THROW(config.Validate(), Error);
  config.seeds = {1};
  EXPECT_NO_THROW(config.Validate());
  config.min_actions = 4;
  EXPECT_THROW(config.Validate(), Error);
  config = SmallConfig(ExperimentKind::kKStepRoundtrip);
  config.k = 9;
  EXPECT_THROW(config.Validate(), Error);
  config = SmallConfig(ExperimentKind::kNormalFormPath);
  const ExperimentConfig back = ExperimentConfigFromJson(ExperimentConfigToJson(config));
  EXPECT_EQ(ExperimentConfigToJson(back).dump(), ExperimentConfigToJson(config).dump());
  EXPECT_THROW(ExperimentConfigFromJson(Json::parse(R"({"kind":"normal_form_path"})")), Error);
  EXPECT_THROW(ExperimentKindFromName("bogus"), Error);
}

TEST(QuantilesTest, LinearInterpolation) {
  const LengthQuantiles q = Quantiles({4, 1, 3, 2, 5});
  EXPECT_EQ(q.min, 1);
  EXPECT_EQ(q.q25, 2);
  EXPECT_EQ(q.median, 3);
  EXPECT_EQ(q.q75, 4);
  EXPECT_EQ(q.max, 5);
  EXPECT_EQ(Quantiles({1, 2}).median, 1.5);
}

TEST(ChiSquareTest, MatchesClosedFormForTwoDegrees) {
  // With two degrees of freedom the upper tail is exp(-x / 2).
  const ChiSquareResult r = ChiSquareGoodnessOfFit({30, 40, 30}, {0.25, 0.5, 0.25});
  const double x = 25.0 / 25 + 100.0 / 50 + 25.0 / 25;
  EXPECT_NEAR(r.statistic, x, 1e-12);
  EXPECT_EQ(r.dof, 2);
  EXPECT_NEAR(r.p_value, std::exp(-x / 2), 1e-12);
}

TEST(ChiSquareTest, PoolsSparseCellsAndRejectsImpossible) {
  const ChiSquareResult pooled = ChiSquareGoodnessOfFit({50, 48, 1, 1}, {0.5, 0.48, 0.01, 0.01});
  EXPECT_EQ(pooled.dof, 1);
  EXPECT_EQ(ChiSquareGoodnessOfFit({10, 1}, {1.0, 0.0}).p_value, 0.0);
}

TEST(ExactHistoryDistributionTest, SumsToOneAndMatchesHandComputation) {
  const StochasticGame game = TwoStateSwitchGame();
  const auto pi = StationaryPolicyProfile::Pure(game.action_counts(), {{0, 0}});
  const auto dist = ExactHistoryDistribution(game, 1, pi, 0, 1);
  // From state 0, action 0: stay with 3/4, move with 1/4.
  ASSERT_EQ(dist.size(), 2u);
  EXPECT_EQ(dist.at({0, {0}}), 0.75);
  EXPECT_EQ(dist.at({1, {0}}), 0.25);
  Rng rng(1);
  const StochasticGame random = testing::RandomMarkovGame({2, 2}, 3, 0.5, rng);
  double total = 0;
  for (const auto& [key, p] : ExactHistoryDistribution(
           random, 2, testing::RandomPolicy({2, 2}, 3, rng), 1, 5)) {
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(RunExperimentTest, NormalFormPathsRevalidate) {
  const RunReport report = RunExperiment(SmallConfig(ExperimentKind::kNormalFormPath));
  ASSERT_EQ(report.records.size(), 4u);
  int successes = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const SeedRecord& r = report.records[k];
    EXPECT_EQ(r.seed, k);
    successes += r.terminal_is_equilibrium;
    const NormalFormGame game = GameFromJson(r.detail["game"]);
    EXPECT_TRUE(ValidatePath(game, PathFromJson(r.detail["path"])));
  }
  EXPECT_DOUBLE_EQ(report.success_rate, successes / 4.0);
}

TEST(RunExperimentTest, StochasticPathsRevalidate) {
  const RunReport report = RunExperiment(SmallConfig(ExperimentKind::kStochasticPath));
  for (const SeedRecord& r : report.records) {
    const StochasticGame game = StochasticGameFromJson(r.detail["game"]);
    EXPECT_TRUE(ValidateStochasticPath(game, StochasticPathFromJson(r.detail["path"])));
  }
}

TEST(RunExperimentTest, ReportsAreIndependentOfThreadCount) {
  for (auto kind : {ExperimentKind::kNormalFormPath, ExperimentKind::kStochasticPath,
                    ExperimentKind::kTopologyCheck, ExperimentKind::kKStepRoundtrip}) {
    ExperimentConfig config = SmallConfig(kind);
    config.threads = 1;
    const std::string one = DumpJson(ReportToJson(RunExperiment(config)));
    config.threads = 3;
    config.seeds = {0, 1, 2, 3};
    EXPECT_EQ(DumpJson(ReportToJson(RunExperiment(config))), one) << ExperimentKindName(kind);
  }
}

TEST(RunExperimentTest, CsvProjection) {
  const RunReport report = RunExperiment(SmallConfig(ExperimentKind::kTopologyCheck));
  const std::string csv = ReportToCsv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "seed,kind,steps,residual,success,millis");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(csv.find("topology_check") != std::string::npos, true);
}

}  // namespace
}  // namespace satpath
