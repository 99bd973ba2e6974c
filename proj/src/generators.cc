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
#include <string>
#include <vector>

#include "satpath/rng.h"

namespace satpath {
namespace {

constexpr std::uint64_t kPayoffStream = 1;
constexpr std::uint64_t kKernelStream = 2;

std::size_t CheckedJointCount(std::span<const int> action_counts) {
  Require(!action_counts.empty(), ErrorKind::kInvalidArgument,
          "at least one player is required");
  double joint = 1;
  for (int m : action_counts) {
    Require(m >= 1, ErrorKind::kInvalidArgument, "action counts must be >= 1");
    joint *= m;
  }
  Require(joint * action_counts.size() <= kMaxTensorEntries, ErrorKind::kBudget,
          "payoff tensor exceeds the entry budget");
  return static_cast<std::size_t>(joint);
}

}  // namespace

std::vector<int> GeneratorParams::ActionCounts() const {
  Require(players >= 1, ErrorKind::kInvalidArgument, "players must be >= 1");
  if (actions.empty()) return std::vector<int>(players, 2);
  if (actions.size() == 1) return std::vector<int>(players, actions[0]);
  Require(static_cast<int>(actions.size()) == players, ErrorKind::kInvalidArgument,
          "need one action count per player");
  return actions;
}

double RoundedPayoff(Rng& rng) {
  return std::round(rng.Uniform(-1.0, 1.0) * 1e6) / 1e6;
}

NormalFormGame RandomNormalFormGame(std::span<const int> action_counts,
                                    std::uint64_t seed) {
  const std::size_t joint = CheckedJointCount(action_counts);
  Rng rng(seed, {kPayoffStream});
  std::vector<double> payoffs(joint * action_counts.size());
  for (double& v : payoffs) v = RoundedPayoff(rng);
  return NormalFormGame({action_counts.begin(), action_counts.end()},
                        std::move(payoffs));
}

StochasticGame RandomStochasticGame(std::span<const int> action_counts,
                                    int num_states, double discount,
                                    std::uint64_t seed) {
  const std::size_t joint = CheckedJointCount(action_counts);
  Require(num_states >= 1, ErrorKind::kInvalidArgument, "states must be >= 1");
  Require(static_cast<double>(num_states) * joint * num_states <= kMaxTensorEntries,
          ErrorKind::kBudget, "transition tensor exceeds the entry budget");
  const int n = static_cast<int>(action_counts.size());
  Rng payoff_rng(seed, {kPayoffStream});
  Rng kernel_rng(seed, {kKernelStream});
  std::vector<std::vector<std::vector<double>>> transitions(num_states);
  std::vector<std::vector<std::vector<double>>> payoffs(num_states);
  for (int x = 0; x < num_states; ++x) {
    for (std::size_t s = 0; s < joint; ++s) {
      transitions[x].push_back(kernel_rng.SimplexPoint(num_states));
      std::vector<double> stage(n);
      for (double& v : stage) v = RoundedPayoff(payoff_rng);
      payoffs[x].push_back(std::move(stage));
    }
  }
  return StochasticGame({action_counts.begin(), action_counts.end()}, num_states,
                        transitions, payoffs, std::vector<double>(n, discount));
}

NormalFormGame MatchingPennies() {
  // Row wins on a match.
  return NormalFormGame({2, 2}, {1, -1, -1, 1, -1, 1, 1, -1});
}

NormalFormGame RockPaperScissors() {
  const std::vector<double> row = {0, -1, 1, 1, 0, -1, -1, 1, 0};
  std::vector<double> payoffs = row;
  for (double v : row) payoffs.push_back(-v);
  return NormalFormGame({3, 3}, std::move(payoffs));
}

NormalFormGame AllZeroGame(std::span<const int> action_counts) {
  const std::size_t joint = CheckedJointCount(action_counts);
  return NormalFormGame({action_counts.begin(), action_counts.end()},
                        std::vector<double>(joint * action_counts.size(), 0.0));
}

StochasticGame TwoStateSwitchGame() {
  const std::vector<std::vector<std::vector<double>>> transitions = {
      {{0.75, 0.25}, {0.0, 1.0}},
      {{0.25, 0.75}, {1.0, 0.0}},
  };
  const std::vector<std::vector<std::vector<double>>> payoffs = {
      {{1.0}, {0.0}},
      {{0.0}, {1.0}},
  };
  return StochasticGame({2}, 2, transitions, payoffs, {0.5});
}

std::vector<std::string> GeneratorKinds() {
  return {"normal_form",         "stochastic", "kstep",           "matching_pennies",
          "rock_paper_scissors", "all_zero",   "two_state_switch"};
}

GeneratedGame GenerateGame(const std::string& kind, const GeneratorParams& params,
                           std::uint64_t seed) {
  if (kind == "normal_form") {
    return RandomNormalFormGame(params.ActionCounts(), seed);
  }
  if (kind == "stochastic") {
    return RandomStochasticGame(params.ActionCounts(), params.states,
                                params.discount, seed);
  }
  if (kind == "kstep") {
    KStepGame kgame{RandomStochasticGame(params.ActionCounts(), params.states,
                                         params.discount, seed),
                    params.k};
    Require(params.k >= 1, ErrorKind::kInvalidArgument, "k must be >= 1");
    double states = kgame.base.num_states();
    for (int t = 0; t < params.k; ++t) states *= kgame.base.num_joint_actions();
    Require(states <= kMaxCompiledStates, ErrorKind::kBudget,
            "compiled state space exceeds the budget");
    return kgame;
  }
  if (kind == "matching_pennies") return MatchingPennies();
  if (kind == "rock_paper_scissors") return RockPaperScissors();
  if (kind == "all_zero") return AllZeroGame(params.ActionCounts());
  if (kind == "two_state_switch") return TwoStateSwitchGame();
  Fail(ErrorKind::kInvalidArgument, "unknown game kind '" + kind + "'");
}

Json GeneratedGameToJson(const GeneratedGame& game) {
  if (const auto* g = std::get_if<NormalFormGame>(&game)) return GameToJson(*g);
  if (const auto* g = std::get_if<StochasticGame>(&game)) {
    return StochasticGameToJson(*g);
  }
  return KStepGameToJson(std::get<KStepGame>(game));
}

}  // namespace satpath
