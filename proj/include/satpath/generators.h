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

#ifndef SATPATH_GENERATORS_H_
#define SATPATH_GENERATORS_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "satpath/game.h"
#include "satpath/markov.h"
#include "satpath/serialization.h"

namespace satpath {

// Instance parameters.  An empty `actions` means two actions per player.
struct GeneratorParams {
  int players = 2;
  std::vector<int> actions;
  int states = 2;
  int k = 1;
  double discount = 0.9;

  std::vector<int> ActionCounts() const;
};

// Payoffs drawn uniformly from [-1, 1] and rounded to a multiple of 1e-6.
double RoundedPayoff(Rng& rng);

NormalFormGame RandomNormalFormGame(std::span<const int> action_counts,
                                    std::uint64_t seed);
// Transition rows are uniform points on the simplex.
StochasticGame RandomStochasticGame(std::span<const int> action_counts,
                                    int num_states, double discount,
                                    std::uint64_t seed);

NormalFormGame MatchingPennies();
NormalFormGame RockPaperScissors();
NormalFormGame AllZeroGame(std::span<const int> action_counts);

// One player, two states, two actions, discount 1/2.  Action 0 keeps the
// state with probability 3/4; action 1 always switches it.  The payoff is 1
// when the action index equals the state index and 0 otherwise.
StochasticGame TwoStateSwitchGame();

using GeneratedGame = std::variant<NormalFormGame, StochasticGame, KStepGame>;

// `kind` is one of: normal_form, stochastic, kstep, matching_pennies,
// rock_paper_scissors, all_zero, two_state_switch.
GeneratedGame GenerateGame(const std::string& kind, const GeneratorParams& params,
                           std::uint64_t seed);
std::vector<std::string> GeneratorKinds();
Json GeneratedGameToJson(const GeneratedGame& game);

}  // namespace satpath

#endif  // SATPATH_GENERATORS_H_
