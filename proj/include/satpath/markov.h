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

#ifndef SATPATH_MARKOV_H_
#define SATPATH_MARKOV_H_

#include <cstddef>
#include <span>
#include <vector>

#include "satpath/common.h"
#include "satpath/game.h"
#include "satpath/rng.h"

namespace satpath {

inline constexpr double kKernelTolerance = 1e-9;
inline constexpr double kDefaultEvalTolerance = 1e-9;
inline constexpr std::size_t kMaxCompiledStates = 1'000'000;

// A finite-state discounted stochastic game.  Joint actions are indexed as in
// NormalFormGame (player 0 slowest).  The kernel is stored sparsely: only
// next states with positive probability are kept for each (state, joint
// action) row.
class StochasticGame {
 public:
  struct Transition {
    int next;
    double prob;
  };

  // Dense form: transitions[x][j][y], payoffs[x][j][i].
  StochasticGame(std::vector<int> action_counts, int num_states,
                 const std::vector<std::vector<std::vector<double>>>& transitions,
                 const std::vector<std::vector<std::vector<double>>>& payoffs,
                 std::vector<double> discounts);

  // Sparse form: rows[x * J + j] lists the positive-probability successors,
  // payoffs[(x * J + j) * N + i].
  StochasticGame(std::vector<int> action_counts, int num_states,
                 std::vector<std::vector<Transition>> rows,
                 std::vector<double> payoffs, std::vector<double> discounts);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_states() const { return num_states_; }
  const std::vector<int>& action_counts() const { return action_counts_; }
  int num_actions(int player) const { return action_counts_[player]; }
  std::size_t num_joint_actions() const { return num_joint_; }
  int ActionOf(std::size_t joint, int player) const {
    return static_cast<int>(joint / strides_[player]) % action_counts_[player];
  }
  std::size_t JointIndex(std::span<const int> actions) const;

  std::span<const Transition> transitions(int state, std::size_t joint) const {
    const std::size_t row = state * num_joint_ + joint;
    return std::span<const Transition>(entries_.data() + row_start_[row],
                                       row_start_[row + 1] - row_start_[row]);
  }
  std::vector<double> TransitionRow(int state, std::size_t joint) const;
  double payoff(int state, std::size_t joint, int player) const {
    return payoffs_[(state * num_joint_ + joint) * action_counts_.size() + player];
  }
  double discount(int player) const { return discounts_[player]; }
  const std::vector<double>& discounts() const { return discounts_; }
  double MaxAbsPayoff() const;

  // The stage game at `state` as a normal-form game.
  NormalFormGame StageGame(int state) const;

 private:
  void Init();

  std::vector<int> action_counts_;
  std::vector<std::size_t> strides_;
  std::size_t num_joint_ = 1;
  int num_states_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<Transition> entries_;
  std::vector<double> payoffs_;
  std::vector<double> discounts_;
};

// policy(i, x) is player i's action distribution at state x.
class StationaryPolicyProfile {
 public:
  StationaryPolicyProfile() = default;
  explicit StationaryPolicyProfile(
      std::vector<std::vector<std::vector<double>>> policies);

  static StationaryPolicyProfile Uniform(std::span<const int> action_counts,
                                         int num_states);
  // actions[i][x] is the action player i plays at state x.
  static StationaryPolicyProfile Pure(std::span<const int> action_counts,
                                      const std::vector<std::vector<int>>& actions);

  int num_players() const { return static_cast<int>(policies_.size()); }
  int num_states() const {
    return policies_.empty() ? 0 : static_cast<int>(policies_[0].size());
  }
  const std::vector<double>& policy(int player, int state) const {
    return policies_[player][state];
  }
  const std::vector<std::vector<double>>& player_policy(int player) const {
    return policies_[player];
  }
  const std::vector<std::vector<std::vector<double>>>& policies() const {
    return policies_;
  }
  // The per-player mixtures at one state.
  MixedProfile AtState(int state) const;

  StationaryPolicyProfile WithPlayer(int player,
                                     std::vector<std::vector<double>> policy) const;
  // Every per-state distribution of `player` equal within kSimplexTolerance.
  bool SamePlayerPolicy(const StationaryPolicyProfile& other, int player) const;
  bool FitsGame(const StochasticGame& game) const;

 private:
  std::vector<std::vector<std::vector<double>>> policies_;
};

void RequireFits(const StochasticGame& game, const StationaryPolicyProfile& pi);

// values[i][x]: discounted value of player i from state x.
struct ValueTable {
  std::vector<std::vector<double>> values;
};

// f -> E_{s~pi(x)}[g_i(x,s)] + gamma_i E_{s~pi(x), y~P(x,s)}[f(y)], computed
// with exact finite sums.
std::vector<double> ApplyValueOperator(const StochasticGame& game,
                                       const StationaryPolicyProfile& pi,
                                       int player, std::span<const double> values);

// Fixed point of the value operator by iteration from zero.  Stops once the
// sup-norm change is at most tol * (1 - gamma) / gamma, so the result is
// within tol of the true value; a single pass when gamma == 0.
std::vector<double> EvaluatePolicy(const StochasticGame& game,
                                   const StationaryPolicyProfile& pi, int player,
                                   double tol);
ValueTable EvaluateAll(const StochasticGame& game,
                       const StationaryPolicyProfile& pi, double tol);

struct MdpSolution {
  std::vector<double> values;
  std::vector<int> policy;  // greedy action per state, lowest index on ties
};

// Value iteration on the MDP that `player` faces when every other player's
// policy in `pi` is held fixed.  The player's own entries in `pi` are ignored.
MdpSolution InducedMdpBestResponse(const StochasticGame& game,
                                   const StationaryPolicyProfile& pi, int player,
                                   double tol);
std::vector<double> InducedMdpBestValue(const StochasticGame& game,
                                        const StationaryPolicyProfile& pi,
                                        int player, double tol);

// max over players and states of (optimal value - achieved value), >= 0.
double MarkovResidual(const StochasticGame& game,
                      const StationaryPolicyProfile& pi, double tol);

// Players whose value is within epsilon of their induced-MDP optimum at every
// state.  Both sides carry up to tol of numerical error, so the comparison
// allows 2 * tol on top of epsilon.
std::vector<int> StationarySatisfiedPlayers(const StochasticGame& game,
                                            const StationaryPolicyProfile& pi,
                                            double epsilon, double tol);
bool IsMarkovEpsEquilibrium(const StochasticGame& game,
                            const StationaryPolicyProfile& pi, double epsilon,
                            double tol);

// Sub-game among the players outside `frozen_players`, with kernel Q and
// payoffs v_i taken as exact expectations over the frozen players' per-state
// mixtures.  Sub-game player k is free_players[k].
struct FrozenSubgame {
  StochasticGame game;
  std::vector<int> free_players;
};

FrozenSubgame FreezePlayersStochastic(const StochasticGame& game,
                                      const StationaryPolicyProfile& pi,
                                      std::span<const int> frozen_players);

StationaryPolicyProfile EmbedFreePolicies(const StationaryPolicyProfile& pi,
                                          std::span<const int> free_players,
                                          const StationaryPolicyProfile& sub);

// A game whose policies may condition on the last k joint actions.
struct KStepGame {
  StochasticGame base;
  int k = 1;
};

// A compiled state: the base state plus the last k joint actions, most recent
// first.
struct KStepState {
  int state = 0;
  std::vector<std::size_t> history;
};

struct KStepCompilation {
  StochasticGame game;
  std::vector<KStepState> states;  // index map, compiled index -> (x, history)
};

// Stationary game over X x (joint actions)^k.  Compiled states are indexed
// lexicographically with x slowest, then s^-1, ..., s^-k.  The kernel moves
// the history deterministically and draws the base state from P; payoffs
// ignore the history.  Throws kBudget beyond 1e6 compiled states.
KStepCompilation CompileKStep(const KStepGame& kgame);

std::size_t CompiledStateIndex(const StochasticGame& base, int k, int state,
                               std::span<const std::size_t> history);

// A policy over base states, repeated for every history.
StationaryPolicyProfile LiftHistoryBlind(const KStepCompilation& compiled,
                                         const StationaryPolicyProfile& pi);

// One transition of the game under `pi`; returns the next state and stores
// the sampled joint action.
int SimulateStep(const StochasticGame& game, const StationaryPolicyProfile& pi,
                 int state, Rng& rng, std::size_t* joint);

}  // namespace satpath

#endif  // SATPATH_MARKOV_H_
