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

#include "satpath/markov.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace satpath {
namespace {

struct SparseRow {
  std::vector<std::pair<int, double>> entries;
};

// Joint-action probabilities at `state`, skipping the per-player factor of
// `skip_player` when it is >= 0.
std::vector<double> JointProbabilities(const StochasticGame& game,
                                       const StationaryPolicyProfile& pi,
                                       int state, int skip_player = -1) {
  const int n = game.num_players();
  std::vector<double> probs(game.num_joint_actions());
  for (std::size_t j = 0; j < probs.size(); ++j) {
    double prob = 1.0;
    for (int p = 0; p < n && prob != 0.0; ++p) {
      if (p != skip_player) prob *= pi.policy(p, state)[game.ActionOf(j, p)];
    }
    probs[j] = prob;
  }
  return probs;
}

SparseRow MergeRow(std::map<int, double>& acc) {
  SparseRow row;
  for (const auto& [y, w] : acc) {
    if (w != 0.0) row.entries.emplace_back(y, w);
  }
  return row;
}

// Expected stage payoff and state-to-state kernel of a fixed profile.
struct MarkovChain {
  std::vector<double> reward;
  std::vector<SparseRow> kernel;
};

MarkovChain InducedChain(const StochasticGame& game,
                         const StationaryPolicyProfile& pi, int player) {
  MarkovChain chain;
  chain.reward.assign(game.num_states(), 0.0);
  chain.kernel.resize(game.num_states());
  for (int x = 0; x < game.num_states(); ++x) {
    const auto probs = JointProbabilities(game, pi, x);
    std::map<int, double> acc;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (probs[j] == 0.0) continue;
      chain.reward[x] += probs[j] * game.payoff(x, j, player);
      for (const auto& t : game.transitions(x, j)) acc[t.next] += probs[j] * t.prob;
    }
    chain.kernel[x] = MergeRow(acc);
  }
  return chain;
}

// The stopping threshold on successive iterates that bounds the distance to
// the fixed point by tol.
double StopThreshold(double gamma, double tol) {
  return tol * (1.0 - gamma) / gamma;
}

void RequirePlayer(const StochasticGame& game, int player) {
  Require(player >= 0 && player < game.num_players(), ErrorKind::kStructural,
          "player index out of range");
}

}  // namespace

StochasticGame::StochasticGame(
    std::vector<int> action_counts, int num_states,
    const std::vector<std::vector<std::vector<double>>>& transitions,
    const std::vector<std::vector<std::vector<double>>>& payoffs,
    std::vector<double> discounts)
    : action_counts_(std::move(action_counts)),
      num_states_(num_states),
      discounts_(std::move(discounts)) {
  Init();
  const int n = num_players();
  Require(static_cast<int>(transitions.size()) == num_states_ &&
              static_cast<int>(payoffs.size()) == num_states_,
          ErrorKind::kStructural, "kernel and payoffs need one entry per state");
  payoffs_.reserve(num_states_ * num_joint_ * n);
  row_start_.assign(1, 0);
  for (int x = 0; x < num_states_; ++x) {
    Require(transitions[x].size() == num_joint_ && payoffs[x].size() == num_joint_,
            ErrorKind::kStructural,
            "state " + std::to_string(x) + " needs one row per joint action");
    for (std::size_t j = 0; j < num_joint_; ++j) {
      const auto& row = transitions[x][j];
      Require(static_cast<int>(row.size()) == num_states_, ErrorKind::kStructural,
              "transition row has wrong length");
      double sum = 0.0;
      for (int y = 0; y < num_states_; ++y) {
        Require(std::isfinite(row[y]) && row[y] >= 0.0, ErrorKind::kStructural,
                "transition probabilities must be finite and >= 0");
        sum += row[y];
        if (row[y] > 0.0) entries_.push_back({y, row[y]});
      }
      Require(std::abs(sum - 1.0) <= kKernelTolerance, ErrorKind::kStructural,
              "transition row (" + std::to_string(x) + ", " + std::to_string(j) +
                  ") does not sum to 1");
      row_start_.push_back(entries_.size());
      Require(static_cast<int>(payoffs[x][j].size()) == n, ErrorKind::kStructural,
              "stage payoff needs one entry per player");
      for (double v : payoffs[x][j]) {
        Require(std::isfinite(v), ErrorKind::kStructural, "non-finite payoff");
        payoffs_.push_back(v);
      }
    }
  }
}

StochasticGame::StochasticGame(std::vector<int> action_counts, int num_states,
                               std::vector<std::vector<Transition>> rows,
                               std::vector<double> payoffs,
                               std::vector<double> discounts)
    : action_counts_(std::move(action_counts)),
      num_states_(num_states),
      payoffs_(std::move(payoffs)),
      discounts_(std::move(discounts)) {
  Init();
  Require(rows.size() == num_states_ * num_joint_, ErrorKind::kStructural,
          "kernel needs one row per (state, joint action)");
  Require(payoffs_.size() == num_states_ * num_joint_ * num_players(),
          ErrorKind::kStructural, "stage payoffs have wrong size");
  for (double v : payoffs_) {
    Require(std::isfinite(v), ErrorKind::kStructural, "non-finite payoff");
  }
  row_start_.assign(1, 0);
  for (const auto& row : rows) {
    double sum = 0.0;
    for (const auto& t : row) {
      Require(t.next >= 0 && t.next < num_states_, ErrorKind::kStructural,
              "transition target out of range");
      Require(std::isfinite(t.prob) && t.prob >= 0.0, ErrorKind::kStructural,
              "transition probabilities must be finite and >= 0");
      sum += t.prob;
      if (t.prob > 0.0) entries_.push_back(t);
    }
    Require(std::abs(sum - 1.0) <= kKernelTolerance, ErrorKind::kStructural,
            "transition row does not sum to 1");
    row_start_.push_back(entries_.size());
  }
}

void StochasticGame::Init() {
  Require(!action_counts_.empty(), ErrorKind::kStructural,
          "a game needs at least one player");
  Require(num_states_ >= 1, ErrorKind::kStructural, "a game needs a state");
  Require(discounts_.size() == action_counts_.size(), ErrorKind::kStructural,
          "one discount per player");
  for (double g : discounts_) {
    Require(g >= 0.0 && g < 1.0, ErrorKind::kStructural,
            "discounts must lie in [0, 1)");
  }
  const int n = num_players();
  strides_.assign(n, 1);
  num_joint_ = 1;
  for (int p = n - 1; p >= 0; --p) {
    Require(action_counts_[p] >= 1, ErrorKind::kStructural,
            "every player needs an action");
    strides_[p] = num_joint_;
    num_joint_ *= action_counts_[p];
    Require(num_joint_ <= kMaxTensorEntries, ErrorKind::kBudget,
            "joint action space too large");
  }
}

std::size_t StochasticGame::JointIndex(std::span<const int> actions) const {
  Require(static_cast<int>(actions.size()) == num_players(),
          ErrorKind::kStructural, "joint action has wrong length");
  std::size_t joint = 0;
  for (int p = 0; p < num_players(); ++p) {
    Require(actions[p] >= 0 && actions[p] < action_counts_[p],
            ErrorKind::kStructural, "action index out of range");
    joint += strides_[p] * actions[p];
  }
  return joint;
}

std::vector<double> StochasticGame::TransitionRow(int state,
                                                  std::size_t joint) const {
  std::vector<double> row(num_states_, 0.0);
  for (const auto& t : transitions(state, joint)) row[t.next] += t.prob;
  return row;
}

double StochasticGame::MaxAbsPayoff() const {
  double m = 0.0;
  for (double v : payoffs_) m = std::max(m, std::abs(v));
  return m;
}

NormalFormGame StochasticGame::StageGame(int state) const {
  const int n = num_players();
  std::vector<double> flat(n * num_joint_);
  for (int p = 0; p < n; ++p) {
    for (std::size_t j = 0; j < num_joint_; ++j) {
      flat[p * num_joint_ + j] = payoff(state, j, p);
    }
  }
  return NormalFormGame(action_counts_, std::move(flat));
}

StationaryPolicyProfile::StationaryPolicyProfile(
    std::vector<std::vector<std::vector<double>>> policies)
    : policies_(std::move(policies)) {
  for (std::size_t i = 0; i < policies_.size(); ++i) {
    Require(!policies_[i].empty(), ErrorKind::kStructural,
            "policy for player " + std::to_string(i) + " has no states");
    Require(policies_[i].size() == policies_[0].size(), ErrorKind::kStructural,
            "players disagree on the number of states");
    for (std::size_t x = 0; x < policies_[i].size(); ++x) {
      policies_[i][x] = CheckedDistribution(
          std::move(policies_[i][x]),
          "player " + std::to_string(i) + " at state " + std::to_string(x));
    }
  }
}

StationaryPolicyProfile StationaryPolicyProfile::Uniform(
    std::span<const int> action_counts, int num_states) {
  std::vector<std::vector<std::vector<double>>> policies;
  for (int m : action_counts) {
    policies.emplace_back(num_states, std::vector<double>(m, 1.0 / m));
  }
  return StationaryPolicyProfile(std::move(policies));
}

StationaryPolicyProfile StationaryPolicyProfile::Pure(
    std::span<const int> action_counts,
    const std::vector<std::vector<int>>& actions) {
  Require(actions.size() == action_counts.size(), ErrorKind::kStructural,
          "pure policy needs one action list per player");
  std::vector<std::vector<std::vector<double>>> policies(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    for (int a : actions[i]) {
      Require(a >= 0 && a < action_counts[i], ErrorKind::kStructural,
              "action index out of range");
      std::vector<double> d(action_counts[i], 0.0);
      d[a] = 1.0;
      policies[i].push_back(std::move(d));
    }
  }
  return StationaryPolicyProfile(std::move(policies));
}

MixedProfile StationaryPolicyProfile::AtState(int state) const {
  std::vector<std::vector<double>> dists;
  for (const auto& p : policies_) dists.push_back(p[state]);
  return MixedProfile(std::move(dists));
}

StationaryPolicyProfile StationaryPolicyProfile::WithPlayer(
    int player, std::vector<std::vector<double>> policy) const {
  auto policies = policies_;
  policies[player] = std::move(policy);
  return StationaryPolicyProfile(std::move(policies));
}

bool StationaryPolicyProfile::SamePlayerPolicy(
    const StationaryPolicyProfile& other, int player) const {
  const auto& a = policies_[player];
  const auto& b = other.policies_[player];
  if (a.size() != b.size()) return false;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a[x].size() != b[x].size()) return false;
    for (std::size_t k = 0; k < a[x].size(); ++k) {
      if (std::abs(a[x][k] - b[x][k]) > kSimplexTolerance) return false;
    }
  }
  return true;
}

bool StationaryPolicyProfile::FitsGame(const StochasticGame& game) const {
  if (num_players() != game.num_players()) return false;
  for (int i = 0; i < num_players(); ++i) {
    if (static_cast<int>(policies_[i].size()) != game.num_states()) return false;
    for (const auto& d : policies_[i]) {
      if (static_cast<int>(d.size()) != game.num_actions(i)) return false;
    }
  }
  return true;
}

void RequireFits(const StochasticGame& game, const StationaryPolicyProfile& pi) {
  Require(pi.FitsGame(game), ErrorKind::kStructural,
          "policy dimensions do not match the game");
}

std::vector<double> ApplyValueOperator(const StochasticGame& game,
                                       const StationaryPolicyProfile& pi,
                                       int player,
                                       std::span<const double> values) {
  RequireFits(game, pi);
  RequirePlayer(game, player);
  Require(static_cast<int>(values.size()) == game.num_states(),
          ErrorKind::kStructural, "value vector needs one entry per state");
  const double gamma = game.discount(player);
  std::vector<double> out(game.num_states(), 0.0);
  for (int x = 0; x < game.num_states(); ++x) {
    const auto probs = JointProbabilities(game, pi, x);
    double stage = 0.0, future = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (probs[j] == 0.0) continue;
      stage += probs[j] * game.payoff(x, j, player);
      double next = 0.0;
      for (const auto& t : game.transitions(x, j)) next += t.prob * values[t.next];
      future += probs[j] * next;
    }
    out[x] = stage + gamma * future;
  }
  return out;
}

std::vector<double> EvaluatePolicy(const StochasticGame& game,
                                   const StationaryPolicyProfile& pi, int player,
                                   double tol) {
  RequireFits(game, pi);
  RequirePlayer(game, player);
  Require(tol > 0.0, ErrorKind::kInvalidArgument, "tol must be > 0");
  const MarkovChain chain = InducedChain(game, pi, player);
  const double gamma = game.discount(player);
  std::vector<double> v(game.num_states(), 0.0), next(game.num_states());
  if (gamma == 0.0) return chain.reward;
  const double threshold = StopThreshold(gamma, tol);
  while (true) {
    double change = 0.0;
    for (int x = 0; x < game.num_states(); ++x) {
      double future = 0.0;
      for (const auto& [y, w] : chain.kernel[x].entries) future += w * v[y];
      next[x] = chain.reward[x] + gamma * future;
      change = std::max(change, std::abs(next[x] - v[x]));
    }
    v.swap(next);
    if (change <= threshold) return v;
  }
}

ValueTable EvaluateAll(const StochasticGame& game,
                       const StationaryPolicyProfile& pi, double tol) {
  ValueTable table;
  for (int i = 0; i < game.num_players(); ++i) {
    table.values.push_back(EvaluatePolicy(game, pi, i, tol));
  }
  return table;
}

MdpSolution InducedMdpBestResponse(const StochasticGame& game,
                                   const StationaryPolicyProfile& pi, int player,
                                   double tol) {
  RequireFits(game, pi);
  RequirePlayer(game, player);
  Require(tol > 0.0, ErrorKind::kInvalidArgument, "tol must be > 0");
  const int states = game.num_states();
  const int actions = game.num_actions(player);
  // reward[x][a] and kernel[x][a] of the induced MDP.
  std::vector<std::vector<double>> reward(states, std::vector<double>(actions, 0.0));
  std::vector<std::vector<SparseRow>> kernel(states, std::vector<SparseRow>(actions));
  for (int x = 0; x < states; ++x) {
    const auto probs = JointProbabilities(game, pi, x, player);
    std::vector<std::map<int, double>> acc(actions);
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (probs[j] == 0.0) continue;
      const int a = game.ActionOf(j, player);
      reward[x][a] += probs[j] * game.payoff(x, j, player);
      for (const auto& t : game.transitions(x, j)) acc[a][t.next] += probs[j] * t.prob;
    }
    for (int a = 0; a < actions; ++a) kernel[x][a] = MergeRow(acc[a]);
  }
  const double gamma = game.discount(player);
  auto q_value = [&](const std::vector<double>& v, int x, int a) {
    double future = 0.0;
    for (const auto& [y, w] : kernel[x][a].entries) future += w * v[y];
    return reward[x][a] + gamma * future;
  };
  std::vector<double> v(states, 0.0), next(states);
  const double threshold = gamma == 0.0 ? 0.0 : StopThreshold(gamma, tol);
  while (true) {
    double change = 0.0;
    for (int x = 0; x < states; ++x) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < actions; ++a) best = std::max(best, q_value(v, x, a));
      next[x] = best;
      change = std::max(change, std::abs(next[x] - v[x]));
    }
    v.swap(next);
    if (gamma == 0.0 || change <= threshold) break;
  }
  MdpSolution solution;
  solution.values = v;
  solution.policy.resize(states);
  for (int x = 0; x < states; ++x) {
    int best_a = 0;
    double best = q_value(v, x, 0);
    for (int a = 1; a < actions; ++a) {
      const double q = q_value(v, x, a);
      if (q > best) {
        best = q;
        best_a = a;
      }
    }
    solution.policy[x] = best_a;
  }
  return solution;
}

std::vector<double> InducedMdpBestValue(const StochasticGame& game,
                                        const StationaryPolicyProfile& pi,
                                        int player, double tol) {
  return InducedMdpBestResponse(game, pi, player, tol).values;
}

double MarkovResidual(const StochasticGame& game,
                      const StationaryPolicyProfile& pi, double tol) {
  double residual = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto value = EvaluatePolicy(game, pi, i, tol);
    const auto best = InducedMdpBestValue(game, pi, i, tol);
    for (int x = 0; x < game.num_states(); ++x) {
      residual = std::max(residual, best[x] - value[x]);
    }
  }
  return residual;
}

std::vector<int> StationarySatisfiedPlayers(const StochasticGame& game,
                                            const StationaryPolicyProfile& pi,
                                            double epsilon, double tol) {
  Require(epsilon >= 0.0, ErrorKind::kInvalidArgument, "epsilon must be >= 0");
  std::vector<int> satisfied;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto value = EvaluatePolicy(game, pi, i, tol);
    const auto best = InducedMdpBestValue(game, pi, i, tol);
    bool ok = true;
    for (int x = 0; x < game.num_states() && ok; ++x) {
      ok = value[x] >= best[x] - epsilon - 2.0 * tol - kRoundingSlack;
    }
    if (ok) satisfied.push_back(i);
  }
  return satisfied;
}

bool IsMarkovEpsEquilibrium(const StochasticGame& game,
                            const StationaryPolicyProfile& pi, double epsilon,
                            double tol) {
  return static_cast<int>(StationarySatisfiedPlayers(game, pi, epsilon, tol).size()) ==
         game.num_players();
}

FrozenSubgame FreezePlayersStochastic(const StochasticGame& game,
                                      const StationaryPolicyProfile& pi,
                                      std::span<const int> frozen_players) {
  RequireFits(game, pi);
  const int n = game.num_players();
  std::vector<bool> frozen(n, false);
  for (int p : frozen_players) {
    Require(p >= 0 && p < n, ErrorKind::kStructural, "frozen player out of range");
    Require(!frozen[p], ErrorKind::kStructural, "frozen player listed twice");
    frozen[p] = true;
  }
  FrozenSubgame sub{game, {}};
  std::vector<int> counts;
  std::vector<double> discounts;
  for (int p = 0; p < n; ++p) {
    if (frozen[p]) continue;
    sub.free_players.push_back(p);
    counts.push_back(game.num_actions(p));
    discounts.push_back(game.discount(p));
  }
  Require(!sub.free_players.empty(), ErrorKind::kInvalidArgument,
          "cannot freeze every player");
  const int k = static_cast<int>(counts.size());
  std::size_t sub_joint = 1;
  for (int m : counts) sub_joint *= m;
  std::vector<std::size_t> sub_strides(k, 1);
  for (int q = k - 2; q >= 0; --q) sub_strides[q] = sub_strides[q + 1] * counts[q + 1];

  const int states = game.num_states();
  std::vector<std::map<int, double>> acc(states * sub_joint);
  std::vector<double> payoffs(states * sub_joint * k, 0.0);
  for (int x = 0; x < states; ++x) {
    for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
      double weight = 1.0;
      for (int p = 0; p < n && weight != 0.0; ++p) {
        if (frozen[p]) weight *= pi.policy(p, x)[game.ActionOf(j, p)];
      }
      if (weight == 0.0) continue;
      std::size_t s = 0;
      for (int q = 0; q < k; ++q) s += sub_strides[q] * game.ActionOf(j, sub.free_players[q]);
      const std::size_t row = x * sub_joint + s;
      for (const auto& t : game.transitions(x, j)) acc[row][t.next] += weight * t.prob;
      for (int q = 0; q < k; ++q) {
        payoffs[row * k + q] += weight * game.payoff(x, j, sub.free_players[q]);
      }
    }
  }
  std::vector<std::vector<StochasticGame::Transition>> rows(acc.size());
  for (std::size_t r = 0; r < acc.size(); ++r) {
    double sum = 0.0;
    for (const auto& [y, w] : acc[r]) sum += w;
    // Frozen weights sum to one up to rounding; renormalize so the row
    // validates at kKernelTolerance.
    for (const auto& [y, w] : acc[r]) {
      if (w > 0.0) rows[r].push_back({y, w / sum});
    }
  }
  sub.game = StochasticGame(std::move(counts), states, std::move(rows),
                            std::move(payoffs), std::move(discounts));
  return sub;
}

StationaryPolicyProfile EmbedFreePolicies(const StationaryPolicyProfile& pi,
                                          std::span<const int> free_players,
                                          const StationaryPolicyProfile& sub) {
  Require(static_cast<int>(free_players.size()) == sub.num_players(),
          ErrorKind::kStructural, "sub-policy has wrong number of players");
  auto policies = pi.policies();
  for (std::size_t q = 0; q < free_players.size(); ++q) {
    policies[free_players[q]] = sub.player_policy(q);
  }
  return StationaryPolicyProfile(std::move(policies));
}

std::size_t CompiledStateIndex(const StochasticGame& base, int k, int state,
                               std::span<const std::size_t> history) {
  Require(static_cast<int>(history.size()) == k, ErrorKind::kStructural,
          "history must have length k");
  std::size_t index = state;
  for (std::size_t h : history) index = index * base.num_joint_actions() + h;
  return index;
}

KStepCompilation CompileKStep(const KStepGame& kgame) {
  const StochasticGame& base = kgame.base;
  const int k = kgame.k;
  Require(k >= 1, ErrorKind::kInvalidArgument, "k must be >= 1");
  const std::size_t joint = base.num_joint_actions();
  std::size_t histories = 1;
  for (int t = 0; t < k; ++t) {
    Require(histories <= kMaxCompiledStates / joint, ErrorKind::kBudget,
            "compiled state space exceeds 1e6 states");
    histories *= joint;
  }
  Require(histories <= kMaxCompiledStates / base.num_states(), ErrorKind::kBudget,
          "compiled state space exceeds 1e6 states");
  const std::size_t num_compiled = histories * base.num_states();
  const int n = base.num_players();

  KStepCompilation out{base, {}};
  out.states.resize(num_compiled);
  std::vector<std::vector<StochasticGame::Transition>> rows(num_compiled * joint);
  std::vector<double> payoffs(num_compiled * joint * n);
  for (std::size_t y = 0; y < num_compiled; ++y) {
    KStepState& st = out.states[y];
    st.history.assign(k, 0);
    std::size_t rest = y;
    for (int t = k - 1; t >= 0; --t) {
      st.history[t] = rest % joint;
      rest /= joint;
    }
    st.state = static_cast<int>(rest);
    // Successor history: (s, s^-1, ..., s^-(k-1)); its index without the
    // base-state prefix is s * J^(k-1) + (history minus the oldest entry).
    std::size_t shifted_tail = 0;
    for (int t = 0; t + 1 < k; ++t) shifted_tail = shifted_tail * joint + st.history[t];
    const std::size_t tail_span = histories / joint;
    for (std::size_t s = 0; s < joint; ++s) {
      const std::size_t row = y * joint + s;
      for (const auto& t : base.transitions(st.state, s)) {
        const std::size_t target =
            static_cast<std::size_t>(t.next) * histories + s * tail_span + shifted_tail;
        rows[row].push_back({static_cast<int>(target), t.prob});
      }
      for (int i = 0; i < n; ++i) payoffs[row * n + i] = base.payoff(st.state, s, i);
    }
  }
  out.game = StochasticGame(base.action_counts(), static_cast<int>(num_compiled),
                            std::move(rows), std::move(payoffs), base.discounts());
  return out;
}

StationaryPolicyProfile LiftHistoryBlind(const KStepCompilation& compiled,
                                         const StationaryPolicyProfile& pi) {
  std::vector<std::vector<std::vector<double>>> policies(pi.num_players());
  for (int i = 0; i < pi.num_players(); ++i) {
    for (const auto& st : compiled.states) {
      policies[i].push_back(pi.policy(i, st.state));
    }
  }
  return StationaryPolicyProfile(std::move(policies));
}

int SimulateStep(const StochasticGame& game, const StationaryPolicyProfile& pi,
                 int state, Rng& rng, std::size_t* joint) {
  std::vector<int> actions(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    actions[i] = rng.Categorical(pi.policy(i, state));
  }
  const std::size_t j = game.JointIndex(actions);
  if (joint != nullptr) *joint = j;
  const auto row = game.transitions(state, j);
  double u = rng.Uniform01();
  for (const auto& t : row) {
    if (u < t.prob) return t.next;
    u -= t.prob;
  }
  return row.back().next;
}

}  // namespace satpath
