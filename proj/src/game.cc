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

#include "satpath/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace satpath {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural: return "structural";
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kBudget: return "budget";
    case ErrorKind::kSolverFailure: return "solver_failure";
    case ErrorKind::kSchema: return "schema";
  }
  return "unknown";
}

NormalFormGame::NormalFormGame(std::vector<int> action_counts,
                               std::vector<double> payoffs)
    : action_counts_(std::move(action_counts)), payoffs_(std::move(payoffs)) {
  Require(!action_counts_.empty(), ErrorKind::kStructural,
          "a game needs at least one player");
  const int n = num_players();
  strides_.assign(n, 1);
  num_joint_ = 1;
  for (int p = n - 1; p >= 0; --p) {
    Require(action_counts_[p] >= 1, ErrorKind::kStructural,
            "player " + std::to_string(p) + " has no actions");
    strides_[p] = num_joint_;
    Require(num_joint_ <= kMaxTensorEntries /
                              static_cast<std::size_t>(action_counts_[p]),
            ErrorKind::kBudget, "payoff tensor exceeds 1e7 entries");
    num_joint_ *= action_counts_[p];
  }
  Require(num_joint_ * n <= kMaxTensorEntries, ErrorKind::kBudget,
          "payoff tensor exceeds 1e7 entries");
  Require(payoffs_.size() == num_joint_ * n, ErrorKind::kStructural,
          "payoff tensor has " + std::to_string(payoffs_.size()) +
              " entries, expected " + std::to_string(num_joint_ * n));
  for (double v : payoffs_) {
    Require(std::isfinite(v), ErrorKind::kStructural, "non-finite payoff");
  }
}

std::size_t NormalFormGame::JointIndex(std::span<const int> actions) const {
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

std::vector<int> NormalFormGame::JointActions(std::size_t joint) const {
  std::vector<int> actions(num_players());
  for (int p = 0; p < num_players(); ++p) actions[p] = ActionOf(joint, p);
  return actions;
}

double NormalFormGame::MaxAbsPayoff() const {
  double m = 0.0;
  for (double v : payoffs_) m = std::max(m, std::abs(v));
  return m;
}

double NormalFormGame::PayoffSpread() const {
  auto [lo, hi] = std::minmax_element(payoffs_.begin(), payoffs_.end());
  return *hi - *lo;
}

std::vector<double> CheckedDistribution(std::vector<double> dist,
                                        const std::string& what) {
  Require(!dist.empty(), ErrorKind::kStructural, "empty distribution for " + what);
  double sum = 0.0;
  for (double& x : dist) {
    Require(std::isfinite(x), ErrorKind::kStructural,
            "non-finite probability for " + what);
    Require(x >= -kSimplexTolerance, ErrorKind::kStructural,
            "negative probability for " + what);
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  Require(std::abs(sum - 1.0) <= kSimplexTolerance, ErrorKind::kStructural,
          "distribution for " + what + " does not sum to 1");
  for (double& x : dist) x /= sum;
  return dist;
}

MixedProfile::MixedProfile(std::vector<std::vector<double>> distributions)
    : dists_(std::move(distributions)) {
  for (std::size_t p = 0; p < dists_.size(); ++p) {
    dists_[p] = CheckedDistribution(std::move(dists_[p]),
                                    "player " + std::to_string(p));
  }
}

MixedProfile MixedProfile::Pure(std::span<const int> action_counts,
                                std::span<const int> actions) {
  Require(action_counts.size() == actions.size(), ErrorKind::kStructural,
          "pure profile has wrong number of actions");
  std::vector<std::vector<double>> dists;
  for (std::size_t p = 0; p < actions.size(); ++p) {
    Require(actions[p] >= 0 && actions[p] < action_counts[p],
            ErrorKind::kStructural, "action index out of range");
    std::vector<double> d(action_counts[p], 0.0);
    d[actions[p]] = 1.0;
    dists.push_back(std::move(d));
  }
  return MixedProfile(std::move(dists));
}

MixedProfile MixedProfile::Uniform(std::span<const int> action_counts) {
  std::vector<std::vector<double>> dists;
  for (int m : action_counts) dists.emplace_back(m, 1.0 / m);
  return MixedProfile(std::move(dists));
}

MixedProfile MixedProfile::With(int player, std::vector<double> dist) const {
  auto dists = dists_;
  dists[player] = std::move(dist);
  return MixedProfile(std::move(dists));
}

bool MixedProfile::SameStrategy(const MixedProfile& other, int player) const {
  const auto& a = dists_[player];
  const auto& b = other.dists_[player];
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > kSimplexTolerance) return false;
  }
  return true;
}

bool MixedProfile::SameAs(const MixedProfile& other) const {
  if (num_players() != other.num_players()) return false;
  for (int p = 0; p < num_players(); ++p) {
    if (!SameStrategy(other, p)) return false;
  }
  return true;
}

bool MixedProfile::FitsGame(const NormalFormGame& game) const {
  if (num_players() != game.num_players()) return false;
  for (int p = 0; p < num_players(); ++p) {
    if (static_cast<int>(dists_[p].size()) != game.num_actions(p)) return false;
  }
  return true;
}

void RequireFits(const NormalFormGame& game, const MixedProfile& profile) {
  Require(profile.FitsGame(game), ErrorKind::kStructural,
          "profile dimensions do not match the game");
}

double L1Distance(const MixedProfile& a, const MixedProfile& b) {
  Require(a.num_players() == b.num_players(), ErrorKind::kStructural,
          "profiles have different player counts");
  double d = 0.0;
  for (int p = 0; p < a.num_players(); ++p) {
    Require(a.dist(p).size() == b.dist(p).size(), ErrorKind::kStructural,
            "profiles have different action counts");
    for (std::size_t k = 0; k < a.dist(p).size(); ++k) {
      d += std::abs(a.dist(p)[k] - b.dist(p)[k]);
    }
  }
  return d;
}

double ExpectedPayoff(const NormalFormGame& game, const MixedProfile& profile,
                      int player) {
  RequireFits(game, profile);
  Require(player >= 0 && player < game.num_players(), ErrorKind::kStructural,
          "player index out of range");
  const int n = game.num_players();
  double total = 0.0;
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    double prob = 1.0;
    for (int p = 0; p < n && prob != 0.0; ++p) {
      prob *= profile.dist(p)[game.ActionOf(j, p)];
    }
    if (prob != 0.0) total += prob * game.payoff(player, j);
  }
  return total;
}

std::vector<double> DeviationPayoffs(const NormalFormGame& game,
                                     const MixedProfile& profile, int player) {
  RequireFits(game, profile);
  Require(player >= 0 && player < game.num_players(), ErrorKind::kStructural,
          "player index out of range");
  const int n = game.num_players();
  std::vector<double> values(game.num_actions(player), 0.0);
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    double prob = 1.0;
    for (int p = 0; p < n && prob != 0.0; ++p) {
      if (p != player) prob *= profile.dist(p)[game.ActionOf(j, p)];
    }
    if (prob != 0.0) {
      values[game.ActionOf(j, player)] += prob * game.payoff(player, j);
    }
  }
  return values;
}

double BestResponseValue(const NormalFormGame& game,
                         const MixedProfile& profile, int player) {
  const auto values = DeviationPayoffs(game, profile, player);
  return *std::max_element(values.begin(), values.end());
}

double Regret(const NormalFormGame& game, const MixedProfile& profile,
              int player) {
  const auto values = DeviationPayoffs(game, profile, player);
  const double best = *std::max_element(values.begin(), values.end());
  double achieved = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    achieved += profile.dist(player)[a] * values[a];
  }
  return std::max(0.0, best - achieved);
}

double Residual(const NormalFormGame& game, const MixedProfile& profile) {
  double r = 0.0;
  for (int p = 0; p < game.num_players(); ++p) {
    r = std::max(r, Regret(game, profile, p));
  }
  return r;
}

bool IsEpsBestResponse(const NormalFormGame& game, const MixedProfile& profile,
                       int player, double epsilon) {
  Require(epsilon >= 0.0, ErrorKind::kInvalidArgument, "epsilon must be >= 0");
  return ExpectedPayoff(game, profile, player) >=
         BestResponseValue(game, profile, player) - epsilon - kRoundingSlack;
}

bool IsEpsEquilibrium(const NormalFormGame& game, const MixedProfile& profile,
                      double epsilon) {
  for (int p = 0; p < game.num_players(); ++p) {
    if (!IsEpsBestResponse(game, profile, p, epsilon)) return false;
  }
  return true;
}

GroupPartition::GroupPartition(std::vector<std::vector<int>> groups)
    : groups_(std::move(groups)) {
  int n = 0;
  for (const auto& g : groups_) {
    Require(!g.empty(), ErrorKind::kStructural, "partition has an empty group");
    for (int p : g) {
      Require(p >= 0, ErrorKind::kStructural, "negative player index");
      n = std::max(n, p + 1);
    }
  }
  num_players_ = n;
  group_of_.assign(n, -1);
  for (int gi = 0; gi < num_groups(); ++gi) {
    for (int p : groups_[gi]) {
      Require(group_of_[p] == -1, ErrorKind::kStructural,
              "player " + std::to_string(p) + " appears in two groups");
      group_of_[p] = gi;
    }
  }
  for (int p = 0; p < n; ++p) {
    Require(group_of_[p] != -1, ErrorKind::kStructural,
            "player " + std::to_string(p) + " is in no group");
  }
}

GroupPartition GroupPartition::Singletons(int num_players) {
  std::vector<std::vector<int>> groups;
  for (int p = 0; p < num_players; ++p) groups.push_back({p});
  return GroupPartition(std::move(groups));
}

GroupPartition GroupPartition::Single(int num_players) {
  std::vector<int> all(num_players);
  std::iota(all.begin(), all.end(), 0);
  return GroupPartition({all});
}

void SatisficingConfig::Validate(int num_players) const {
  Require(epsilon >= 0.0, ErrorKind::kInvalidArgument, "epsilon must be >= 0");
  Require(partition.num_players() == num_players, ErrorKind::kStructural,
          "partition covers " + std::to_string(partition.num_players()) +
              " players, game has " + std::to_string(num_players));
}

std::vector<int> SatisfiedGroups(const NormalFormGame& game,
                                 const MixedProfile& profile,
                                 const SatisficingConfig& config) {
  config.Validate(game.num_players());
  RequireFits(game, profile);
  std::vector<bool> best(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    best[p] = IsEpsBestResponse(game, profile, p, config.epsilon);
  }
  std::vector<int> satisfied;
  for (int g = 0; g < config.partition.num_groups(); ++g) {
    const auto& members = config.partition.group(g);
    if (std::all_of(members.begin(), members.end(),
                    [&](int p) { return best[p]; })) {
      satisfied.push_back(g);
    }
  }
  return satisfied;
}

NormalFormGame RestrictSubgame(const NormalFormGame& game,
                               const MixedProfile& frozen,
                               std::span<const int> free_players) {
  RequireFits(game, frozen);
  Require(!free_players.empty(), ErrorKind::kInvalidArgument,
          "sub-game needs at least one free player");
  const int n = game.num_players();
  std::vector<bool> is_free(n, false);
  std::vector<int> sub_counts;
  for (int p : free_players) {
    Require(p >= 0 && p < n, ErrorKind::kStructural,
            "free player index out of range");
    Require(!is_free[p], ErrorKind::kStructural, "free player listed twice");
    Require(sub_counts.empty() || p > free_players[sub_counts.size() - 1],
            ErrorKind::kStructural, "free players must be ascending");
    is_free[p] = true;
    sub_counts.push_back(game.num_actions(p));
  }
  const int k = static_cast<int>(free_players.size());
  std::size_t sub_joint = 1;
  for (int m : sub_counts) sub_joint *= m;
  std::vector<std::size_t> sub_strides(k, 1);
  for (int q = k - 2; q >= 0; --q) {
    sub_strides[q] = sub_strides[q + 1] * sub_counts[q + 1];
  }
  std::vector<double> sub_payoffs(sub_joint * k, 0.0);
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    double weight = 1.0;
    for (int p = 0; p < n && weight != 0.0; ++p) {
      if (!is_free[p]) weight *= frozen.dist(p)[game.ActionOf(j, p)];
    }
    if (weight == 0.0) continue;
    std::size_t w = 0;
    for (int q = 0; q < k; ++q) {
      w += sub_strides[q] * game.ActionOf(j, free_players[q]);
    }
    for (int q = 0; q < k; ++q) {
      sub_payoffs[q * sub_joint + w] += weight * game.payoff(free_players[q], j);
    }
  }
  return NormalFormGame(std::move(sub_counts), std::move(sub_payoffs));
}

NormalFormGame RestrictSubgame(const SubgameRestriction& restriction) {
  return RestrictSubgame(restriction.base, restriction.frozen,
                         restriction.free_players);
}

MixedProfile EmbedSubgameProfile(const MixedProfile& frozen,
                                 std::span<const int> free_players,
                                 const MixedProfile& sub_profile) {
  Require(static_cast<int>(free_players.size()) == sub_profile.num_players(),
          ErrorKind::kStructural, "sub-profile has wrong number of players");
  auto dists = frozen.distributions();
  for (std::size_t q = 0; q < free_players.size(); ++q) {
    Require(dists[free_players[q]].size() == sub_profile.dist(q).size(),
            ErrorKind::kStructural, "sub-profile has wrong action count");
    dists[free_players[q]] = sub_profile.dist(q);
  }
  return MixedProfile(std::move(dists));
}

std::vector<std::vector<double>> SimplexLattice(int dim, int divisions) {
  Require(dim >= 1 && divisions >= 1, ErrorKind::kInvalidArgument,
          "lattice needs dim >= 1 and divisions >= 1");
  std::vector<std::vector<double>> points;
  std::vector<int> counts(dim, 0);
  auto recurse = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dim - 1) {
      counts[pos] = remaining;
      std::vector<double> point(dim);
      for (int k = 0; k < dim; ++k) {
        point[k] = static_cast<double>(counts[k]) / divisions;
      }
      points.push_back(std::move(point));
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  recurse(recurse, 0, divisions);
  return points;
}

int LatticeDivisions(double step) {
  Require(step > 0.0 && step <= 1.0, ErrorKind::kInvalidArgument,
          "grid step must lie in (0, 1]");
  return std::max(1, static_cast<int>(std::lround(1.0 / step)));
}

double ProductGap(std::span<const double> a, std::span<const double> b) {
  Require(a.size() == b.size(), ErrorKind::kStructural,
          "product operands differ in length");
  double pa = 1.0, pb = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    pa *= a[k];
    pb *= b[k];
  }
  return std::abs(pa - pb);
}

}  // namespace satpath
