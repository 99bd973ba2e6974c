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

#ifndef SATPATH_GAME_H_
#define SATPATH_GAME_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "satpath/common.h"

namespace satpath {

// A finite game in normal form.  Payoffs are stored player-major: entry
// (player p, joint action j) lives at p * num_joint_actions() + j, and joint
// actions are enumerated row-major with player 0's action varying slowest.
// This is also the layout of the "payoffs" array in the JSON schema.
class NormalFormGame {
 public:
  NormalFormGame(std::vector<int> action_counts, std::vector<double> payoffs);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  const std::vector<int>& action_counts() const { return action_counts_; }
  int num_actions(int player) const { return action_counts_[player]; }
  std::size_t num_joint_actions() const { return num_joint_; }
  std::size_t stride(int player) const { return strides_[player]; }

  double payoff(int player, std::size_t joint) const {
    return payoffs_[player * num_joint_ + joint];
  }
  std::span<const double> payoffs() const { return payoffs_; }

  std::size_t JointIndex(std::span<const int> actions) const;
  std::vector<int> JointActions(std::size_t joint) const;
  int ActionOf(std::size_t joint, int player) const {
    return static_cast<int>(joint / strides_[player]) % action_counts_[player];
  }

  double MaxAbsPayoff() const;
  // Largest minus smallest payoff entry over all players.
  double PayoffSpread() const;

 private:
  std::vector<int> action_counts_;
  std::vector<std::size_t> strides_;
  std::size_t num_joint_ = 1;
  std::vector<double> payoffs_;
};

// Validates a probability vector: finite, entries >= -kSimplexTolerance and
// sum within kSimplexTolerance of one.  Returns it clipped and renormalized.
std::vector<double> CheckedDistribution(std::vector<double> dist,
                                        const std::string& what);

// One probability vector per player.  Entries down to -kSimplexTolerance are
// clipped to zero and every vector is renormalized, so profiles produced by
// long iterations stay exactly on the simplex.
class MixedProfile {
 public:
  MixedProfile() = default;
  explicit MixedProfile(std::vector<std::vector<double>> distributions);

  static MixedProfile Pure(std::span<const int> action_counts,
                           std::span<const int> actions);
  static MixedProfile Uniform(std::span<const int> action_counts);

  int num_players() const { return static_cast<int>(dists_.size()); }
  const std::vector<double>& dist(int player) const { return dists_[player]; }
  const std::vector<std::vector<double>>& distributions() const {
    return dists_;
  }

  // Copy with one player's distribution replaced.
  MixedProfile With(int player, std::vector<double> dist) const;

  // Entrywise equality of one player's distribution within kSimplexTolerance.
  bool SameStrategy(const MixedProfile& other, int player) const;
  bool SameAs(const MixedProfile& other) const;

  bool FitsGame(const NormalFormGame& game) const;

 private:
  std::vector<std::vector<double>> dists_;
};

void RequireFits(const NormalFormGame& game, const MixedProfile& profile);

// Sum_i Sum_s |sigma_i(s) - eta_i(s)|.
double L1Distance(const MixedProfile& a, const MixedProfile& b);

// Expected payoff of `player` under the mixed extension: sum over pure joint
// actions of payoff times the product of the players' probabilities.
double ExpectedPayoff(const NormalFormGame& game, const MixedProfile& profile,
                      int player);

// Payoff of each pure action of `player` against the others' mixtures.
std::vector<double> DeviationPayoffs(const NormalFormGame& game,
                                     const MixedProfile& profile, int player);

// Sup over the player's mixed strategies, attained at a pure action.
double BestResponseValue(const NormalFormGame& game,
                         const MixedProfile& profile, int player);

// Best-response value minus expected payoff, clipped at zero.
double Regret(const NormalFormGame& game, const MixedProfile& profile,
              int player);

// max_i Regret(i).  Zero exactly at a Nash equilibrium.
double Residual(const NormalFormGame& game, const MixedProfile& profile);

bool IsEpsBestResponse(const NormalFormGame& game, const MixedProfile& profile,
                       int player, double epsilon);
bool IsEpsEquilibrium(const NormalFormGame& game, const MixedProfile& profile,
                      double epsilon);

// A partition of the player set into disjoint nonempty groups.
class GroupPartition {
 public:
  GroupPartition() = default;
  explicit GroupPartition(std::vector<std::vector<int>> groups);

  static GroupPartition Singletons(int num_players);
  static GroupPartition Single(int num_players);

  int num_groups() const { return static_cast<int>(groups_.size()); }
  const std::vector<int>& group(int g) const { return groups_[g]; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }
  int num_players() const { return num_players_; }
  int GroupOf(int player) const { return group_of_[player]; }

 private:
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  int num_players_ = 0;
};

struct SatisficingConfig {
  double epsilon = 0.0;
  GroupPartition partition;

  void Validate(int num_players) const;
};

// Indices of groups whose members are all epsilon-best responders, ascending.
// Its size is the best-response group count N_eps(profile).
std::vector<int> SatisfiedGroups(const NormalFormGame& game,
                                 const MixedProfile& profile,
                                 const SatisficingConfig& config);

// Players outside `free_players` are frozen at their strategies in `frozen`.
struct SubgameRestriction {
  NormalFormGame base;
  std::vector<int> free_players;  // ascending; sub-game player k = free_players[k]
  MixedProfile frozen;
};

// Game among `free_players` whose payoffs are exact expectations over the
// frozen players' mixtures.  Free players keep their relative order.
NormalFormGame RestrictSubgame(const NormalFormGame& game,
                               const MixedProfile& frozen,
                               std::span<const int> free_players);
NormalFormGame RestrictSubgame(const SubgameRestriction& restriction);

// Inverse of the reindexing: place a sub-game profile back into the full game.
MixedProfile EmbedSubgameProfile(const MixedProfile& frozen,
                                 std::span<const int> free_players,
                                 const MixedProfile& sub_profile);

// Points {k/divisions} of the probability simplex with `dim` vertices, in
// descending lexicographic order of the integer compositions (the first point
// is the vertex e_0).
std::vector<std::vector<double>> SimplexLattice(int dim, int divisions);

// round(1/step), the number of divisions used for a lattice spacing request.
int LatticeDivisions(double step);

// |prod a_i - prod b_i|, the left side of the product inequality that bounds
// it by sum |a_i - b_i| for entries in [0, 1].
double ProductGap(std::span<const double> a, std::span<const double> b);

}  // namespace satpath

#endif  // SATPATH_GAME_H_
