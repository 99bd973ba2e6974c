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

#ifndef SATPATH_DYNAMICS_H_
#define SATPATH_DYNAMICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satpath/game.h"
#include "satpath/solvers.h"

namespace satpath {

enum class PathStatus {
  kEquilibrium,      // last profile is an epsilon-equilibrium
  kBudgetExhausted,  // max_steps reached first
  kSolverFailure,    // a sub-game could not be solved to epsilon/2
};

const char* PathStatusName(PathStatus status);
PathStatus PathStatusFromName(const std::string& name);

// A finite grouped satisficing path together with the satisfied-group sets
// recorded at every profile.
struct PathRecord {
  std::vector<MixedProfile> profiles;
  SatisficingConfig config;
  std::vector<std::vector<int>> per_step_satisfied;
  bool terminal_is_equilibrium = false;
  std::size_t step_count = 0;  // profiles.size() - 1
  PathStatus status = PathStatus::kEquilibrium;
  // Present for kSolverFailure: the sub-game that failed, as JSON text.
  std::string failure_detail;

  std::vector<int> GroupCounts() const;
};

// Players whose groups are fully satisfied must repeat their strategies.
struct SuccessorSpec {
  std::vector<int> frozen_players;  // ascending
  std::vector<int> free_players;    // ascending
};

bool StepIsLegal(const NormalFormGame& game, const MixedProfile& current,
                 const MixedProfile& next, const SatisficingConfig& config);

// Every step legal and every recorded satisfied set equal to a fresh
// recomputation.  Throws on an empty path.
bool ValidatePath(const NormalFormGame& game, const PathRecord& path);

SuccessorSpec ComputeSuccessorSpec(const NormalFormGame& game,
                                   const MixedProfile& profile,
                                   const SatisficingConfig& config);

struct ProbeOptions {
  double grid_step = 0.1;
  std::size_t budget = 2000;
  std::uint64_t seed = 0;
};

// A finite, seed-deterministic probe of the admissible successor set.  Free
// players range over the product of simplex lattices with spacing
// 1/round(1/grid_step); if that product is smaller than `budget` the rest is
// filled with uniform random simplex points, otherwise half the budget is an
// evenly strided subset of the lattice and half is random.  Frozen players are
// copied.  With no free players the only successor is `profile` itself.
std::vector<MixedProfile> SampleSuccessors(const NormalFormGame& game,
                                           const MixedProfile& profile,
                                           const SatisficingConfig& config,
                                           const ProbeOptions& probe);

struct LocalMinimumResult {
  bool certified_min = true;
  std::optional<MixedProfile> counterexample;  // first t with N(t) < N(s)
};

// Sampled test of N_eps(s) <= inf over T_eps(s) of N_eps(t).
LocalMinimumResult IsLocalMinimum(const NormalFormGame& game,
                                  const MixedProfile& profile,
                                  const SatisficingConfig& config,
                                  const ProbeOptions& probe);

struct PreservationResult {
  bool preserved = true;
  std::optional<MixedProfile> successor;
  int group = -1;  // a group satisfied at s but not at `successor`
};

// Sampled test that every group satisfied at s stays satisfied at every
// admissible successor.
PreservationResult CheckPreservation(const NormalFormGame& game,
                                     const MixedProfile& profile,
                                     const SatisficingConfig& config,
                                     const ProbeOptions& probe);

struct PathOptions {
  std::size_t max_steps = 100;
  ProbeOptions probe;  // used when descending out of a detected cycle
};

// Freeze-and-solve: at each step the satisfied groups are frozen and the free
// players jump to an epsilon/2-equilibrium of the restricted sub-game.  When
// a (satisfied set, profile) signature is revisited more than twice, the next
// steps first look for an admissible successor that lowers N_eps and take it;
// once N_eps is a sampled local minimum the jump is taken again.  With no
// group satisfied the jump solves the whole game.
PathRecord ConstructPath(const NormalFormGame& game, const MixedProfile& start,
                         const SatisficingConfig& config,
                         const EquilibriumSolver& solver,
                         const PathOptions& options);

// Smallest index attaining the minimum group count along the path.
std::size_t PathMinimumIndex(const PathRecord& path);

}  // namespace satpath

#endif  // SATPATH_DYNAMICS_H_
