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

#ifndef SATPATH_MARKOV_DYNAMICS_H_
#define SATPATH_MARKOV_DYNAMICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satpath/dynamics.h"
#include "satpath/markov.h"
#include "satpath/solvers.h"

namespace satpath {

struct StochasticSolverOptions {
  std::uint64_t seed = 0;
  int restarts = 16;
  int max_iters = 10'000;
  double eval_tol = kDefaultEvalTolerance;
  double grid_step = 0.1;
  std::size_t max_grid_points = 20'000;
};

struct StochasticSolverOutcome {
  StationaryPolicyProfile policy;
  double residual = 0.0;
  SolverMethod method = SolverMethod::kArgmax;
  bool converged = false;
};

// Markov equilibrium of a small stochastic game to residual `tol`.
//   * one player: optimal deterministic policy of the MDP (kArgmax);
//   * otherwise damped best response in policy space from random starts,
//     then per-state support enumeration with Newton polishing of the
//     stationary indifference system (both kIterative), then a scan of
//     per-state policy lattices (kGrid).
StochasticSolverOutcome SolveStochastic(const StochasticGame& game, double tol,
                                        const StochasticSolverOptions& options);

// Solves the stationary indifference system on one per-(player, state)
// support pattern from `start`; nullopt when Newton fails or leaves the
// simplex.
std::optional<StationaryPolicyProfile> PolishStochasticOnSupport(
    const StochasticGame& game,
    const std::vector<std::vector<std::vector<int>>>& support,
    const StationaryPolicyProfile& start);

// A grouped satisficing path over stationary profiles.  Each player is one
// group spanning all of its states.
struct StochasticPathRecord {
  std::vector<StationaryPolicyProfile> profiles;
  double epsilon = 0.0;
  double tol = kDefaultEvalTolerance;
  std::vector<std::vector<int>> per_step_satisfied;  // satisfied players
  bool terminal_is_equilibrium = false;
  std::size_t step_count = 0;
  PathStatus status = PathStatus::kEquilibrium;
  std::string failure_detail;

  std::vector<int> GroupCounts() const;
};

struct StochasticPathOptions {
  std::size_t max_steps = 100;
  StochasticSolverOptions solver;
  ProbeOptions probe;  // successor probing after a detected cycle
};

// Freeze-and-solve over stationary policies, mirroring ConstructPath.
StochasticPathRecord ConstructPathStochastic(const StochasticGame& game,
                                             const StationaryPolicyProfile& start,
                                             double epsilon,
                                             const StochasticPathOptions& options);

// Satisfied players keep every per-state distribution between consecutive
// profiles, and recorded satisfied sets match recomputation.
bool ValidateStochasticPath(const StochasticGame& game,
                            const StochasticPathRecord& path);

}  // namespace satpath

#endif  // SATPATH_MARKOV_DYNAMICS_H_
