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

#ifndef SATPATH_SOLVERS_H_
#define SATPATH_SOLVERS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satpath/game.h"

namespace satpath {

enum class SolverMethod { kArgmax, kSupportEnum, kIterative, kGrid };

const char* SolverMethodName(SolverMethod method);
SolverMethod SolverMethodFromName(const std::string& name);

struct SolverOutcome {
  MixedProfile profile;
  double residual = 0.0;  // max over players of best response minus payoff
  SolverMethod method = SolverMethod::kArgmax;
  // residual <= requested tolerance (plus kRoundingSlack).
  bool converged = false;
};

inline constexpr double kDefaultSolverTolerance = 1e-6;
inline constexpr int kMaxSupportEnumActions = 8;
inline constexpr std::size_t kMaxGridPoints = 10'000'000;

// Pure argmax of a one-player game, lowest index on ties.
SolverOutcome SolveOnePlayer(const NormalFormGame& game);

// Support enumeration for bimatrix games with at most 8 actions per player.
// Support pairs are visited by increasing total size, then lexicographically
// by bitmask.  Throws kSolverFailure when no pair reaches `tol`.
SolverOutcome SolveTwoPlayer(const NormalFormGame& game, double tol);

struct IterativeOptions {
  double tol = kDefaultSolverTolerance;
  std::uint64_t seed = 0;
  int restarts = 8;
  int max_iters = 2000;
};

// Damped simultaneous best response (sigma <- sigma/2 + BR-vertex/2) from
// random starts.  If no restart reaches `tol` it falls back to support
// enumeration with Newton polishing, and finally to SolveGrid.  The result
// either has residual <= tol or method == kGrid.
SolverOutcome SolveIterative(const NormalFormGame& game,
                             const IterativeOptions& options);

// Exhaustive simplex-lattice scan at step 0.05 followed by two local
// refinement passes at 0.025 and 0.0125.  Throws kBudget when the product of
// the per-player lattices exceeds kMaxGridPoints.
SolverOutcome SolveGrid(const NormalFormGame& game, double tol);

// Solves the indifference system on one support profile by Newton's method
// from `start` (restricted to the support), then verifies the residual.
// Exposed for tests; nullopt when Newton fails or the root leaves the
// simplex.
std::optional<MixedProfile> PolishOnSupport(
    const NormalFormGame& game, const std::vector<std::vector<int>>& support,
    const MixedProfile& start);

// Dispatches by player count: one player -> argmax, two players with small
// action sets -> support enumeration (grid on failure), otherwise iterative.
class EquilibriumSolver {
 public:
  EquilibriumSolver() = default;
  explicit EquilibriumSolver(IterativeOptions options) : options_(options) {}

  SolverOutcome Solve(const NormalFormGame& game, double tol) const;
  const IterativeOptions& options() const { return options_; }

 private:
  IterativeOptions options_;
};

}  // namespace satpath

#endif  // SATPATH_SOLVERS_H_
