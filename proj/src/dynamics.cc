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

#include "satpath/dynamics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "satpath/rng.h"
#include "satpath/serialization.h"

namespace satpath {
namespace {

std::string Signature(const std::vector<int>& satisfied,
                      const MixedProfile& profile) {
  std::string sig;
  for (int g : satisfied) sig += std::to_string(g) + ",";
  sig += "|";
  for (const auto& d : profile.distributions()) {
    for (double x : d) sig += std::to_string(std::llround(x * 1e6)) + ",";
    sig += ";";
  }
  return sig;
}

bool Contains(const std::vector<int>& sorted, int value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

}  // namespace

const char* PathStatusName(PathStatus status) {
  switch (status) {
    case PathStatus::kEquilibrium: return "equilibrium";
    case PathStatus::kBudgetExhausted: return "budget_exhausted";
    case PathStatus::kSolverFailure: return "solver_failure";
  }
  return "unknown";
}

PathStatus PathStatusFromName(const std::string& name) {
  if (name == "equilibrium") return PathStatus::kEquilibrium;
  if (name == "budget_exhausted") return PathStatus::kBudgetExhausted;
  if (name == "solver_failure") return PathStatus::kSolverFailure;
  Fail(ErrorKind::kSchema, "unknown path status '" + name + "'");
}

std::vector<int> PathRecord::GroupCounts() const {
  std::vector<int> counts;
  for (const auto& s : per_step_satisfied) counts.push_back(static_cast<int>(s.size()));
  return counts;
}

bool StepIsLegal(const NormalFormGame& game, const MixedProfile& current,
                 const MixedProfile& next, const SatisficingConfig& config) {
  RequireFits(game, next);
  for (int g : SatisfiedGroups(game, current, config)) {
    for (int p : config.partition.group(g)) {
      if (!current.SameStrategy(next, p)) return false;
    }
  }
  return true;
}

bool ValidatePath(const NormalFormGame& game, const PathRecord& path) {
  Require(!path.profiles.empty(), ErrorKind::kInvalidArgument, "empty path");
  if (path.per_step_satisfied.size() != path.profiles.size()) return false;
  if (path.step_count != path.profiles.size() - 1) return false;
  for (std::size_t t = 0; t < path.profiles.size(); ++t) {
    if (!path.profiles[t].FitsGame(game)) return false;
    if (SatisfiedGroups(game, path.profiles[t], path.config) !=
        path.per_step_satisfied[t]) {
      return false;
    }
    if (t + 1 < path.profiles.size() &&
        !StepIsLegal(game, path.profiles[t], path.profiles[t + 1], path.config)) {
      return false;
    }
  }
  return true;
}

SuccessorSpec ComputeSuccessorSpec(const NormalFormGame& game,
                                   const MixedProfile& profile,
                                   const SatisficingConfig& config) {
  const auto satisfied = SatisfiedGroups(game, profile, config);
  SuccessorSpec spec;
  for (int p = 0; p < game.num_players(); ++p) {
    if (Contains(satisfied, config.partition.GroupOf(p))) {
      spec.frozen_players.push_back(p);
    } else {
      spec.free_players.push_back(p);
    }
  }
  return spec;
}

std::vector<MixedProfile> SampleSuccessors(const NormalFormGame& game,
                                           const MixedProfile& profile,
                                           const SatisficingConfig& config,
                                           const ProbeOptions& probe) {
  Require(probe.budget >= 1, ErrorKind::kInvalidArgument, "budget must be >= 1");
  const int divisions = LatticeDivisions(probe.grid_step);
  const SuccessorSpec spec = ComputeSuccessorSpec(game, profile, config);
  if (spec.free_players.empty()) return {profile};

  const std::size_t k = spec.free_players.size();
  std::vector<std::vector<std::vector<double>>> lattices(k);
  std::size_t lattice_size = 1;
  bool overflow = false;
  for (std::size_t q = 0; q < k; ++q) {
    lattices[q] = SimplexLattice(game.num_actions(spec.free_players[q]), divisions);
    if (lattice_size > std::numeric_limits<std::size_t>::max() / lattices[q].size()) {
      overflow = true;
    } else {
      lattice_size *= lattices[q].size();
    }
  }

  auto dists = profile.distributions();
  std::vector<MixedProfile> out;
  out.reserve(probe.budget);
  auto emit_lattice = [&](std::size_t index) {
    // Mixed-radix decode, last free player fastest.
    for (std::size_t q = k; q-- > 0;) {
      const std::size_t radix = lattices[q].size();
      dists[spec.free_players[q]] = lattices[q][index % radix];
      index /= radix;
    }
    out.emplace_back(dists);
  };
  std::size_t random_count;
  if (!overflow && lattice_size <= probe.budget) {
    for (std::size_t i = 0; i < lattice_size; ++i) emit_lattice(i);
    random_count = probe.budget - lattice_size;
  } else {
    const std::size_t strided = (probe.budget + 1) / 2;
    const long double span =
        overflow ? static_cast<long double>(std::numeric_limits<std::size_t>::max())
                 : static_cast<long double>(lattice_size);
    for (std::size_t i = 0; i < strided; ++i) {
      emit_lattice(static_cast<std::size_t>(span * i / strided));
    }
    random_count = probe.budget - strided;
  }
  Rng rng(probe.seed, {0x53u});
  for (std::size_t i = 0; i < random_count; ++i) {
    for (int p : spec.free_players) dists[p] = rng.SimplexPoint(game.num_actions(p));
    out.emplace_back(dists);
  }
  return out;
}

LocalMinimumResult IsLocalMinimum(const NormalFormGame& game,
                                  const MixedProfile& profile,
                                  const SatisficingConfig& config,
                                  const ProbeOptions& probe) {
  const std::size_t count = SatisfiedGroups(game, profile, config).size();
  LocalMinimumResult result;
  for (auto& t : SampleSuccessors(game, profile, config, probe)) {
    if (SatisfiedGroups(game, t, config).size() < count) {
      result.certified_min = false;
      result.counterexample = std::move(t);
      break;
    }
  }
  return result;
}

PreservationResult CheckPreservation(const NormalFormGame& game,
                                     const MixedProfile& profile,
                                     const SatisficingConfig& config,
                                     const ProbeOptions& probe) {
  const auto satisfied = SatisfiedGroups(game, profile, config);
  PreservationResult result;
  for (auto& t : SampleSuccessors(game, profile, config, probe)) {
    const auto after = SatisfiedGroups(game, t, config);
    for (int g : satisfied) {
      if (!Contains(after, g)) {
        result.preserved = false;
        result.successor = std::move(t);
        result.group = g;
        return result;
      }
    }
  }
  return result;
}

PathRecord ConstructPath(const NormalFormGame& game, const MixedProfile& start,
                         const SatisficingConfig& config,
                         const EquilibriumSolver& solver,
                         const PathOptions& options) {
  Require(options.max_steps >= 1, ErrorKind::kInvalidArgument,
          "max_steps must be >= 1");
  RequireFits(game, start);
  PathRecord path;
  path.config = config;
  auto push = [&](MixedProfile profile) {
    path.per_step_satisfied.push_back(SatisfiedGroups(game, profile, config));
    path.profiles.push_back(std::move(profile));
  };
  push(start);

  const int groups = config.partition.num_groups();
  std::map<std::string, int> visits;
  bool descending = false;
  while (true) {
    const MixedProfile& current = path.profiles.back();
    const auto& satisfied = path.per_step_satisfied.back();
    if (static_cast<int>(satisfied.size()) == groups) {
      path.status = PathStatus::kEquilibrium;
      break;
    }
    if (path.profiles.size() - 1 >= options.max_steps) {
      path.status = PathStatus::kBudgetExhausted;
      break;
    }
    if (++visits[Signature(satisfied, current)] > 2) descending = true;
    const SuccessorSpec spec = ComputeSuccessorSpec(game, current, config);

    if (descending && !spec.frozen_players.empty()) {
      ProbeOptions probe = options.probe;
      probe.seed = DeriveSeed(options.probe.seed, {path.profiles.size()});
      auto local = IsLocalMinimum(game, current, config, probe);
      if (!local.certified_min) {
        push(std::move(*local.counterexample));
        continue;
      }
      descending = false;
    }

    const NormalFormGame sub = RestrictSubgame(game, current, spec.free_players);
    SolverOutcome outcome = solver.Solve(sub, config.epsilon / 2.0);
    if (!outcome.converged) {
      path.status = PathStatus::kSolverFailure;
      nlohmann::json detail;
      detail["subgame"] = GameToJson(sub);
      detail["free_players"] = spec.free_players;
      detail["outcome"] = SolverOutcomeToJson(outcome);
      path.failure_detail = detail.dump();
      break;
    }
    push(EmbedSubgameProfile(current, spec.free_players, outcome.profile));
  }
  path.step_count = path.profiles.size() - 1;
  path.terminal_is_equilibrium =
      IsEpsEquilibrium(game, path.profiles.back(), config.epsilon);
  return path;
}

std::size_t PathMinimumIndex(const PathRecord& path) {
  Require(!path.per_step_satisfied.empty(), ErrorKind::kInvalidArgument,
          "empty path");
  const auto counts = path.GroupCounts();
  return static_cast<std::size_t>(
      std::min_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace satpath
