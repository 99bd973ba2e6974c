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

#include "satpath/markov_dynamics.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "satpath/linalg.h"
#include "satpath/rng.h"
#include "satpath/serialization.h"

namespace satpath {
namespace {

using Policies = std::vector<std::vector<std::vector<double>>>;

bool Accepts(double residual, double tol, double eval_tol) {
  return residual <= tol + 2.0 * eval_tol + kRoundingSlack;
}

StochasticSolverOutcome MakeOutcome(const StochasticGame& game,
                                    StationaryPolicyProfile pi, SolverMethod method,
                                    double tol, double eval_tol) {
  StochasticSolverOutcome out;
  out.residual = MarkovResidual(game, pi, eval_tol);
  out.policy = std::move(pi);
  out.method = method;
  out.converged = Accepts(out.residual, tol, eval_tol);
  return out;
}

std::optional<std::vector<double>> ToSimplex(std::vector<double> v) {
  double sum = 0.0;
  for (double& x : v) {
    if (!std::isfinite(x) || x < -kSimplexTolerance) return std::nullopt;
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  if (sum <= 0.0) return std::nullopt;
  for (double& x : v) x /= sum;
  return v;
}

// Per-(player, state) support patterns in order of increasing total size,
// at most `cap` of them.
std::vector<std::vector<std::vector<std::vector<int>>>> SupportPatterns(
    const StochasticGame& game, std::size_t cap) {
  const int n = game.num_players();
  const int states = game.num_states();
  std::vector<int> limits;  // one mask slot per (player, state)
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (game.num_actions(i) > 16) return {};
    for (int x = 0; x < states; ++x) {
      limits.push_back((1 << game.num_actions(i)) - 1);
      total *= limits.back();
      if (total > cap) return {};
    }
  }
  std::vector<std::pair<int, std::vector<unsigned>>> keyed;
  std::vector<unsigned> masks(limits.size(), 1);
  while (true) {
    int size = 0;
    for (unsigned m : masks) size += std::popcount(m);
    keyed.emplace_back(size, masks);
    int slot = static_cast<int>(masks.size()) - 1;
    while (slot >= 0 && masks[slot] == static_cast<unsigned>(limits[slot])) {
      masks[slot--] = 1;
    }
    if (slot < 0) break;
    ++masks[slot];
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::vector<std::vector<std::vector<int>>>> patterns;
  for (const auto& [size, ms] : keyed) {
    std::vector<std::vector<std::vector<int>>> pattern(n);
    for (int i = 0; i < n; ++i) {
      for (int x = 0; x < states; ++x) {
        std::vector<int> actions;
        unsigned m = ms[i * states + x];
        for (int a = 0; m != 0; ++a, m >>= 1) {
          if (m & 1u) actions.push_back(a);
        }
        pattern[i].push_back(std::move(actions));
      }
    }
    patterns.push_back(std::move(pattern));
  }
  return patterns;
}

Policies RandomPolicies(const StochasticGame& game, Rng& rng) {
  Policies policies(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    for (int x = 0; x < game.num_states(); ++x) {
      policies[i].push_back(rng.SimplexPoint(game.num_actions(i)));
    }
  }
  return policies;
}

std::optional<StochasticSolverOutcome> DampedBestResponse(
    const StochasticGame& game, double tol, const StochasticSolverOptions& options) {
  const int n = game.num_players();
  const double eval_tol = options.eval_tol;
  for (int restart = 0; restart < options.restarts; ++restart) {
    Rng rng(options.seed, {static_cast<std::uint64_t>(restart)});
    Policies policies = RandomPolicies(game, rng);
    double restart_best = std::numeric_limits<double>::infinity();
    int since_improvement = 0;
    for (int iter = 0; iter <= options.max_iters; ++iter) {
      StationaryPolicyProfile pi(policies);
      double residual = 0.0;
      std::vector<std::vector<int>> greedy(n);
      for (int i = 0; i < n; ++i) {
        const auto value = EvaluatePolicy(game, pi, i, eval_tol);
        auto br = InducedMdpBestResponse(game, pi, i, eval_tol);
        for (int x = 0; x < game.num_states(); ++x) {
          residual = std::max(residual, br.values[x] - value[x]);
        }
        greedy[i] = std::move(br.policy);
      }
      if (Accepts(residual, tol, eval_tol)) {
        return MakeOutcome(game, std::move(pi), SolverMethod::kIterative, tol, eval_tol);
      }
      auto vertex = StationaryPolicyProfile::Pure(game.action_counts(), greedy);
      auto vertex_outcome =
          MakeOutcome(game, std::move(vertex), SolverMethod::kIterative, tol, eval_tol);
      if (vertex_outcome.converged) return vertex_outcome;
      if (residual < restart_best - 1e-12) {
        restart_best = residual;
        since_improvement = 0;
      } else if (++since_improvement > 200) {
        break;
      }
      for (int i = 0; i < n; ++i) {
        for (int x = 0; x < game.num_states(); ++x) {
          for (double& p : policies[i][x]) p *= 0.5;
          policies[i][x][greedy[i][x]] += 0.5;
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<std::vector<std::vector<int>>> SupportOf(
    const StationaryPolicyProfile& pi) {
  std::vector<std::vector<std::vector<int>>> support(pi.num_players());
  for (int i = 0; i < pi.num_players(); ++i) {
    for (int x = 0; x < pi.num_states(); ++x) {
      std::vector<int> actions;
      const auto& d = pi.policy(i, x);
      for (int a = 0; a < static_cast<int>(d.size()); ++a) {
        if (d[a] > kSimplexTolerance) actions.push_back(a);
      }
      support[i].push_back(std::move(actions));
    }
  }
  return support;
}

StochasticSolverOutcome GridScan(const StochasticGame& game, double tol,
                                 const StochasticSolverOptions& options) {
  const int n = game.num_players();
  const int states = game.num_states();
  int divisions = LatticeDivisions(options.grid_step);
  auto count_points = [&](int d) {
    long double total = 1;
    for (int i = 0; i < n; ++i) {
      const auto per_state =
          static_cast<long double>(SimplexLattice(game.num_actions(i), d).size());
      for (int x = 0; x < states; ++x) total *= per_state;
    }
    return total;
  };
  while (divisions > 1 &&
         count_points(divisions) > static_cast<long double>(options.max_grid_points)) {
    divisions /= 2;
  }
  // One odometer slot per (player, state).
  std::vector<std::vector<std::vector<double>>> lattices;
  for (int i = 0; i < n; ++i) {
    auto lattice = SimplexLattice(game.num_actions(i), divisions);
    for (int x = 0; x < states; ++x) lattices.push_back(lattice);
  }
  std::vector<std::size_t> idx(lattices.size(), 0);
  std::optional<StochasticSolverOutcome> best;
  std::size_t scanned = 0;
  while (scanned < options.max_grid_points) {
    Policies policies(n);
    for (int i = 0; i < n; ++i) {
      for (int x = 0; x < states; ++x) {
        const std::size_t slot = i * states + x;
        policies[i].push_back(lattices[slot][idx[slot]]);
      }
    }
    auto outcome = MakeOutcome(game, StationaryPolicyProfile(std::move(policies)),
                               SolverMethod::kGrid, tol, options.eval_tol);
    if (!best || outcome.residual < best->residual) best = std::move(outcome);
    ++scanned;
    int slot = static_cast<int>(idx.size()) - 1;
    while (slot >= 0 && ++idx[slot] == lattices[slot].size()) idx[slot--] = 0;
    if (slot < 0) break;
  }
  return *best;
}

}  // namespace

std::optional<StationaryPolicyProfile> PolishStochasticOnSupport(
    const StochasticGame& game,
    const std::vector<std::vector<std::vector<int>>>& support,
    const StationaryPolicyProfile& start) {
  RequireFits(game, start);
  const int n = game.num_players();
  const int states = game.num_states();
  Require(static_cast<int>(support.size()) == n, ErrorKind::kStructural,
          "support needs one entry per player");
  // Block (i, x) of z holds the support probabilities followed by V_i(x).
  std::vector<int> offset;
  int size = 0;
  for (int i = 0; i < n; ++i) {
    Require(static_cast<int>(support[i].size()) == states, ErrorKind::kStructural,
            "support needs one entry per state");
    for (int x = 0; x < states; ++x) {
      Require(!support[i][x].empty(), ErrorKind::kStructural, "empty support");
      offset.push_back(size);
      size += static_cast<int>(support[i][x].size()) + 1;
    }
  }
  Policies policies(n, std::vector<std::vector<double>>(states));
  for (int i = 0; i < n; ++i) {
    for (int x = 0; x < states; ++x) policies[i][x].assign(game.num_actions(i), 0.0);
  }
  auto unpack = [&](std::span<const double> z) {
    for (int i = 0; i < n; ++i) {
      for (int x = 0; x < states; ++x) {
        auto& d = policies[i][x];
        std::fill(d.begin(), d.end(), 0.0);
        const int o = offset[i * states + x];
        for (std::size_t k = 0; k < support[i][x].size(); ++k) {
          d[support[i][x][k]] = z[o + k];
        }
      }
    }
  };
  auto value_of = [&](std::span<const double> z, int i, int y) {
    return z[offset[i * states + y] + support[i][y].size()];
  };
  const std::size_t joints = game.num_joint_actions();
  std::vector<double> q;
  ResidualFn f = [&](std::span<const double> z, std::span<double> out) {
    unpack(z);
    for (int i = 0; i < n; ++i) {
      const double gamma = game.discount(i);
      for (int x = 0; x < states; ++x) {
        q.assign(game.num_actions(i), 0.0);
        for (std::size_t j = 0; j < joints; ++j) {
          double weight = 1.0;
          for (int p = 0; p < n && weight != 0.0; ++p) {
            if (p != i) weight *= policies[p][x][game.ActionOf(j, p)];
          }
          if (weight == 0.0) continue;
          double cont = game.payoff(x, j, i);
          for (const auto& t : game.transitions(x, j)) {
            cont += gamma * t.prob * value_of(z, i, t.next);
          }
          q[game.ActionOf(j, i)] += weight * cont;
        }
        const int o = offset[i * states + x];
        const int k = static_cast<int>(support[i][x].size());
        const double v = z[o + k];
        double mass = 0.0;
        for (int c = 0; c < k; ++c) {
          out[o + c] = q[support[i][x][c]] - v;
          mass += z[o + c];
        }
        out[o + k] = mass - 1.0;
      }
    }
  };
  std::vector<double> z(size);
  for (int i = 0; i < n; ++i) {
    for (int x = 0; x < states; ++x) {
      const int o = offset[i * states + x];
      const auto& sup = support[i][x];
      double mass = 0.0;
      for (int a : sup) mass += start.policy(i, x)[a];
      for (std::size_t c = 0; c < sup.size(); ++c) {
        z[o + c] = mass > 0.0 ? start.policy(i, x)[sup[c]] / mass : 1.0 / sup.size();
      }
    }
  }
  // Seed the value unknowns with the exact values of the starting mixture.
  unpack(z);
  {
    StationaryPolicyProfile seeded(policies);
    for (int i = 0; i < n; ++i) {
      const auto v = EvaluatePolicy(game, seeded, i, 1e-10);
      for (int x = 0; x < states; ++x) {
        z[offset[i * states + x] + support[i][x].size()] = v[x];
      }
    }
  }
  NewtonOptions options;
  options.tolerance = 1e-11;
  auto root = NewtonSolve(f, std::move(z), options);
  if (!root) return std::nullopt;
  unpack(*root);
  for (int i = 0; i < n; ++i) {
    for (int x = 0; x < states; ++x) {
      auto simplex = ToSimplex(policies[i][x]);
      if (!simplex) return std::nullopt;
      policies[i][x] = std::move(*simplex);
    }
  }
  return StationaryPolicyProfile(std::move(policies));
}

StochasticSolverOutcome SolveStochastic(const StochasticGame& game, double tol,
                                        const StochasticSolverOptions& options) {
  const double eval_tol = options.eval_tol;
  if (game.num_players() == 1) {
    const auto uniform =
        StationaryPolicyProfile::Uniform(game.action_counts(), game.num_states());
    const auto br = InducedMdpBestResponse(game, uniform, 0, eval_tol);
    return MakeOutcome(game,
                       StationaryPolicyProfile::Pure(game.action_counts(), {br.policy}),
                       SolverMethod::kArgmax, tol, eval_tol);
  }
  if (auto damped = DampedBestResponse(game, tol, options)) return *damped;

  const auto patterns = SupportPatterns(game, 20'000);
  for (std::size_t s = 0; s < patterns.size(); ++s) {
    const auto& pattern = patterns[s];
    Policies centroid(game.num_players());
    for (int i = 0; i < game.num_players(); ++i) {
      for (int x = 0; x < game.num_states(); ++x) {
        std::vector<double> d(game.num_actions(i), 0.0);
        for (int a : pattern[i][x]) d[a] = 1.0 / pattern[i][x].size();
        centroid[i].push_back(std::move(d));
      }
    }
    Rng rng(options.seed, {0x5u, static_cast<std::uint64_t>(s)});
    Policies random(game.num_players());
    for (int i = 0; i < game.num_players(); ++i) {
      for (int x = 0; x < game.num_states(); ++x) {
        std::vector<double> d(game.num_actions(i), 0.0);
        const auto point = rng.SimplexPoint(static_cast<int>(pattern[i][x].size()));
        for (std::size_t c = 0; c < pattern[i][x].size(); ++c) {
          d[pattern[i][x][c]] = point[c];
        }
        random[i].push_back(std::move(d));
      }
    }
    for (const auto& start : {StationaryPolicyProfile(centroid),
                              StationaryPolicyProfile(random)}) {
      auto polished = PolishStochasticOnSupport(game, pattern, start);
      if (!polished) continue;
      auto outcome =
          MakeOutcome(game, std::move(*polished), SolverMethod::kIterative, tol, eval_tol);
      if (outcome.converged) return outcome;
    }
  }

  StochasticSolverOutcome grid = GridScan(game, tol, options);
  if (!grid.converged) {
    if (auto polished = PolishStochasticOnSupport(game, SupportOf(grid.policy),
                                                  grid.policy)) {
      auto outcome =
          MakeOutcome(game, std::move(*polished), SolverMethod::kIterative, tol, eval_tol);
      if (outcome.converged) return outcome;
    }
  }
  return grid;
}

std::vector<int> StochasticPathRecord::GroupCounts() const {
  std::vector<int> counts;
  for (const auto& s : per_step_satisfied) counts.push_back(static_cast<int>(s.size()));
  return counts;
}

StochasticPathRecord ConstructPathStochastic(const StochasticGame& game,
                                             const StationaryPolicyProfile& start,
                                             double epsilon,
                                             const StochasticPathOptions& options) {
  Require(options.max_steps >= 1, ErrorKind::kInvalidArgument,
          "max_steps must be >= 1");
  Require(epsilon >= 0.0, ErrorKind::kInvalidArgument, "epsilon must be >= 0");
  RequireFits(game, start);
  const double tol = options.solver.eval_tol;
  const int n = game.num_players();
  StochasticPathRecord path;
  path.epsilon = epsilon;
  path.tol = tol;
  auto push = [&](StationaryPolicyProfile pi) {
    path.per_step_satisfied.push_back(
        StationarySatisfiedPlayers(game, pi, epsilon, tol));
    path.profiles.push_back(std::move(pi));
  };
  push(start);

  std::map<std::string, int> visits;
  bool descending = false;
  while (true) {
    const StationaryPolicyProfile& current = path.profiles.back();
    const std::vector<int> satisfied = path.per_step_satisfied.back();
    if (static_cast<int>(satisfied.size()) == n) {
      path.status = PathStatus::kEquilibrium;
      break;
    }
    if (path.profiles.size() - 1 >= options.max_steps) {
      path.status = PathStatus::kBudgetExhausted;
      break;
    }
    std::string signature;
    for (int i : satisfied) signature += std::to_string(i) + ",";
    signature += "|";
    for (const auto& player : current.policies()) {
      for (const auto& d : player) {
        for (double x : d) signature += std::to_string(std::llround(x * 1e6)) + ",";
      }
    }
    if (++visits[signature] > 2) descending = true;

    std::vector<int> free_players;
    for (int i = 0; i < n; ++i) {
      if (!std::binary_search(satisfied.begin(), satisfied.end(), i)) {
        free_players.push_back(i);
      }
    }

    if (descending && !satisfied.empty()) {
      // Look for an admissible successor with fewer satisfied players.
      Rng rng(options.probe.seed, {path.profiles.size()});
      const int divisions = LatticeDivisions(options.probe.grid_step);
      std::optional<StationaryPolicyProfile> lower;
      for (std::size_t k = 0; k < options.probe.budget && !lower; ++k) {
        auto policies = current.policies();
        for (int i : free_players) {
          const auto lattice = SimplexLattice(game.num_actions(i), divisions);
          for (int x = 0; x < game.num_states(); ++x) {
            policies[i][x] = rng.Uniform01() < 0.5
                                 ? lattice[rng.Below(lattice.size())]
                                 : rng.SimplexPoint(game.num_actions(i));
          }
        }
        StationaryPolicyProfile candidate(std::move(policies));
        if (StationarySatisfiedPlayers(game, candidate, epsilon, tol).size() <
            satisfied.size()) {
          lower = std::move(candidate);
        }
      }
      if (lower) {
        push(std::move(*lower));
        continue;
      }
      descending = false;
    }

    StochasticSolverOutcome outcome;
    if (satisfied.empty()) {
      outcome = SolveStochastic(game, epsilon / 2.0, options.solver);
    } else {
      const FrozenSubgame sub = FreezePlayersStochastic(game, current, satisfied);
      outcome = SolveStochastic(sub.game, epsilon / 2.0, options.solver);
      if (outcome.converged) {
        outcome.policy = EmbedFreePolicies(current, sub.free_players, outcome.policy);
      } else {
        nlohmann::json detail;
        detail["subgame"] = StochasticGameToJson(sub.game);
        detail["free_players"] = sub.free_players;
        detail["residual"] = outcome.residual;
        path.failure_detail = detail.dump();
      }
    }
    if (!outcome.converged) {
      if (path.failure_detail.empty()) {
        nlohmann::json detail;
        detail["subgame"] = StochasticGameToJson(game);
        detail["free_players"] = free_players;
        detail["residual"] = outcome.residual;
        path.failure_detail = detail.dump();
      }
      path.status = PathStatus::kSolverFailure;
      break;
    }
    push(std::move(outcome.policy));
  }
  path.step_count = path.profiles.size() - 1;
  path.terminal_is_equilibrium =
      IsMarkovEpsEquilibrium(game, path.profiles.back(), epsilon, tol);
  return path;
}

bool ValidateStochasticPath(const StochasticGame& game,
                            const StochasticPathRecord& path) {
  Require(!path.profiles.empty(), ErrorKind::kInvalidArgument, "empty path");
  if (path.per_step_satisfied.size() != path.profiles.size()) return false;
  if (path.step_count != path.profiles.size() - 1) return false;
  for (std::size_t t = 0; t < path.profiles.size(); ++t) {
    if (!path.profiles[t].FitsGame(game)) return false;
    const auto satisfied =
        StationarySatisfiedPlayers(game, path.profiles[t], path.epsilon, path.tol);
    if (satisfied != path.per_step_satisfied[t]) return false;
    if (t + 1 == path.profiles.size()) break;
    for (int i : satisfied) {
      if (!path.profiles[t].SamePlayerPolicy(path.profiles[t + 1], i)) return false;
    }
  }
  return true;
}

}  // namespace satpath
