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

#include "satpath/solvers.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "satpath/linalg.h"
#include "satpath/rng.h"

namespace satpath {
namespace {

using Dists = std::vector<std::vector<double>>;

// Deviation payoffs for unvalidated distributions; Newton iterates may leave
// the simplex before they converge.
void RawDeviationPayoffs(const NormalFormGame& game, const Dists& dists,
                         int player, std::vector<double>& out) {
  out.assign(game.num_actions(player), 0.0);
  const int n = game.num_players();
  for (std::size_t j = 0; j < game.num_joint_actions(); ++j) {
    double prob = 1.0;
    for (int p = 0; p < n && prob != 0.0; ++p) {
      if (p != player) prob *= dists[p][game.ActionOf(j, p)];
    }
    if (prob != 0.0) out[game.ActionOf(j, player)] += prob * game.payoff(player, j);
  }
}

// Clips entries within kSimplexTolerance of zero and renormalizes; nullopt if
// any entry is more negative than that.
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

int LowestArgmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

bool WithinTol(double residual, double tol) {
  return residual <= tol + kRoundingSlack;
}

SolverOutcome MakeOutcome(const NormalFormGame& game, MixedProfile profile,
                          SolverMethod method, double tol) {
  SolverOutcome out;
  out.residual = Residual(game, profile);
  out.profile = std::move(profile);
  out.method = method;
  out.converged = WithinTol(out.residual, tol);
  return out;
}

std::vector<int> MaskToActions(unsigned mask) {
  std::vector<int> actions;
  for (int a = 0; mask != 0; ++a, mask >>= 1) {
    if (mask & 1u) actions.push_back(a);
  }
  return actions;
}

// Solves for the mixture `probs` of the player choosing among `own` such that
// every action in `other` earns the same payoff `value` for the opponent.
// `payoff(other_action, own_action)` is the opponent's payoff.
template <typename PayoffFn>
std::optional<std::vector<double>> IndifferenceMixture(
    const std::vector<int>& own, const std::vector<int>& other,
    PayoffFn payoff) {
  const int unknowns = static_cast<int>(own.size()) + 1;
  const int equations = static_cast<int>(other.size()) + 1;
  Matrix a(equations, unknowns);
  std::vector<double> b(equations, 0.0);
  for (int r = 0; r < static_cast<int>(other.size()); ++r) {
    for (int c = 0; c < static_cast<int>(own.size()); ++c) {
      a(r, c) = payoff(other[r], own[c]);
    }
    a(r, unknowns - 1) = -1.0;
  }
  for (int c = 0; c < static_cast<int>(own.size()); ++c) a(equations - 1, c) = 1.0;
  b[equations - 1] = 1.0;
  std::optional<std::vector<double>> sol =
      equations == unknowns ? SolveSquare(a, b) : SolveConsistent(a, b);
  if (!sol) return std::nullopt;
  sol->pop_back();
  return sol;
}

std::size_t BinomialSaturating(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / (n - k + i)) {
      return std::numeric_limits<std::size_t>::max();
    }
    r = r * (n - k + i) / i;
  }
  return r;
}

std::size_t LatticeSize(const std::vector<int>& counts, int n) {
  std::size_t total = 1;
  for (int m : counts) {
    const std::size_t s = BinomialSaturating(n + m - 1, m - 1);
    if (s != 0 && total > kMaxGridPoints * 16 / s) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= s;
  }
  return total;
}

// Scans the cartesian product of per-player candidate sets for the minimum
// residual.  Ties keep the first point in odometer order.
std::pair<Dists, double> ScanProduct(
    const NormalFormGame& game,
    const std::vector<std::vector<std::vector<double>>>& candidates) {
  const int n = game.num_players();
  std::vector<std::size_t> idx(n, 0);
  Dists current(n), best;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> dev;
  while (true) {
    for (int p = 0; p < n; ++p) current[p] = candidates[p][idx[p]];
    double residual = 0.0;
    for (int p = 0; p < n && residual < best_residual; ++p) {
      RawDeviationPayoffs(game, current, p, dev);
      double achieved = 0.0;
      for (std::size_t a = 0; a < dev.size(); ++a) achieved += current[p][a] * dev[a];
      residual = std::max(residual,
                          *std::max_element(dev.begin(), dev.end()) - achieved);
    }
    if (residual < best_residual) {
      best_residual = residual;
      best = current;
    }
    int p = n - 1;
    while (p >= 0 && ++idx[p] == candidates[p].size()) idx[p--] = 0;
    if (p < 0) break;
  }
  return {best, std::max(0.0, best_residual)};
}

SolverOutcome GridSearch(const NormalFormGame& game, double tol, int n) {
  const int players = game.num_players();
  std::vector<std::vector<std::vector<double>>> candidates(players);
  for (int p = 0; p < players; ++p) {
    candidates[p] = SimplexLattice(game.num_actions(p), n);
  }
  auto [best, residual] = ScanProduct(game, candidates);
  // Two refinement passes, each halving the step and searching the box of
  // radius one old step around the incumbent.
  int fine = n;
  for (int pass = 0; pass < 2; ++pass) {
    const double radius = 1.0 / fine + 1e-12;
    fine *= 2;
    std::size_t product = 1;
    for (int p = 0; p < players; ++p) {
      std::vector<std::vector<double>> local;
      auto all = SimplexLattice(game.num_actions(p), fine);
      for (auto& point : all) {
        bool near = true;
        for (std::size_t a = 0; a < point.size() && near; ++a) {
          near = std::abs(point[a] - best[p][a]) <= radius;
        }
        if (near) local.push_back(std::move(point));
      }
      candidates[p] = std::move(local);
      product *= candidates[p].size();
    }
    if (product > kMaxGridPoints) break;
    auto [refined, refined_residual] = ScanProduct(game, candidates);
    if (refined_residual < residual) {
      best = std::move(refined);
      residual = refined_residual;
    }
  }
  return MakeOutcome(game, MixedProfile(best), SolverMethod::kGrid, tol);
}

std::vector<std::vector<std::vector<int>>> SupportProfiles(
    const NormalFormGame& game, std::size_t cap) {
  const int n = game.num_players();
  std::size_t total = 1;
  for (int p = 0; p < n; ++p) {
    if (game.num_actions(p) > 16) return {};
    total *= (1u << game.num_actions(p)) - 1;
    if (total > cap) return {};
  }
  std::vector<std::pair<int, std::vector<unsigned>>> keyed;
  keyed.reserve(total);
  std::vector<unsigned> masks(n, 1);
  while (true) {
    int size = 0;
    for (unsigned m : masks) size += std::popcount(m);
    keyed.emplace_back(size, masks);
    int p = n - 1;
    while (p >= 0 && ++masks[p] == (1u << game.num_actions(p))) masks[p--] = 1;
    if (p < 0) break;
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::vector<std::vector<int>>> supports;
  supports.reserve(keyed.size());
  for (const auto& [size, ms] : keyed) {
    std::vector<std::vector<int>> support;
    for (unsigned m : ms) support.push_back(MaskToActions(m));
    supports.push_back(std::move(support));
  }
  return supports;
}

}  // namespace

const char* SolverMethodName(SolverMethod method) {
  switch (method) {
    case SolverMethod::kArgmax: return "argmax";
    case SolverMethod::kSupportEnum: return "support_enum";
    case SolverMethod::kIterative: return "iterative";
    case SolverMethod::kGrid: return "grid";
  }
  return "unknown";
}

SolverMethod SolverMethodFromName(const std::string& name) {
  if (name == "argmax") return SolverMethod::kArgmax;
  if (name == "support_enum") return SolverMethod::kSupportEnum;
  if (name == "iterative") return SolverMethod::kIterative;
  if (name == "grid") return SolverMethod::kGrid;
  Fail(ErrorKind::kSchema, "unknown solver method '" + name + "'");
}

SolverOutcome SolveOnePlayer(const NormalFormGame& game) {
  Require(game.num_players() == 1, ErrorKind::kInvalidArgument,
          "SolveOnePlayer needs a one-player game");
  std::vector<double> values(game.num_actions(0));
  for (int a = 0; a < game.num_actions(0); ++a) values[a] = game.payoff(0, a);
  const int best = LowestArgmax(values);
  SolverOutcome out;
  out.profile = MixedProfile::Pure(game.action_counts(), std::vector<int>{best});
  out.residual = 0.0;
  out.method = SolverMethod::kArgmax;
  out.converged = true;
  return out;
}

SolverOutcome SolveTwoPlayer(const NormalFormGame& game, double tol) {
  Require(game.num_players() == 2, ErrorKind::kInvalidArgument,
          "SolveTwoPlayer needs a two-player game");
  const int rows = game.num_actions(0);
  const int cols = game.num_actions(1);
  Require(rows <= kMaxSupportEnumActions && cols <= kMaxSupportEnumActions,
          ErrorKind::kBudget, "support enumeration is capped at 8 actions");
  auto row_payoff = [&](int a, int b) { return game.payoff(0, a * cols + b); };
  auto col_payoff = [&](int a, int b) { return game.payoff(1, a * cols + b); };

  std::vector<std::tuple<int, unsigned, unsigned>> pairs;
  for (unsigned rm = 1; rm < (1u << rows); ++rm) {
    for (unsigned cm = 1; cm < (1u << cols); ++cm) {
      pairs.emplace_back(std::popcount(rm) + std::popcount(cm), rm, cm);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [size, rm, cm] : pairs) {
    const auto row_support = MaskToActions(rm);
    const auto col_support = MaskToActions(cm);
    // Column mixture makes the row player indifferent on its support, and
    // vice versa.
    auto y = IndifferenceMixture(col_support, row_support, row_payoff);
    if (!y) continue;
    auto x = IndifferenceMixture(
        row_support, col_support, [&](int b, int a) { return col_payoff(a, b); });
    if (!x) continue;
    std::vector<double> row_dist(rows, 0.0), col_dist(cols, 0.0);
    for (std::size_t k = 0; k < row_support.size(); ++k) {
      row_dist[row_support[k]] = (*x)[k];
    }
    for (std::size_t k = 0; k < col_support.size(); ++k) {
      col_dist[col_support[k]] = (*y)[k];
    }
    auto row_simplex = ToSimplex(std::move(row_dist));
    auto col_simplex = ToSimplex(std::move(col_dist));
    if (!row_simplex || !col_simplex) continue;
    SolverOutcome out = MakeOutcome(
        game, MixedProfile({std::move(*row_simplex), std::move(*col_simplex)}),
        SolverMethod::kSupportEnum, tol);
    if (out.converged) return out;
  }
  Fail(ErrorKind::kSolverFailure,
       "support enumeration found no profile with residual <= tol");
}

std::optional<MixedProfile> PolishOnSupport(
    const NormalFormGame& game, const std::vector<std::vector<int>>& support,
    const MixedProfile& start) {
  const int n = game.num_players();
  RequireFits(game, start);
  Require(static_cast<int>(support.size()) == n, ErrorKind::kStructural,
          "support has wrong number of players");
  std::vector<int> offset(n + 1, 0);
  for (int p = 0; p < n; ++p) {
    Require(!support[p].empty(), ErrorKind::kStructural, "empty support");
    offset[p + 1] = offset[p] + static_cast<int>(support[p].size()) + 1;
  }
  // z = [x_p on support..., v_p] for each player p.
  Dists dists(n);
  for (int p = 0; p < n; ++p) dists[p].assign(game.num_actions(p), 0.0);
  auto unpack = [&](std::span<const double> z) {
    for (int p = 0; p < n; ++p) {
      std::fill(dists[p].begin(), dists[p].end(), 0.0);
      for (std::size_t k = 0; k < support[p].size(); ++k) {
        dists[p][support[p][k]] = z[offset[p] + k];
      }
    }
  };
  std::vector<double> dev;
  ResidualFn f = [&](std::span<const double> z, std::span<double> out) {
    unpack(z);
    for (int p = 0; p < n; ++p) {
      RawDeviationPayoffs(game, dists, p, dev);
      const int k = static_cast<int>(support[p].size());
      const double value = z[offset[p] + k];
      double mass = 0.0;
      for (int q = 0; q < k; ++q) {
        out[offset[p] + q] = dev[support[p][q]] - value;
        mass += z[offset[p] + q];
      }
      out[offset[p] + k] = mass - 1.0;
    }
  };
  std::vector<double> z(offset[n]);
  for (int p = 0; p < n; ++p) {
    const int k = static_cast<int>(support[p].size());
    double mass = 0.0;
    for (int q = 0; q < k; ++q) mass += start.dist(p)[support[p][q]];
    for (int q = 0; q < k; ++q) {
      z[offset[p] + q] =
          mass > 0.0 ? start.dist(p)[support[p][q]] / mass : 1.0 / k;
    }
    unpack(z);
    RawDeviationPayoffs(game, dists, p, dev);
    double value = 0.0;
    for (int q = 0; q < k; ++q) value += z[offset[p] + q] * dev[support[p][q]];
    z[offset[p] + k] = value;
  }
  NewtonOptions options;
  options.tolerance = 1e-12;
  auto root = NewtonSolve(f, std::move(z), options);
  if (!root) return std::nullopt;
  unpack(*root);
  Dists result(n);
  for (int p = 0; p < n; ++p) {
    auto simplex = ToSimplex(dists[p]);
    if (!simplex) return std::nullopt;
    result[p] = std::move(*simplex);
  }
  return MixedProfile(std::move(result));
}

SolverOutcome SolveGrid(const NormalFormGame& game, double tol) {
  const int n = 20;  // step 0.05
  Require(LatticeSize(game.action_counts(), n) <= kMaxGridPoints,
          ErrorKind::kBudget, "grid lattice at step 0.05 exceeds 1e7 points");
  return GridSearch(game, tol, n);
}

SolverOutcome SolveIterative(const NormalFormGame& game,
                             const IterativeOptions& options) {
  Require(options.restarts >= 1, ErrorKind::kInvalidArgument,
          "restarts must be >= 1");
  const int n = game.num_players();
  const double tol = options.tol;
  std::vector<double> dev;
  for (int restart = 0; restart < options.restarts; ++restart) {
    Rng rng(options.seed, {static_cast<std::uint64_t>(restart)});
    Dists sigma(n);
    for (int p = 0; p < n; ++p) sigma[p] = rng.SimplexPoint(game.num_actions(p));
    double restart_best = std::numeric_limits<double>::infinity();
    int since_improvement = 0;
    for (int iter = 0; iter <= options.max_iters; ++iter) {
      MixedProfile profile(sigma);
      const double residual = Residual(game, profile);
      if (WithinTol(residual, tol)) {
        return MakeOutcome(game, std::move(profile), SolverMethod::kIterative, tol);
      }
      std::vector<int> br(n);
      for (int p = 0; p < n; ++p) {
        RawDeviationPayoffs(game, sigma, p, dev);
        br[p] = LowestArgmax(dev);
      }
      MixedProfile vertex = MixedProfile::Pure(game.action_counts(), br);
      if (WithinTol(Residual(game, vertex), tol)) {
        return MakeOutcome(game, std::move(vertex), SolverMethod::kIterative, tol);
      }
      if (residual < restart_best - 1e-12) {
        restart_best = residual;
        since_improvement = 0;
      } else if (++since_improvement > 200) {
        break;
      }
      for (int p = 0; p < n; ++p) {
        for (double& x : sigma[p]) x *= 0.5;
        sigma[p][br[p]] += 0.5;
      }
    }
  }

  // Support enumeration with Newton polishing of the indifference system.
  const auto supports = SupportProfiles(game, 100'000);
  for (std::size_t s = 0; s < supports.size(); ++s) {
    const auto& support = supports[s];
    std::vector<MixedProfile> starts;
    Dists centroid(n);
    for (int p = 0; p < n; ++p) {
      centroid[p].assign(game.num_actions(p), 0.0);
      for (int a : support[p]) centroid[p][a] = 1.0 / support[p].size();
    }
    starts.emplace_back(centroid);
    Rng rng(options.seed, {0x5u, static_cast<std::uint64_t>(s)});
    for (int k = 0; k < 2; ++k) {
      Dists random(n);
      for (int p = 0; p < n; ++p) {
        random[p].assign(game.num_actions(p), 0.0);
        const auto point = rng.SimplexPoint(static_cast<int>(support[p].size()));
        for (std::size_t q = 0; q < support[p].size(); ++q) {
          random[p][support[p][q]] = point[q];
        }
      }
      starts.emplace_back(random);
    }
    for (const auto& start : starts) {
      auto polished = PolishOnSupport(game, support, start);
      if (!polished) continue;
      SolverOutcome out =
          MakeOutcome(game, std::move(*polished), SolverMethod::kIterative, tol);
      if (out.converged) return out;
    }
  }

  // Last resort: lattice scan, coarsened until it fits the point budget.
  int lattice = 20;
  while (lattice > 1 && LatticeSize(game.action_counts(), lattice) > kMaxGridPoints) {
    lattice /= 2;
  }
  SolverOutcome grid = GridSearch(game, tol, lattice);
  if (!grid.converged) {
    std::vector<std::vector<int>> support(n);
    for (int p = 0; p < n; ++p) {
      for (int a = 0; a < game.num_actions(p); ++a) {
        if (grid.profile.dist(p)[a] > kSimplexTolerance) support[p].push_back(a);
      }
    }
    if (auto polished = PolishOnSupport(game, support, grid.profile)) {
      SolverOutcome out =
          MakeOutcome(game, std::move(*polished), SolverMethod::kIterative, tol);
      if (out.converged) return out;
    }
  }
  return grid;
}

SolverOutcome EquilibriumSolver::Solve(const NormalFormGame& game,
                                       double tol) const {
  if (game.num_players() == 1) return SolveOnePlayer(game);
  if (game.num_players() == 2 && game.num_actions(0) <= kMaxSupportEnumActions &&
      game.num_actions(1) <= kMaxSupportEnumActions) {
    try {
      return SolveTwoPlayer(game, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSolverFailure) throw;
    }
  }
  IterativeOptions options = options_;
  options.tol = tol;
  return SolveIterative(game, options);
}

}  // namespace satpath
