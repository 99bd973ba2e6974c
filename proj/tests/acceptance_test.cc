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

// Acceptance suite.  Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.  Seeds are fixed.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "satpath/cli.h"
#include "satpath/dynamics.h"
#include "satpath/experiment.h"
#include "satpath/generators.h"
#include "satpath/markov.h"
#include "satpath/markov_dynamics.h"
#include "satpath/serialization.h"
#include "test_util.h"

namespace satpath {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Format(const char* fmt, ...) {
  char buffer[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof(buffer), fmt, args);
  va_end(args);
  return buffer;
}

std::vector<std::uint64_t> SeedRange(std::uint64_t n) {
  std::vector<std::uint64_t> seeds(n);
  for (std::uint64_t s = 0; s < n; ++s) seeds[s] = s;
  return seeds;
}

double SupDiff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

Verdict ExistenceNormalForm() {
  ExperimentConfig config;
  config.kind = ExperimentKind::kNormalFormPath;
  config.min_players = 2;
  config.max_players = 3;
  config.min_actions = 2;
  config.max_actions = 3;
  config.epsilon = 1e-6;
  config.max_steps = 100;
  config.seeds = SeedRange(200);
  const auto begin = std::chrono::steady_clock::now();
  const RunReport report = RunExperiment(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  int success = 0, valid = 0, unflagged_failures = 0;
  for (const auto& r : report.records) {
    const NormalFormGame game = GameFromJson(r.detail["game"]);
    const PathRecord path = PathFromJson(r.detail["path"]);
    valid += ValidatePath(game, path);
    success += path.terminal_is_equilibrium;
    if (!path.terminal_is_equilibrium && path.status == PathStatus::kEquilibrium) {
      ++unflagged_failures;
    }
  }
  const int n = static_cast<int>(report.records.size());
  return {success >= 0.95 * n && valid == n && unflagged_failures == 0 && seconds < 300,
          Format("equilibrium %d/%d, valid %d/%d, unflagged failures %d, %.1f s", success, n,
                 valid, n, unflagged_failures, seconds)};
}

// Path legality checked player by player, with no notion of groups.
bool PerPlayerPathLegal(const NormalFormGame& game, const std::vector<MixedProfile>& path,
                        double eps) {
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    for (int i = 0; i < game.num_players(); ++i) {
      double best = -1e300;
      for (int a = 0; a < game.num_actions(i); ++a) {
        auto dev = path[t].distributions();
        dev[i].assign(game.num_actions(i), 0.0);
        dev[i][a] = 1.0;
        best = std::max(best, testing::BruteExpectedPayoff(game, dev, i));
      }
      const double value = testing::BruteExpectedPayoff(game, path[t].distributions(), i);
      if (value < best - eps - kRoundingSlack) continue;
      for (int a = 0; a < game.num_actions(i); ++a) {
        if (std::abs(path[t].dist(i)[a] - path[t + 1].dist(i)[a]) > kSimplexTolerance) {
          return false;
        }
      }
    }
  }
  return true;
}

Verdict GroupedReduction() {
  Rng rng(2);
  int mismatches = 0, legal = 0;
  const int pairs = 100;
  for (int trial = 0; trial < pairs; ++trial) {
    std::vector<int> counts(2 + rng.Below(2));
    for (int& m : counts) m = 2 + static_cast<int>(rng.Below(2));
    const NormalFormGame game = testing::RandomGame(counts, rng);
    const double eps = rng.Below(2) ? 0.0 : rng.Uniform(0, 0.3);
    const SatisficingConfig config{eps, GroupPartition::Singletons(game.num_players())};
    // Half the paths move only unsatisfied players; the rest move anyone.
    const bool careful = trial % 2 == 0;
    PathRecord path;
    path.config = config;
    std::vector<int> start(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) start[i] = rng.Below(counts[i]);
    path.profiles.push_back(MixedProfile::Pure(counts, start));
    const int length = 2 + static_cast<int>(rng.Below(5));
    for (int t = 1; t < length; ++t) {
      const MixedProfile& s = path.profiles.back();
      const auto satisfied = SatisfiedGroups(game, s, config);
      auto next = s.distributions();
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const bool frozen =
            std::find(satisfied.begin(), satisfied.end(), static_cast<int>(i)) != satisfied.end();
        if ((careful && frozen) || rng.Below(2)) continue;
        if (rng.Below(2)) {
          next[i].assign(counts[i], 0.0);
          next[i][rng.Below(counts[i])] = 1.0;
        } else {
          next[i] = rng.SimplexPoint(counts[i]);
        }
      }
      path.profiles.emplace_back(next);
    }
    for (const auto& p : path.profiles) path.per_step_satisfied.push_back(SatisfiedGroups(game, p, config));
    path.step_count = path.profiles.size() - 1;
    const bool grouped = ValidatePath(game, path);
    const bool per_player = PerPlayerPathLegal(game, path.profiles, eps);
    mismatches += grouped != per_player;
    legal += per_player;
  }
  return {mismatches == 0 && legal > 0 && legal < pairs,
          Format("%d pairs (%d legal, %d illegal), mismatches %d", pairs, legal, pairs - legal,
                 mismatches)};
}

Verdict TopologyConsistency() {
  ExperimentConfig config;
  config.kind = ExperimentKind::kTopologyCheck;
  config.min_players = config.max_players = 2;
  config.min_actions = config.max_actions = 2;
  config.epsilon = 0.0;
  config.grid_step = 0.1;
  config.budget = 2000;
  config.seeds = SeedRange(50);
  const RunReport report = RunExperiment(config);
  int discrepancies = 0, exhaustive = 0, minima = 0, violations = 0;
  for (const auto& r : report.records) {
    const bool certified = r.detail["certified_min"].get<bool>();
    const bool preserved = r.detail["preserved"].get<bool>();
    exhaustive += r.detail["exhaustive"].get<bool>();
    minima += certified;
    violations += !preserved;
    discrepancies += certified != preserved;
  }
  const int n = static_cast<int>(report.records.size());
  return {discrepancies == 0 && exhaustive == n,
          Format("%d instances, exhaustive %d, certified minima %d, preservation violations %d, "
                 "discrepancies %d",
                 n, exhaustive, minima, violations, discrepancies)};
}

Verdict ContractionAndBounds() {
  Rng rng(4);
  int contraction_failures = 0, bound_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<int> counts = {1 + static_cast<int>(rng.Below(3)),
                                     1 + static_cast<int>(rng.Below(3))};
    const int states = 1 + static_cast<int>(rng.Below(4));
    const double gamma = rng.Uniform(0, 0.95);
    const double tol = 1e-8;
    const StochasticGame game = testing::RandomMarkovGame(counts, states, gamma, rng);
    const auto pi = testing::RandomPolicy(counts, states, rng);
    std::vector<double> p(states), q(states);
    for (int x = 0; x < states; ++x) p[x] = rng.Uniform(-20, 20), q[x] = rng.Uniform(-20, 20);
    const int i = static_cast<int>(rng.Below(2));
    if (SupDiff(ApplyValueOperator(game, pi, i, p), ApplyValueOperator(game, pi, i, q)) >
        gamma * SupDiff(p, q) + 1e-12) {
      ++contraction_failures;
    }
    for (double h : EvaluatePolicy(game, pi, i, tol)) {
      if (std::abs(h) > game.MaxAbsPayoff() / (1 - gamma) + tol) ++bound_failures;
    }
  }
  double closed_form_error = 0;
  for (double gamma : {0.0, 0.3, 0.9, 0.99}) {
    for (double r : {-2.0, 0.5, 3.0}) {
      using Tensor3 = std::vector<std::vector<std::vector<double>>>;
      const StochasticGame game({1}, 1, Tensor3{{{1.0}}}, Tensor3{{{r}}}, {gamma});
      const auto v = EvaluatePolicy(
          game, StationaryPolicyProfile::Uniform(game.action_counts(), 1), 0, 1e-10);
      closed_form_error = std::max(closed_form_error, std::abs(v[0] - r / (1 - gamma)));
    }
  }
  return {contraction_failures == 0 && bound_failures == 0 && closed_form_error <= 1e-9,
          Format("1000 draws: contraction violations %d, bound violations %d; closed-form "
                 "error %.2e",
                 contraction_failures, bound_failures, closed_form_error)};
}

Verdict MonteCarloOracle() {
  Rng rng(5);
  const double tol = 1e-4;
  const std::size_t episodes = 100'000;
  int checks = 0, failures = 0;
  double worst_z = 0;
  for (int g = 0; g < 20; ++g) {
    const std::vector<int> counts = {2 + static_cast<int>(rng.Below(2)),
                                     2 + static_cast<int>(rng.Below(2))};
    const int states = 1 + static_cast<int>(rng.Below(3));
    const double gamma = rng.Uniform(0, 0.9);
    const StochasticGame game = testing::RandomMarkovGame(counts, states, gamma, rng);
    const auto pi = testing::RandomPolicy(counts, states, rng);
    const int horizon = testing::TruncationHorizon(gamma, game.MaxAbsPayoff(), tol / 2);
    Rng mc(DeriveSeed(5, {static_cast<std::uint64_t>(g)}));
    for (int x = 0; x < states; ++x) {
      const auto est = testing::MonteCarloValues(game, pi, x, horizon, episodes, mc);
      for (int i = 0; i < 2; ++i) {
        const double v = EvaluatePolicy(game, pi, i, tol)[x];
        const double gap = std::abs(v - est[i].mean);
        ++checks;
        if (gap > 3 * est[i].standard_error + tol) ++failures;
        worst_z = std::max(worst_z, (gap - tol) / est[i].standard_error);
      }
    }
  }
  return {failures == 0, Format("%d (game, state, player) checks, %d outside 3 SE + tol, "
                                "largest excess %.2f SE",
                                checks, failures, worst_z)};
}

Verdict FrozenConsistency() {
  Rng rng(6);
  const double tol = 1e-8;
  double worst = 0;
  int failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> counts(2 + rng.Below(2));
    for (int& m : counts) m = 2 + static_cast<int>(rng.Below(2));
    const int n = static_cast<int>(counts.size());
    const int states = 1 + static_cast<int>(rng.Below(3));
    const StochasticGame game =
        testing::RandomMarkovGame(counts, states, rng.Uniform(0, 0.95), rng);
    const auto pi = testing::RandomPolicy(counts, states, rng);
    std::vector<int> frozen;
    for (int p = 0; p < n; ++p) {
      if (rng.Below(2)) frozen.push_back(p);
    }
    if (static_cast<int>(frozen.size()) == n) frozen.pop_back();
    const FrozenSubgame sub = FreezePlayersStochastic(game, pi, frozen);
    std::vector<int> sub_counts;
    for (int p : sub.free_players) sub_counts.push_back(counts[p]);
    const auto sigma = testing::RandomPolicy(sub_counts, states, rng);
    const auto full = EmbedFreePolicies(pi, sub.free_players, sigma);
    for (std::size_t k = 0; k < sub.free_players.size(); ++k) {
      const double d = SupDiff(EvaluatePolicy(sub.game, sigma, k, tol),
                               EvaluatePolicy(game, full, sub.free_players[k], tol));
      worst = std::max(worst, d);
      failures += d > 2 * tol;
    }
  }
  return {failures == 0,
          Format("50 instances, worst per-state gap %.2e (limit %.0e)", worst, 2 * tol)};
}

Verdict MarkovExistence() {
  ExperimentConfig config;
  config.kind = ExperimentKind::kStochasticPath;
  config.min_players = config.max_players = 2;
  config.min_actions = config.max_actions = 2;
  config.min_states = 1;
  config.max_states = 3;
  config.discount = 0.8;
  config.epsilon = 1e-4;
  config.max_steps = 100;
  config.seeds = SeedRange(50);
  const RunReport report = RunExperiment(config);
  int success = 0, valid = 0;
  for (const auto& r : report.records) {
    const StochasticGame game = StochasticGameFromJson(r.detail["game"]);
    const StochasticPathRecord path = StochasticPathFromJson(r.detail["path"]);
    success += path.terminal_is_equilibrium;
    valid += ValidateStochasticPath(game, path);
  }
  const int n = static_cast<int>(report.records.size());
  return {success >= 0.9 * n && valid == n,
          Format("equilibrium %d/%d, freezing respected %d/%d", success, n, valid, n)};
}

Verdict KStepCompiler() {
  const KStepCompilation compiled = CompileKStep({TwoStateSwitchGame(), 1});
  // Compiled state 2 x + last action; rows indexed by the new action.
  const std::vector<std::vector<std::vector<double>>> hand = {
      {{0.75, 0, 0.25, 0}, {0, 0, 0, 1}},
      {{0.75, 0, 0.25, 0}, {0, 0, 0, 1}},
      {{0.25, 0, 0.75, 0}, {0, 1, 0, 0}},
      {{0.25, 0, 0.75, 0}, {0, 1, 0, 0}},
  };
  bool exact = compiled.game.num_states() == 4;
  for (int y = 0; exact && y < 4; ++y) {
    for (int a = 0; a < 2; ++a) exact &= compiled.game.TransitionRow(y, a) == hand[y][a];
  }
  ExperimentConfig config;
  config.kind = ExperimentKind::kKStepRoundtrip;
  config.min_players = config.max_players = 2;
  config.min_actions = config.max_actions = 2;
  config.min_states = 2;
  config.max_states = 3;
  config.k = 1;
  config.episodes = 100'000;
  config.alpha = 0.01;
  config.seeds = SeedRange(10);
  const RunReport report = RunExperiment(config);
  int accepted = 0;
  double min_p = 1;
  for (const auto& r : report.records) {
    accepted += r.success;
    min_p = std::min(min_p, r.detail["p_value"].get<double>());
  }
  return {exact && accepted == 10,
          Format("hand kernel %s; chi-square accepted %d/10 at 0.01 (min p %.3f)",
                 exact ? "bit-exact" : "MISMATCH", accepted, min_p)};
}

Verdict UtilityInequalities() {
  Rng rng(9);
  int product = 0, lipschitz = 0, midpoint = 0;
  for (int trial = 0; trial < 10'000; ++trial) {
    const int n = 1 + static_cast<int>(rng.Below(6));
    std::vector<double> a(n), b(n);
    double bound = 0;
    for (int k = 0; k < n; ++k) {
      a[k] = rng.Uniform01();
      b[k] = rng.Uniform01();
      bound += std::abs(a[k] - b[k]);
    }
    product += ProductGap(a, b) > bound + kRoundingSlack;
  }
  for (int trial = 0; trial < 10'000; ++trial) {
    std::vector<int> counts(1 + rng.Below(3));
    for (int& m : counts) m = 1 + static_cast<int>(rng.Below(3));
    const NormalFormGame game = testing::RandomGame(counts, rng);
    const MixedProfile s = testing::RandomProfile(counts, rng);
    const MixedProfile t = testing::RandomProfile(counts, rng);
    const int p = static_cast<int>(rng.Below(counts.size()));
    lipschitz += std::abs(ExpectedPayoff(game, s, p) - ExpectedPayoff(game, t, p)) >
                 game.MaxAbsPayoff() * L1Distance(s, t) + kRoundingSlack;
  }
  for (int trial = 0; trial < 10'000; ++trial) {
    std::vector<int> counts(1 + rng.Below(3));
    for (int& m : counts) m = 1 + static_cast<int>(rng.Below(3));
    const NormalFormGame game = testing::RandomGame(counts, rng);
    const auto sigma = testing::RandomMixture(counts, rng);
    const int j = static_cast<int>(rng.Below(counts.size()));
    const auto eta = rng.SimplexPoint(counts[j]);
    const auto at = [&](double w) {
      auto s = sigma;
      for (int k = 0; k < counts[j]; ++k) s[j][k] = w * sigma[j][k] + (1 - w) * eta[k];
      return MixedProfile(s);
    };
    const int p = static_cast<int>(rng.Below(counts.size()));
    const double lhs = ExpectedPayoff(game, at(0.5), p);
    const double rhs = 0.5 * ExpectedPayoff(game, at(0), p) + 0.5 * ExpectedPayoff(game, at(1), p);
    midpoint += std::abs(lhs - rhs) > 1e-9;
  }
  return {product == 0 && lipschitz == 0 && midpoint == 0,
          Format("10^4 draws each: product violations %d, Lipschitz violations %d, "
                 "midpoint violations %d",
                 product, lipschitz, midpoint)};
}

int RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "satpath");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return CliMain(static_cast<int>(argv.size()), argv.data());
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict Determinism() {
  const std::vector<std::vector<std::string>> experiments = {
      {"--seed", "11", "report", "--kind", "normal_form_path", "--seeds", "20", "--players",
       "2-3"},
      {"--seed", "12", "--epsilon", "1e-4", "report", "--kind", "stochastic_path", "--seeds",
       "10", "--actions", "2"},
      {"--seed", "13", "--epsilon", "0", "report", "--kind", "topology_check", "--seeds", "20",
       "--actions", "2"},
      {"--seed", "14", "report", "--kind", "kstep_roundtrip", "--seeds", "5", "--actions", "2",
       "--episodes", "20000"},
  };
  int identical = 0, ran = 0;
  for (std::size_t e = 0; e < experiments.size(); ++e) {
    std::string outputs[2];
    bool ok = true;
    for (int rep = 0; rep < 2; ++rep) {
      const std::string path = "acceptance_report_" + std::to_string(e) + "_" +
                               std::to_string(rep) + ".json";
      auto args = experiments[e];
      args.insert(args.end(), {"--out", path, "--threads", rep == 0 ? "1" : "2"});
      ok &= RunCli(args) == kExitSuccess;
      outputs[rep] = Slurp(path);
      std::remove(path.c_str());
    }
    ran += ok;
    identical += ok && !outputs[0].empty() && outputs[0] == outputs[1];
  }
  const int n = static_cast<int>(experiments.size());
  return {identical == n, Format("%d/%d experiment kinds byte-identical across repeated runs "
                                 "(%d ran cleanly)",
                                 identical, n, ran)};
}

}  // namespace
}  // namespace satpath

int main() {
  using satpath::Verdict;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"existence in N-player games", satpath::ExistenceNormalForm},
      {"grouped reduction to per-player rule", satpath::GroupedReduction},
      {"local minimum vs preservation", satpath::TopologyConsistency},
      {"value operator contraction and bounds", satpath::ContractionAndBounds},
      {"policy evaluation vs Monte Carlo", satpath::MonteCarloOracle},
      {"frozen-player value consistency", satpath::FrozenConsistency},
      {"Markov existence", satpath::MarkovExistence},
      {"k-step compiler", satpath::KStepCompiler},
      {"utility inequalities", satpath::UtilityInequalities},
      {"CLI determinism", satpath::Determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
