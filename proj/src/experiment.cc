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

#include "satpath/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "satpath/dynamics.h"
#include "satpath/generators.h"
#include "satpath/markov_dynamics.h"
#include "satpath/rng.h"
#include "satpath/solvers.h"

namespace satpath {
namespace {

// Substreams of a seed.
constexpr std::uint64_t kShapeStream = 0x10;
constexpr std::uint64_t kStartStream = 0x11;
constexpr std::uint64_t kSolverStream = 0x12;
constexpr std::uint64_t kProbeStream = 0x13;
constexpr std::uint64_t kPolicyStream = 0x14;
constexpr std::uint64_t kSimulationStream = 0x15;

int Between(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.Below(static_cast<std::uint64_t>(hi - lo + 1)));
}

std::vector<int> DrawActionCounts(const ExperimentConfig& config, Rng& rng) {
  const int players = Between(rng, config.min_players, config.max_players);
  std::vector<int> counts(players);
  for (int& m : counts) m = Between(rng, config.min_actions, config.max_actions);
  return counts;
}

std::vector<int> RandomPureActions(std::span<const int> counts, Rng& rng) {
  std::vector<int> actions;
  for (int m : counts) actions.push_back(static_cast<int>(rng.Below(m)));
  return actions;
}

// A pure profile or, with equal odds, a random point of the step lattice.
MixedProfile RandomProbeStart(std::span<const int> counts, double grid_step,
                              Rng& rng) {
  if (rng.Below(2) == 0) return MixedProfile::Pure(counts, RandomPureActions(counts, rng));
  const int divisions = LatticeDivisions(grid_step);
  std::vector<std::vector<double>> dists;
  for (int m : counts) {
    const auto lattice = SimplexLattice(m, divisions);
    dists.push_back(lattice[rng.Below(lattice.size())]);
  }
  return MixedProfile(std::move(dists));
}

SeedRecord NormalFormPathSeed(const ExperimentConfig& config, std::uint64_t seed) {
  Rng shape(seed, {kShapeStream});
  const auto counts = DrawActionCounts(config, shape);
  const NormalFormGame game = RandomNormalFormGame(counts, seed);
  Rng start_rng(seed, {kStartStream});
  const MixedProfile start =
      MixedProfile::Pure(counts, RandomPureActions(counts, start_rng));
  const SatisficingConfig sat{config.epsilon,
                              GroupPartition::Singletons(game.num_players())};
  IterativeOptions solver_options;
  solver_options.tol = config.tol;
  solver_options.seed = DeriveSeed(seed, {kSolverStream});
  PathOptions options;
  options.max_steps = config.max_steps;
  options.probe = {config.grid_step, config.budget, DeriveSeed(seed, {kProbeStream})};
  const PathRecord path =
      ConstructPath(game, start, sat, EquilibriumSolver(solver_options), options);

  // The reloaded record must still validate.
  const Json path_json = PathToJson(path);
  const bool valid = ValidatePath(game, PathFromJson(path_json));

  SeedRecord record;
  record.seed = seed;
  record.steps = path.step_count;
  record.residual = Residual(game, path.profiles.back());
  record.terminal_is_equilibrium = path.terminal_is_equilibrium;
  record.success = path.terminal_is_equilibrium;
  record.trajectory = path.GroupCounts();
  record.detail = {{"game", GameToJson(game)}, {"path", path_json}, {"valid", valid}};
  return record;
}

SeedRecord StochasticPathSeed(const ExperimentConfig& config, std::uint64_t seed) {
  Rng shape(seed, {kShapeStream});
  const auto counts = DrawActionCounts(config, shape);
  const int states = Between(shape, config.min_states, config.max_states);
  const StochasticGame game =
      RandomStochasticGame(counts, states, config.discount, seed);
  Rng start_rng(seed, {kStartStream});
  std::vector<std::vector<int>> actions(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (int x = 0; x < states; ++x) {
      actions[i].push_back(static_cast<int>(start_rng.Below(counts[i])));
    }
  }
  const auto start = StationaryPolicyProfile::Pure(counts, actions);
  StochasticPathOptions options;
  options.max_steps = config.max_steps;
  options.solver.seed = DeriveSeed(seed, {kSolverStream});
  options.solver.grid_step = config.grid_step;
  options.probe = {config.grid_step, config.budget, DeriveSeed(seed, {kProbeStream})};
  const StochasticPathRecord path =
      ConstructPathStochastic(game, start, config.epsilon, options);

  const Json path_json = StochasticPathToJson(path);
  const bool valid = ValidateStochasticPath(game, StochasticPathFromJson(path_json));

  SeedRecord record;
  record.seed = seed;
  record.steps = path.step_count;
  record.residual = MarkovResidual(game, path.profiles.back(), path.tol);
  record.terminal_is_equilibrium = path.terminal_is_equilibrium;
  record.success = path.terminal_is_equilibrium;
  record.trajectory = path.GroupCounts();
  record.detail = {
      {"game", StochasticGameToJson(game)}, {"path", path_json}, {"valid", valid}};
  return record;
}

SeedRecord TopologySeed(const ExperimentConfig& config, std::uint64_t seed) {
  Rng shape(seed, {kShapeStream});
  const auto counts = DrawActionCounts(config, shape);
  const NormalFormGame game = RandomNormalFormGame(counts, seed);
  Rng start_rng(seed, {kStartStream});
  const MixedProfile start = RandomProbeStart(counts, config.grid_step, start_rng);
  const SatisficingConfig sat{config.epsilon,
                              GroupPartition::Singletons(game.num_players())};
  const ProbeOptions probe{config.grid_step, config.budget,
                           DeriveSeed(seed, {kProbeStream})};

  const auto satisfied = SatisfiedGroups(game, start, sat);
  const SuccessorSpec spec = ComputeSuccessorSpec(game, start, sat);
  double lattice = 1;
  for (int p : spec.free_players) {
    const auto points = SimplexLattice(game.num_actions(p), LatticeDivisions(config.grid_step));
    lattice *= static_cast<double>(points.size());
  }
  const bool exhaustive = lattice <= static_cast<double>(config.budget);
  const LocalMinimumResult minimum = IsLocalMinimum(game, start, sat, probe);
  const PreservationResult preservation = CheckPreservation(game, start, sat, probe);
  const bool agree = minimum.certified_min == preservation.preserved;

  SeedRecord record;
  record.seed = seed;
  record.residual = Residual(game, start);
  record.terminal_is_equilibrium = IsEpsEquilibrium(game, start, sat.epsilon);
  record.success = agree;
  record.trajectory = {static_cast<int>(satisfied.size())};
  Json detail = {{"game", GameToJson(game)},
                 {"profile", ProfileToJson(start)},
                 {"satisfied", satisfied},
                 {"exhaustive", exhaustive},
                 {"certified_min", minimum.certified_min},
                 {"preserved", preservation.preserved},
                 {"agree", agree}};
  if (minimum.counterexample) {
    detail["counterexample"] = ProfileToJson(*minimum.counterexample);
  }
  if (preservation.successor) {
    detail["violation"] = {{"successor", ProfileToJson(*preservation.successor)},
                           {"group", preservation.group}};
  }
  record.detail = std::move(detail);
  return record;
}

SeedRecord KStepSeed(const ExperimentConfig& config, std::uint64_t seed) {
  Rng shape(seed, {kShapeStream});
  const auto counts = DrawActionCounts(config, shape);
  const int states = Between(shape, config.min_states, config.max_states);
  const KStepGame kgame{RandomStochasticGame(counts, states, config.discount, seed),
                        config.k};
  const KStepCompilation compiled = CompileKStep(kgame);

  Rng policy_rng(seed, {kPolicyStream});
  std::vector<std::vector<std::vector<double>>> policies(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (int x = 0; x < states; ++x) {
      policies[i].push_back(policy_rng.SimplexPoint(counts[i]));
    }
  }
  const StationaryPolicyProfile pi(std::move(policies));
  const StationaryPolicyProfile lifted = LiftHistoryBlind(compiled, pi);

  // Distribution after the history window is fully populated.
  const int horizon = config.k + 3;
  const auto exact = ExactHistoryDistribution(kgame.base, config.k, pi, 0, horizon);
  std::map<HistoryKey, std::size_t> cell;
  std::vector<double> expected;
  for (const auto& [key, prob] : exact) {
    cell.emplace(key, expected.size());
    expected.push_back(prob);
  }
  std::vector<double> observed(expected.size() + 1, 0.0);
  expected.push_back(0.0);  // anything the exact recursion never reaches

  const std::vector<std::size_t> zero_history(config.k, 0);
  const int initial =
      static_cast<int>(CompiledStateIndex(kgame.base, config.k, 0, zero_history));
  Rng sim(seed, {kSimulationStream});
  std::size_t joint = 0;
  for (std::size_t e = 0; e < config.episodes; ++e) {
    int y = initial;
    for (int t = 0; t < horizon; ++t) y = SimulateStep(compiled.game, lifted, y, sim, &joint);
    const KStepState& state = compiled.states[y];
    auto it = cell.find({state.state, state.history});
    observed[it == cell.end() ? expected.size() - 1 : it->second] += 1;
  }
  const ChiSquareResult chi = ChiSquareGoodnessOfFit(observed, expected);
  double deviation = 0;
  for (std::size_t c = 0; c < expected.size(); ++c) {
    deviation = std::max(deviation,
                         std::abs(observed[c] / config.episodes - expected[c]));
  }

  SeedRecord record;
  record.seed = seed;
  record.residual = deviation;
  record.success = chi.p_value >= config.alpha;
  record.detail = {{"base", KStepGameToJson(kgame)},
                   {"compiled_states", compiled.game.num_states()},
                   {"horizon", horizon},
                   {"episodes", config.episodes},
                   {"chi_square", chi.statistic},
                   {"dof", chi.dof},
                   {"p_value", chi.p_value}};
  return record;
}

double Interpolate(const std::vector<double>& sorted, double q) {
  const double pos = q * (sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

const char* ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kNormalFormPath: return "normal_form_path";
    case ExperimentKind::kStochasticPath: return "stochastic_path";
    case ExperimentKind::kTopologyCheck: return "topology_check";
    case ExperimentKind::kKStepRoundtrip: return "kstep_roundtrip";
  }
  return "unknown";
}

ExperimentKind ExperimentKindFromName(const std::string& name) {
  for (auto kind : {ExperimentKind::kNormalFormPath, ExperimentKind::kStochasticPath,
                    ExperimentKind::kTopologyCheck, ExperimentKind::kKStepRoundtrip}) {
    if (name == ExperimentKindName(kind)) return kind;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown experiment kind '" + name + "'");
}

void ExperimentConfig::Validate() const {
  Require(!seeds.empty(), ErrorKind::kInvalidArgument, "seeds must be nonempty");
  Require(1 <= min_players && min_players <= max_players, ErrorKind::kInvalidArgument,
          "player range must satisfy 1 <= min <= max");
  Require(1 <= min_actions && min_actions <= max_actions, ErrorKind::kInvalidArgument,
          "action range must satisfy 1 <= min <= max");
  Require(1 <= min_states && min_states <= max_states, ErrorKind::kInvalidArgument,
          "state range must satisfy 1 <= min <= max");
  Require(k >= 1, ErrorKind::kInvalidArgument, "k must be >= 1");
  Require(0 <= discount && discount < 1, ErrorKind::kInvalidArgument,
          "discount must lie in [0, 1)");
  Require(epsilon >= 0, ErrorKind::kInvalidArgument, "epsilon must be >= 0");
  Require(tol > 0, ErrorKind::kInvalidArgument, "tol must be positive");
  Require(max_steps >= 1, ErrorKind::kInvalidArgument, "max_steps must be >= 1");
  Require(budget >= 1, ErrorKind::kInvalidArgument, "budget must be >= 1");
  Require(episodes >= 1, ErrorKind::kInvalidArgument, "episodes must be >= 1");
  Require(0 < alpha && alpha < 1, ErrorKind::kInvalidArgument, "alpha must lie in (0, 1)");
  LatticeDivisions(grid_step);
  const double tensor = static_cast<double>(max_players) *
                        std::pow(static_cast<double>(max_actions), max_players);
  Require(tensor <= kMaxTensorEntries, ErrorKind::kBudget,
          "largest instance exceeds the payoff tensor budget");
  if (kind == ExperimentKind::kKStepRoundtrip) {
    const double compiled =
        max_states * std::pow(std::pow(static_cast<double>(max_actions), max_players), k);
    Require(compiled <= kMaxCompiledStates, ErrorKind::kBudget,
            "largest compiled state space exceeds the budget");
  }
}

Json ExperimentConfigToJson(const ExperimentConfig& config) {
  return {{"kind", ExperimentKindName(config.kind)},
          {"players", {config.min_players, config.max_players}},
          {"actions", {config.min_actions, config.max_actions}},
          {"states", {config.min_states, config.max_states}},
          {"k", config.k},
          {"discount", config.discount},
          {"epsilon", config.epsilon},
          {"seeds", config.seeds},
          {"tol", config.tol},
          {"max_steps", config.max_steps},
          {"grid_step", config.grid_step},
          {"budget", config.budget},
          {"episodes", config.episodes},
          {"alpha", config.alpha}};
}

ExperimentConfig ExperimentConfigFromJson(const Json& j) {
  ExperimentConfig config;
  try {
    config.kind = ExperimentKindFromName(j.at("kind").get<std::string>());
    auto range = [&](const char* key, int& lo, int& hi) {
      if (!j.contains(key)) return;
      const Json& r = j.at(key);
      if (r.is_number_integer()) {
        lo = hi = r.get<int>();
      } else {
        lo = r.at(0).get<int>();
        hi = r.at(1).get<int>();
      }
    };
    range("players", config.min_players, config.max_players);
    range("actions", config.min_actions, config.max_actions);
    range("states", config.min_states, config.max_states);
    config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    config.k = j.value("k", config.k);
    config.discount = j.value("discount", config.discount);
    config.epsilon = j.value("epsilon", config.epsilon);
    config.tol = j.value("tol", config.tol);
    config.max_steps = j.value("max_steps", config.max_steps);
    config.grid_step = j.value("grid_step", config.grid_step);
    config.budget = j.value("budget", config.budget);
    config.episodes = j.value("episodes", config.episodes);
    config.alpha = j.value("alpha", config.alpha);
    config.threads = j.value("threads", config.threads);
    config.json_out = j.value("json_out", config.json_out);
    config.csv_out = j.value("csv_out", config.csv_out);
  } catch (const Json::exception& e) {
    Fail(ErrorKind::kSchema, std::string("schema error in experiment config: ") + e.what());
  }
  return config;
}

SeedRecord RunSeed(const ExperimentConfig& config, std::uint64_t seed) {
  const auto begin = std::chrono::steady_clock::now();
  SeedRecord record;
  switch (config.kind) {
    case ExperimentKind::kNormalFormPath: record = NormalFormPathSeed(config, seed); break;
    case ExperimentKind::kStochasticPath: record = StochasticPathSeed(config, seed); break;
    case ExperimentKind::kTopologyCheck: record = TopologySeed(config, seed); break;
    case ExperimentKind::kKStepRoundtrip: record = KStepSeed(config, seed); break;
  }
  record.millis = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - begin)
                      .count();
  return record;
}

RunReport RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  std::vector<std::uint64_t> seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<SeedRecord> records(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s = next++; s < seeds.size(); s = next++) {
      try {
        records[s] = RunSeed(config, seeds[s]);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  unsigned threads = config.threads > 0 ? config.threads
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, seeds.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (!errors[s]) continue;
    const std::string context = "seed " + std::to_string(seeds[s]) + ": ";
    try {
      std::rethrow_exception(errors[s]);
    } catch (const Error& e) {
      Fail(e.kind(), context + e.what());
    } catch (const std::exception& e) {
      Fail(ErrorKind::kSolverFailure, context + e.what());
    }
  }

  RunReport report;
  report.config = config;
  report.config.seeds = seeds;
  std::vector<double> lengths;
  std::size_t successes = 0;
  for (const auto& r : records) {
    successes += r.success ? 1 : 0;
    lengths.push_back(static_cast<double>(r.steps));
  }
  report.records = std::move(records);
  report.success_rate = static_cast<double>(successes) / seeds.size();
  report.lengths = Quantiles(std::move(lengths));
  if (!config.json_out.empty()) WriteTextFile(config.json_out, DumpJson(ReportToJson(report)));
  if (!config.csv_out.empty()) WriteTextFile(config.csv_out, ReportToCsv(report));
  return report;
}

LengthQuantiles Quantiles(std::vector<double> values) {
  LengthQuantiles q;
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  q.min = values.front();
  q.q25 = Interpolate(values, 0.25);
  q.median = Interpolate(values, 0.5);
  q.q75 = Interpolate(values, 0.75);
  q.max = values.back();
  return q;
}

Json ReportToJson(const RunReport& report) {
  Json records = Json::array();
  std::size_t valid = 0;
  for (const auto& r : report.records) {
    Json j = {{"seed", r.seed},
              {"steps", r.steps},
              {"residual", r.residual},
              {"terminal_is_equilibrium", r.terminal_is_equilibrium},
              {"success", r.success},
              {"trajectory", r.trajectory},
              {"detail", r.detail}};
    valid += r.detail.value("valid", true) ? 1 : 0;
    records.push_back(std::move(j));
  }
  const auto& q = report.lengths;
  Json aggregate = {{"seeds", report.records.size()},
                    {"success_rate", report.success_rate},
                    {"valid_paths", valid},
                    {"length_quantiles",
                     {{"min", q.min}, {"q25", q.q25}, {"median", q.median},
                      {"q75", q.q75}, {"max", q.max}}}};
  return {{"config", ExperimentConfigToJson(report.config)},
          {"aggregate", std::move(aggregate)},
          {"records", std::move(records)}};
}

std::string ReportToCsv(const RunReport& report) {
  std::ostringstream out;
  out << "seed,kind,steps,residual,success,millis\n";
  for (const auto& r : report.records) {
    out << r.seed << ',' << ExperimentKindName(report.config.kind) << ',' << r.steps
        << ',' << FormatDouble(r.residual) << ',' << (r.success ? 1 : 0) << ','
        << std::fixed << std::setprecision(3) << r.millis << std::defaultfloat << '\n';
  }
  return out.str();
}

ChiSquareResult ChiSquareGoodnessOfFit(const std::vector<double>& observed,
                                       const std::vector<double>& expected) {
  Require(observed.size() == expected.size(), ErrorKind::kInvalidArgument,
          "observed and expected sizes differ");
  double total = 0;
  for (double o : observed) total += o;
  Require(total > 0, ErrorKind::kInvalidArgument, "no observations");
  ChiSquareResult result;
  std::vector<double> obs, exp;
  double pooled_obs = 0, pooled_exp = 0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double e = expected[c] * total;
    if (expected[c] <= 0) {
      if (observed[c] > 0) {
        result.statistic = std::numeric_limits<double>::infinity();
        result.p_value = 0.0;
        return result;
      }
      continue;
    }
    if (e < 5) {
      pooled_obs += observed[c];
      pooled_exp += e;
    } else {
      obs.push_back(observed[c]);
      exp.push_back(e);
    }
  }
  if (pooled_exp > 0) {
    if (pooled_exp < 5 && !exp.empty()) {
      // Still too sparse: fold into the smallest regular cell.
      const std::size_t m = std::min_element(exp.begin(), exp.end()) - exp.begin();
      obs[m] += pooled_obs;
      exp[m] += pooled_exp;
    } else {
      obs.push_back(pooled_obs);
      exp.push_back(pooled_exp);
    }
  }
  for (std::size_t c = 0; c < obs.size(); ++c) {
    result.statistic += (obs[c] - exp[c]) * (obs[c] - exp[c]) / exp[c];
  }
  result.dof = static_cast<int>(obs.size()) - 1;
  if (result.dof < 1) return result;
  const boost::math::chi_squared dist(result.dof);
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

std::map<HistoryKey, double> ExactHistoryDistribution(
    const StochasticGame& base, int k, const StationaryPolicyProfile& pi, int start,
    int horizon) {
  RequireFits(base, pi);
  std::map<HistoryKey, double> current;
  current[{start, std::vector<std::size_t>(k, 0)}] = 1.0;
  for (int t = 0; t < horizon; ++t) {
    std::map<HistoryKey, double> next;
    for (const auto& [key, mass] : current) {
      const int x = key.first;
      for (std::size_t s = 0; s < base.num_joint_actions(); ++s) {
        double p = mass;
        for (int i = 0; i < base.num_players(); ++i) {
          p *= pi.policy(i, x)[base.ActionOf(s, i)];
        }
        if (p == 0) continue;
        std::vector<std::size_t> history = {s};
        history.insert(history.end(), key.second.begin(), key.second.end() - 1);
        const auto row = base.TransitionRow(x, s);
        for (int y = 0; y < base.num_states(); ++y) {
          if (row[y] > 0) next[{y, history}] += p * row[y];
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace satpath
