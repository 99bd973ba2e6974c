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

#include "satpath/cli.h"

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "satpath/dynamics.h"
#include "satpath/experiment.h"
#include "satpath/generators.h"
#include "satpath/markov_dynamics.h"
#include "satpath/serialization.h"
#include "satpath/solvers.h"

namespace satpath {
namespace {

struct GlobalFlags {
  std::uint64_t seed = 0;
  double epsilon = 1e-6;
  double grid_step = 0.1;
  std::size_t budget = 2000;
  std::size_t max_steps = 100;
  double tol = kDefaultSolverTolerance;
  std::string out;
  std::string format = "json";
};

void Emit(const GlobalFlags& flags, const std::string& text) {
  if (flags.out.empty()) {
    std::cout << text;
  } else {
    WriteTextFile(flags.out, text);
  }
}

void EmitJson(const GlobalFlags& flags, const Json& j) {
  Require(flags.format == "json", ErrorKind::kInvalidArgument,
          "this subcommand only emits json");
  Emit(flags, DumpJson(j));
}

std::vector<int> ParseIntList(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      Require(used == item.size(), ErrorKind::kInvalidArgument, "");
    } catch (const std::exception&) {
      Fail(ErrorKind::kInvalidArgument, "malformed " + what + " '" + text + "'");
    }
  }
  Require(!out.empty(), ErrorKind::kInvalidArgument, "empty " + what);
  return out;
}

// "lo-hi" or a single value.
void ParseRange(const std::string& text, int& lo, int& hi) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) {
    lo = hi = ParseIntList(text, "range")[0];
    return;
  }
  lo = ParseIntList(text.substr(0, dash), "range")[0];
  hi = ParseIntList(text.substr(dash + 1), "range")[0];
}

// "0,1;2" lists the players of each group.
GroupPartition ParsePartition(const std::string& text, int num_players) {
  if (text.empty()) return GroupPartition::Singletons(num_players);
  std::vector<std::vector<int>> groups;
  std::stringstream in(text);
  std::string group;
  while (std::getline(in, group, ';')) groups.push_back(ParseIntList(group, "group"));
  GroupPartition partition(std::move(groups));
  Require(partition.num_players() == num_players, ErrorKind::kInvalidArgument,
          "partition does not cover the game's players");
  return partition;
}

MixedProfile ParseStart(const std::string& text, const NormalFormGame& game) {
  if (text == "uniform") return MixedProfile::Uniform(game.action_counts());
  if (text.rfind("pure:", 0) == 0) {
    const auto actions = ParseIntList(text.substr(5), "pure profile");
    Require(static_cast<int>(actions.size()) == game.num_players(),
            ErrorKind::kInvalidArgument, "pure profile needs one action per player");
    return MixedProfile::Pure(game.action_counts(), actions);
  }
  const Json j = ReadJsonFile(text);
  const MixedProfile profile = ProfileFromJson(j.is_object() && j.contains("profile")
                                                   ? j["profile"]
                                                   : j);
  RequireFits(game, profile);
  return profile;
}

// A pure start repeats each player's action at every state.
StationaryPolicyProfile ParseStochasticStart(const std::string& text,
                                             const StochasticGame& game) {
  if (text == "uniform") {
    return StationaryPolicyProfile::Uniform(game.action_counts(), game.num_states());
  }
  if (text.rfind("pure:", 0) == 0) {
    const auto actions = ParseIntList(text.substr(5), "pure profile");
    Require(static_cast<int>(actions.size()) == game.num_players(),
            ErrorKind::kInvalidArgument, "pure profile needs one action per player");
    std::vector<std::vector<int>> per_state;
    for (int a : actions) per_state.emplace_back(game.num_states(), a);
    return StationaryPolicyProfile::Pure(game.action_counts(), per_state);
  }
  const StationaryPolicyProfile pi = PolicyFromJson(ReadJsonFile(text));
  RequireFits(game, pi);
  return pi;
}

int RunGen(const GlobalFlags& flags, const std::string& named, const std::string& kind,
           const GeneratorParams& params) {
  Require(named.empty() != kind.empty(), ErrorKind::kInvalidArgument,
          "gen needs exactly one of --named or --kind");
  const std::string which = named.empty() ? kind : named;
  EmitJson(flags, GeneratedGameToJson(GenerateGame(which, params, flags.seed)));
  return kExitSuccess;
}

int RunPath(const GlobalFlags& flags, const std::string& game_file,
            const std::string& start_text, const std::string& groups) {
  const Json j = ReadJsonFile(game_file);
  if (IsStochasticGameJson(j)) {
    const StochasticGame game = StochasticGameFromJson(j);
    StochasticPathOptions options;
    options.max_steps = flags.max_steps;
    options.solver.seed = DeriveSeed(flags.seed, {1});
    options.solver.grid_step = flags.grid_step;
    options.probe = {flags.grid_step, flags.budget, DeriveSeed(flags.seed, {2})};
    const auto path = ConstructPathStochastic(
        game, ParseStochasticStart(start_text, game), flags.epsilon, options);
    if (flags.format == "csv") {
      std::ostringstream out;
      out << "step,satisfied\n";
      const auto counts = path.GroupCounts();
      for (std::size_t t = 0; t < counts.size(); ++t) out << t << ',' << counts[t] << '\n';
      Emit(flags, out.str());
    } else {
      EmitJson(flags, StochasticPathToJson(path));
    }
    return kExitSuccess;
  }
  const NormalFormGame game = GameFromJson(j);
  const SatisficingConfig config{flags.epsilon,
                                 ParsePartition(groups, game.num_players())};
  IterativeOptions solver_options;
  solver_options.tol = flags.tol;
  solver_options.seed = DeriveSeed(flags.seed, {1});
  PathOptions options;
  options.max_steps = flags.max_steps;
  options.probe = {flags.grid_step, flags.budget, DeriveSeed(flags.seed, {2})};
  const PathRecord path = ConstructPath(game, ParseStart(start_text, game), config,
                                        EquilibriumSolver(solver_options), options);
  if (flags.format == "csv") {
    std::ostringstream out;
    out << "step,satisfied\n";
    const auto counts = path.GroupCounts();
    for (std::size_t t = 0; t < counts.size(); ++t) out << t << ',' << counts[t] << '\n';
    Emit(flags, out.str());
  } else {
    EmitJson(flags, PathToJson(path));
  }
  return kExitSuccess;
}

int RunEval(const GlobalFlags& flags, const std::string& game_file,
            const std::string& start_text) {
  const Json j = ReadJsonFile(game_file);
  if (IsStochasticGameJson(j)) {
    const StochasticGame game = StochasticGameFromJson(j);
    const auto pi = ParseStochasticStart(start_text, game);
    const double tol = std::min(flags.tol, kDefaultEvalTolerance);
    Json out = ValueTableToJson(EvaluateAll(game, pi, tol));
    out["residual"] = MarkovResidual(game, pi, tol);
    out["satisfied"] = StationarySatisfiedPlayers(game, pi, flags.epsilon, tol);
    EmitJson(flags, out);
    return kExitSuccess;
  }
  const NormalFormGame game = GameFromJson(j);
  const MixedProfile profile = ParseStart(start_text, game);
  std::vector<double> payoffs, regrets;
  for (int p = 0; p < game.num_players(); ++p) {
    payoffs.push_back(ExpectedPayoff(game, profile, p));
    regrets.push_back(Regret(game, profile, p));
  }
  const SatisficingConfig config{flags.epsilon,
                                 GroupPartition::Singletons(game.num_players())};
  EmitJson(flags, {{"payoffs", payoffs},
                   {"regrets", regrets},
                   {"residual", Residual(game, profile)},
                   {"satisfied", SatisfiedGroups(game, profile, config)},
                   {"is_equilibrium", IsEpsEquilibrium(game, profile, flags.epsilon)}});
  return kExitSuccess;
}

int RunSolve(const GlobalFlags& flags, const std::string& game_file) {
  const Json j = ReadJsonFile(game_file);
  if (IsStochasticGameJson(j)) {
    StochasticSolverOptions options;
    options.seed = flags.seed;
    options.grid_step = flags.grid_step;
    EmitJson(flags, StochasticSolverOutcomeToJson(
                        SolveStochastic(StochasticGameFromJson(j), flags.tol, options)));
    return kExitSuccess;
  }
  IterativeOptions options;
  options.tol = flags.tol;
  options.seed = flags.seed;
  const SolverOutcome outcome =
      EquilibriumSolver(options).Solve(GameFromJson(j), flags.tol);
  EmitJson(flags, SolverOutcomeToJson(outcome));
  return outcome.converged ? kExitSuccess : kExitDomainError;
}

int RunCompile(const GlobalFlags& flags, const std::string& game_file, int k_flag) {
  const Json j = ReadJsonFile(game_file);
  KStepGame kgame{StochasticGameFromJson(j), 1};
  if (k_flag > 0) {
    kgame.k = k_flag;
  } else {
    Require(j.contains("k"), ErrorKind::kSchema,
            "schema error at /k: missing field (or pass --k)");
    kgame = KStepGameFromJson(j);
  }
  EmitJson(flags, KStepCompilationToJson(CompileKStep(kgame), kgame.k));
  return kExitSuccess;
}

int RunTopology(const GlobalFlags& flags, const std::string& game_file,
                const std::string& start_text, const std::string& groups) {
  const NormalFormGame game = GameFromJson(ReadJsonFile(game_file));
  const MixedProfile profile = ParseStart(start_text, game);
  const SatisficingConfig config{flags.epsilon,
                                 ParsePartition(groups, game.num_players())};
  const ProbeOptions probe{flags.grid_step, flags.budget, flags.seed};
  const auto minimum = IsLocalMinimum(game, profile, config, probe);
  const auto preservation = CheckPreservation(game, profile, config, probe);
  Json out = {{"satisfied", SatisfiedGroups(game, profile, config)},
              {"certified_min", minimum.certified_min},
              {"preserved", preservation.preserved}};
  if (minimum.counterexample) out["counterexample"] = ProfileToJson(*minimum.counterexample);
  if (preservation.successor) {
    out["violation"] = {{"successor", ProfileToJson(*preservation.successor)},
                        {"group", preservation.group}};
  }
  EmitJson(flags, out);
  return kExitSuccess;
}

struct ReportFlags {
  std::string config_file;
  std::string kind = "normal_form_path";
  int seeds = 10;
  std::vector<std::uint64_t> seed_list;
  std::string players = "2", actions = "2-3", states = "1-3";
  int k = 1;
  double discount = 0.8;
  std::size_t episodes = 100'000;
  int threads = 0;
  std::string csv_out;
};

int RunReportCommand(const GlobalFlags& flags, const ReportFlags& rf) {
  ExperimentConfig config;
  if (!rf.config_file.empty()) {
    config = ExperimentConfigFromJson(ReadJsonFile(rf.config_file));
  } else {
    config.kind = ExperimentKindFromName(rf.kind);
    ParseRange(rf.players, config.min_players, config.max_players);
    ParseRange(rf.actions, config.min_actions, config.max_actions);
    ParseRange(rf.states, config.min_states, config.max_states);
    config.k = rf.k;
    config.discount = rf.discount;
    config.episodes = rf.episodes;
    config.epsilon = flags.epsilon;
    config.tol = flags.tol;
    config.max_steps = flags.max_steps;
    config.grid_step = flags.grid_step;
    config.budget = flags.budget;
    if (!rf.seed_list.empty()) {
      config.seeds = rf.seed_list;
    } else {
      Require(rf.seeds >= 1, ErrorKind::kInvalidArgument, "--seeds must be >= 1");
      for (int s = 0; s < rf.seeds; ++s) config.seeds.push_back(flags.seed + s);
    }
  }
  if (rf.threads > 0) config.threads = rf.threads;
  if (!rf.csv_out.empty()) config.csv_out = rf.csv_out;
  const RunReport report = RunExperiment(config);
  Emit(flags, flags.format == "csv" ? ReportToCsv(report)
                                    : DumpJson(ReportToJson(report)));
  return kExitSuccess;
}

}  // namespace

int CliMain(int argc, char** argv) {
  CLI::App app{"Grouped satisficing paths for normal-form and Markov games."};
  app.name("satpath");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--seed", flags.seed, "64-bit seed for all randomness");
  app.add_option("--epsilon", flags.epsilon, "Satisficing tolerance")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--grid-step", flags.grid_step, "Successor probe lattice step")
      ->check(CLI::Range(1e-6, 1.0));
  app.add_option("--budget", flags.budget, "Successor probe budget");
  app.add_option("--max-steps", flags.max_steps, "Path length cap");
  app.add_option("--tol", flags.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", flags.out, "Output file (default stdout)");
  app.add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string game_file, start = "uniform", groups, named, kind;
  GeneratorParams params;
  std::string actions_text;
  int k_flag = 0;

  auto* gen = app.add_subcommand("gen", "Generate a game instance");
  gen->add_option("--named", named, "matching_pennies, rock_paper_scissors, all_zero, two_state_switch");
  gen->add_option("--kind", kind, "normal_form, stochastic, kstep, or a named kind");
  gen->add_option("--players", params.players, "Number of players");
  gen->add_option("--actions", actions_text, "Actions per player, e.g. 2 or 2,3");
  gen->add_option("--states", params.states, "Number of states");
  gen->add_option("--k", params.k, "History length");
  gen->add_option("--discount", params.discount, "Discount factor");

  auto* path = app.add_subcommand("path", "Construct a satisficing path");
  path->add_option("--game", game_file, "Game JSON")->required();
  path->add_option("--start", start, "pure:a0,a1,... | uniform | profile JSON file");
  path->add_option("--groups", groups, "Partition such as 0,1;2 (default singletons)");

  auto* eval = app.add_subcommand("eval", "Evaluate a profile or stationary policy");
  eval->add_option("--game", game_file, "Game JSON")->required();
  eval->add_option("--profile,--start", start, "pure:a0,a1,... | uniform | JSON file");

  auto* solve = app.add_subcommand("solve", "Compute an approximate equilibrium");
  solve->add_option("--game", game_file, "Game JSON")->required();

  auto* compile = app.add_subcommand("compile-kstep", "Compile a k-step game");
  compile->add_option("--game", game_file, "Stochastic game JSON")->required();
  compile->add_option("--k", k_flag, "History length (overrides the file)")
      ->check(CLI::PositiveNumber);

  auto* topology = app.add_subcommand("check-topology",
                                      "Probe local minimality and preservation");
  topology->add_option("--game", game_file, "Game JSON")->required();
  topology->add_option("--start,--profile", start, "pure:a0,a1,... | uniform | JSON file");
  topology->add_option("--groups", groups, "Partition such as 0,1;2");

  ReportFlags rf;
  auto* report = app.add_subcommand("report", "Run a seeded experiment");
  report->add_option("--config", rf.config_file, "Experiment config JSON");
  report->add_option("--kind", rf.kind,
                     "normal_form_path, stochastic_path, topology_check, kstep_roundtrip");
  report->add_option("--seeds", rf.seeds, "Run seeds seed, seed+1, ...");
  report->add_option("--seed-list", rf.seed_list, "Explicit seeds");
  report->add_option("--players", rf.players, "Player count or range lo-hi");
  report->add_option("--actions", rf.actions, "Action count or range lo-hi");
  report->add_option("--states", rf.states, "State count or range lo-hi");
  report->add_option("--k", rf.k, "History length");
  report->add_option("--discount", rf.discount, "Discount factor");
  report->add_option("--episodes", rf.episodes, "Episodes per k-step seed");
  report->add_option("--threads", rf.threads, "Worker threads (0 = all cores)");
  report->add_option("--csv-out", rf.csv_out, "Also write the CSV summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsageError;
  }

  try {
    if (!actions_text.empty()) params.actions = ParseIntList(actions_text, "actions");
    if (*gen) return RunGen(flags, named, kind, params);
    if (*path) return RunPath(flags, game_file, start, groups);
    if (*eval) return RunEval(flags, game_file, start);
    if (*solve) return RunSolve(flags, game_file);
    if (*compile) return RunCompile(flags, game_file, k_flag);
    if (*topology) return RunTopology(flags, game_file, start, groups);
    if (*report) return RunReportCommand(flags, rf);
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << '\n';
    return kExitDomainError;
  } catch (const Json::exception& e) {
    std::cerr << "error (schema): " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace satpath
