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

#include "satpath/serialization.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace satpath {
namespace {

[[noreturn]] void SchemaError(const std::string& where, const std::string& what) {
  Fail(ErrorKind::kSchema,
       "schema error at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& Field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) SchemaError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) SchemaError(where + "/" + key, "missing field");
  return *it;
}

int AsInt(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) SchemaError(where, "expected an integer");
  return j.get<int>();
}

double AsDouble(const Json& j, const std::string& where) {
  if (!j.is_number()) SchemaError(where, "expected a number");
  return j.get<double>();
}

bool AsBool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) SchemaError(where, "expected a boolean");
  return j.get<bool>();
}

const Json& AsArray(const Json& j, const std::string& where) {
  if (!j.is_array()) SchemaError(where, "expected an array");
  return j;
}

std::vector<int> IntVector(const Json& j, const std::string& where) {
  std::vector<int> out;
  const Json& arr = AsArray(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    out.push_back(AsInt(arr[k], where + "/" + std::to_string(k)));
  }
  return out;
}

std::vector<double> DoubleVector(const Json& j, const std::string& where) {
  std::vector<double> out;
  const Json& arr = AsArray(j, where);
  out.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    out.push_back(AsDouble(arr[k], where + "/" + std::to_string(k)));
  }
  return out;
}

std::vector<std::vector<double>> DoubleMatrix(const Json& j, const std::string& where) {
  std::vector<std::vector<double>> out;
  const Json& arr = AsArray(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    out.push_back(DoubleVector(arr[k], where + "/" + std::to_string(k)));
  }
  return out;
}

std::vector<std::vector<int>> IntMatrix(const Json& j, const std::string& where) {
  std::vector<std::vector<int>> out;
  const Json& arr = AsArray(j, where);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    out.push_back(IntVector(arr[k], where + "/" + std::to_string(k)));
  }
  return out;
}

// Re-raises structural errors from constructors as schema errors at `where`.
template <typename F>
auto WithSchemaContext(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kSchema) throw;
    SchemaError(where, e.what());
  }
}

}  // namespace

Json GameToJson(const NormalFormGame& game) {
  Json j;
  j["players"] = game.num_players();
  j["actions"] = game.action_counts();
  j["payoffs"] = std::vector<double>(game.payoffs().begin(), game.payoffs().end());
  return j;
}

NormalFormGame GameFromJson(const Json& j) {
  const int players = AsInt(Field(j, "players", ""), "/players");
  auto actions = IntVector(Field(j, "actions", ""), "/actions");
  if (players < 1) SchemaError("/players", "must be >= 1");
  if (static_cast<int>(actions.size()) != players) {
    SchemaError("/actions", "length must equal players");
  }
  auto payoffs = DoubleVector(Field(j, "payoffs", ""), "/payoffs");
  return WithSchemaContext("/payoffs", [&] {
    return NormalFormGame(std::move(actions), std::move(payoffs));
  });
}

Json ProfileToJson(const MixedProfile& profile) {
  return Json(profile.distributions());
}

MixedProfile ProfileFromJson(const Json& j, const std::string& where) {
  auto dists = DoubleMatrix(j, where);
  return WithSchemaContext(where, [&] { return MixedProfile(std::move(dists)); });
}

Json PartitionToJson(const GroupPartition& partition) {
  return Json(partition.groups());
}

GroupPartition PartitionFromJson(const Json& j, const std::string& where) {
  auto groups = IntMatrix(j, where);
  return WithSchemaContext(where, [&] { return GroupPartition(std::move(groups)); });
}

Json PathToJson(const PathRecord& path) {
  Json j;
  j["config"] = {{"epsilon", path.config.epsilon},
                 {"partition", PartitionToJson(path.config.partition)}};
  Json profiles = Json::array();
  for (const auto& p : path.profiles) profiles.push_back(ProfileToJson(p));
  j["profiles"] = std::move(profiles);
  j["satisfied"] = path.per_step_satisfied;
  j["group_counts"] = path.GroupCounts();
  j["step_count"] = path.step_count;
  j["terminal_is_equilibrium"] = path.terminal_is_equilibrium;
  j["status"] = PathStatusName(path.status);
  if (!path.failure_detail.empty()) j["failure"] = Json::parse(path.failure_detail);
  return j;
}

PathRecord PathFromJson(const Json& j) {
  PathRecord path;
  const Json& config = Field(j, "config", "");
  path.config.epsilon = AsDouble(Field(config, "epsilon", "/config"), "/config/epsilon");
  path.config.partition =
      PartitionFromJson(Field(config, "partition", "/config"), "/config/partition");
  const Json& profiles = AsArray(Field(j, "profiles", ""), "/profiles");
  for (std::size_t t = 0; t < profiles.size(); ++t) {
    path.profiles.push_back(ProfileFromJson(profiles[t], "/profiles/" + std::to_string(t)));
  }
  path.per_step_satisfied = IntMatrix(Field(j, "satisfied", ""), "/satisfied");
  path.step_count = AsInt(Field(j, "step_count", ""), "/step_count");
  path.terminal_is_equilibrium =
      AsBool(Field(j, "terminal_is_equilibrium", ""), "/terminal_is_equilibrium");
  const Json& status = Field(j, "status", "");
  if (!status.is_string()) SchemaError("/status", "expected a string");
  path.status = PathStatusFromName(status.get<std::string>());
  if (j.contains("failure")) path.failure_detail = j["failure"].dump();
  return path;
}

Json SolverOutcomeToJson(const SolverOutcome& outcome) {
  Json j;
  j["method"] = SolverMethodName(outcome.method);
  j["residual"] = outcome.residual;
  j["converged"] = outcome.converged;
  j["profile"] = ProfileToJson(outcome.profile);
  return j;
}

SolverOutcome SolverOutcomeFromJson(const Json& j) {
  SolverOutcome out;
  const Json& method = Field(j, "method", "");
  if (!method.is_string()) SchemaError("/method", "expected a string");
  out.method = SolverMethodFromName(method.get<std::string>());
  out.residual = AsDouble(Field(j, "residual", ""), "/residual");
  out.converged = AsBool(Field(j, "converged", ""), "/converged");
  out.profile = ProfileFromJson(Field(j, "profile", ""), "/profile");
  return out;
}

bool IsStochasticGameJson(const Json& j) {
  return j.is_object() && j.contains("states");
}

Json StochasticGameToJson(const StochasticGame& game) {
  Json j;
  j["players"] = game.num_players();
  j["states"] = game.num_states();
  j["actions"] = game.action_counts();
  j["discounts"] = game.discounts();
  Json transitions = Json::array();
  Json payoffs = Json::array();
  for (int x = 0; x < game.num_states(); ++x) {
    Json trow = Json::array();
    Json prow = Json::array();
    for (std::size_t s = 0; s < game.num_joint_actions(); ++s) {
      trow.push_back(game.TransitionRow(x, s));
      std::vector<double> stage(game.num_players());
      for (int i = 0; i < game.num_players(); ++i) stage[i] = game.payoff(x, s, i);
      prow.push_back(std::move(stage));
    }
    transitions.push_back(std::move(trow));
    payoffs.push_back(std::move(prow));
  }
  j["transitions"] = std::move(transitions);
  j["payoffs"] = std::move(payoffs);
  return j;
}

StochasticGame StochasticGameFromJson(const Json& j) {
  const int players = AsInt(Field(j, "players", ""), "/players");
  const int states = AsInt(Field(j, "states", ""), "/states");
  auto actions = IntVector(Field(j, "actions", ""), "/actions");
  if (players < 1) SchemaError("/players", "must be >= 1");
  if (states < 1) SchemaError("/states", "must be >= 1");
  if (static_cast<int>(actions.size()) != players) {
    SchemaError("/actions", "length must equal players");
  }
  auto discounts = DoubleVector(Field(j, "discounts", ""), "/discounts");
  std::vector<std::vector<std::vector<double>>> transitions, payoffs;
  const Json& t = AsArray(Field(j, "transitions", ""), "/transitions");
  for (std::size_t x = 0; x < t.size(); ++x) {
    transitions.push_back(DoubleMatrix(t[x], "/transitions/" + std::to_string(x)));
  }
  const Json& p = AsArray(Field(j, "payoffs", ""), "/payoffs");
  for (std::size_t x = 0; x < p.size(); ++x) {
    payoffs.push_back(DoubleMatrix(p[x], "/payoffs/" + std::to_string(x)));
  }
  return WithSchemaContext("/transitions", [&] {
    return StochasticGame(std::move(actions), states, transitions, payoffs,
                          std::move(discounts));
  });
}

Json KStepGameToJson(const KStepGame& kgame) {
  Json j = StochasticGameToJson(kgame.base);
  j["k"] = kgame.k;
  return j;
}

KStepGame KStepGameFromJson(const Json& j) {
  KStepGame kgame{StochasticGameFromJson(j), 1};
  kgame.k = AsInt(Field(j, "k", ""), "/k");
  if (kgame.k < 1) SchemaError("/k", "must be >= 1");
  return kgame;
}

Json PolicyToJson(const StationaryPolicyProfile& pi) {
  return Json{{"policies", pi.policies()}};
}

StationaryPolicyProfile PolicyFromJson(const Json& j) {
  const Json& arr = AsArray(Field(j, "policies", ""), "/policies");
  std::vector<std::vector<std::vector<double>>> policies;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    policies.push_back(DoubleMatrix(arr[i], "/policies/" + std::to_string(i)));
  }
  return WithSchemaContext("/policies", [&] {
    return StationaryPolicyProfile(std::move(policies));
  });
}

Json ValueTableToJson(const ValueTable& table) {
  return Json{{"values", table.values}};
}

Json KStepCompilationToJson(const KStepCompilation& compiled, int k) {
  Json j;
  j["k"] = k;
  j["game"] = StochasticGameToJson(compiled.game);
  Json index = Json::array();
  for (std::size_t y = 0; y < compiled.states.size(); ++y) {
    index.push_back({{"index", y},
                     {"state", compiled.states[y].state},
                     {"history", compiled.states[y].history}});
  }
  j["state_index"] = std::move(index);
  return j;
}

Json StochasticSolverOutcomeToJson(const StochasticSolverOutcome& outcome) {
  Json j;
  j["method"] = SolverMethodName(outcome.method);
  j["residual"] = outcome.residual;
  j["converged"] = outcome.converged;
  j["policy"] = PolicyToJson(outcome.policy)["policies"];
  return j;
}

Json StochasticPathToJson(const StochasticPathRecord& path) {
  Json j;
  j["config"] = {{"epsilon", path.epsilon}, {"tol", path.tol}};
  Json profiles = Json::array();
  for (const auto& p : path.profiles) profiles.push_back(p.policies());
  j["profiles"] = std::move(profiles);
  j["satisfied"] = path.per_step_satisfied;
  j["group_counts"] = path.GroupCounts();
  j["step_count"] = path.step_count;
  j["terminal_is_equilibrium"] = path.terminal_is_equilibrium;
  j["status"] = PathStatusName(path.status);
  if (!path.failure_detail.empty()) j["failure"] = Json::parse(path.failure_detail);
  return j;
}

StochasticPathRecord StochasticPathFromJson(const Json& j) {
  StochasticPathRecord path;
  const Json& config = Field(j, "config", "");
  path.epsilon = AsDouble(Field(config, "epsilon", "/config"), "/config/epsilon");
  path.tol = AsDouble(Field(config, "tol", "/config"), "/config/tol");
  const Json& profiles = AsArray(Field(j, "profiles", ""), "/profiles");
  for (std::size_t t = 0; t < profiles.size(); ++t) {
    path.profiles.push_back(PolicyFromJson(Json{{"policies", profiles[t]}}));
  }
  path.per_step_satisfied = IntMatrix(Field(j, "satisfied", ""), "/satisfied");
  path.step_count = AsInt(Field(j, "step_count", ""), "/step_count");
  path.terminal_is_equilibrium =
      AsBool(Field(j, "terminal_is_equilibrium", ""), "/terminal_is_equilibrium");
  const Json& status = Field(j, "status", "");
  if (!status.is_string()) SchemaError("/status", "expected a string");
  path.status = PathStatusFromName(status.get<std::string>());
  if (j.contains("failure")) path.failure_detail = j["failure"].dump();
  return path;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kSchema, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    Fail(ErrorKind::kSchema, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kInvalidArgument, "cannot write '" + path + "'");
  out << text;
}

std::string DumpJson(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace satpath
