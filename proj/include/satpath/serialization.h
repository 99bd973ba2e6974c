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

#ifndef SATPATH_SERIALIZATION_H_
#define SATPATH_SERIALIZATION_H_

#include <string>

#include "json.hpp"
#include "satpath/dynamics.h"
#include "satpath/game.h"
#include "satpath/markov.h"
#include "satpath/markov_dynamics.h"
#include "satpath/solvers.h"

// JSON schemas.  Malformed input raises Error(kSchema) with a JSON pointer to
// the offending field.
//
//   normal-form game  {"players": n, "actions": [m_0, ...],
//                      "payoffs": [n * prod(m) numbers]}
//       payoffs are player-major; within a player, joint actions are
//       row-major with player 0 slowest.
//   mixed profile     [[p_0(0), ...], [p_1(0), ...], ...]
//   stochastic game   {"players": n, "states": S, "actions": [...],
//                      "discounts": [gamma_0, ...],
//                      "transitions": [S][J][S], "payoffs": [S][J][n]}
//       optionally "k" for a k-step game.
//   stationary policy {"policies": [n][S][m_i]}
//   value table       {"values": [n][S]}
namespace satpath {

using Json = nlohmann::json;

Json GameToJson(const NormalFormGame& game);
NormalFormGame GameFromJson(const Json& j);

Json ProfileToJson(const MixedProfile& profile);
MixedProfile ProfileFromJson(const Json& j, const std::string& where = "");

Json PartitionToJson(const GroupPartition& partition);
GroupPartition PartitionFromJson(const Json& j, const std::string& where = "");

Json PathToJson(const PathRecord& path);
PathRecord PathFromJson(const Json& j);

Json SolverOutcomeToJson(const SolverOutcome& outcome);
SolverOutcome SolverOutcomeFromJson(const Json& j);

bool IsStochasticGameJson(const Json& j);
Json StochasticGameToJson(const StochasticGame& game);
StochasticGame StochasticGameFromJson(const Json& j);
Json KStepGameToJson(const KStepGame& kgame);
KStepGame KStepGameFromJson(const Json& j);

Json PolicyToJson(const StationaryPolicyProfile& pi);
StationaryPolicyProfile PolicyFromJson(const Json& j);
Json ValueTableToJson(const ValueTable& table);

// The compiled game plus the exported state-index map.
Json KStepCompilationToJson(const KStepCompilation& compiled, int k);

Json StochasticSolverOutcomeToJson(const StochasticSolverOutcome& outcome);
Json StochasticPathToJson(const StochasticPathRecord& path);
StochasticPathRecord StochasticPathFromJson(const Json& j);

// File helpers.  Read failures and parse errors raise kSchema.
Json ReadJsonFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);
// Pretty-printed with a trailing newline; byte-stable for equal values.
std::string DumpJson(const Json& j);

}  // namespace satpath

#endif  // SATPATH_SERIALIZATION_H_
