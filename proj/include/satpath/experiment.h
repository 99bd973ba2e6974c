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

#ifndef SATPATH_EXPERIMENT_H_
#define SATPATH_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "satpath/markov.h"
#include "satpath/serialization.h"

namespace satpath {

enum class ExperimentKind {
  kNormalFormPath,
  kStochasticPath,
  kTopologyCheck,
  kKStepRoundtrip,
};

const char* ExperimentKindName(ExperimentKind kind);
ExperimentKind ExperimentKindFromName(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kNormalFormPath;
  // Per-seed instance sizes are drawn uniformly from these closed ranges.
  int min_players = 2;
  int max_players = 2;
  int min_actions = 2;
  int max_actions = 3;
  int min_states = 1;
  int max_states = 3;
  int k = 1;
  double discount = 0.8;
  double epsilon = 1e-6;
  std::vector<std::uint64_t> seeds;
  double tol = 1e-6;
  std::size_t max_steps = 100;
  double grid_step = 0.1;
  std::size_t budget = 2000;
  // k-step round trips.
  std::size_t episodes = 100'000;
  double alpha = 0.01;
  // Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
  // Written by RunExperiment when nonempty.  Not part of the JSON report.
  std::string json_out;
  std::string csv_out;

  void Validate() const;
};

Json ExperimentConfigToJson(const ExperimentConfig& config);
ExperimentConfig ExperimentConfigFromJson(const Json& j);

struct SeedRecord {
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  // Terminal equilibrium residual for path studies, the probed profile's
  // residual for topology checks, the largest frequency deviation for k-step
  // round trips.
  double residual = 0.0;
  bool terminal_is_equilibrium = false;
  bool success = false;
  std::vector<int> trajectory;  // satisfied-group count per step
  double millis = 0.0;          // wall time, CSV only
  Json detail;
};

struct LengthQuantiles {
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<SeedRecord> records;  // ascending seed
  double success_rate = 0.0;
  LengthQuantiles lengths;
};

// Runs every seed (in parallel), then reduces in ascending seed order.  Module
// errors are rethrown with the seed prepended.
RunReport RunExperiment(const ExperimentConfig& config);
SeedRecord RunSeed(const ExperimentConfig& config, std::uint64_t seed);

// Deterministic for equal configs; wall time is excluded.
Json ReportToJson(const RunReport& report);
// Columns: seed,kind,steps,residual,success,millis.
std::string ReportToCsv(const RunReport& report);

LengthQuantiles Quantiles(std::vector<double> values);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson goodness of fit of `observed` counts against `expected`
// probabilities.  Cells with expected count below 5 are pooled.  An observed
// count in a zero-probability cell gives p = 0.
ChiSquareResult ChiSquareGoodnessOfFit(const std::vector<double>& observed,
                                       const std::vector<double>& expected);

// Exact distribution of (state, last k joint actions) after `horizon` steps
// of the base game from `start`, with the history initialized to joint
// action 0.  Keys list the history most recent first.
using HistoryKey = std::pair<int, std::vector<std::size_t>>;
std::map<HistoryKey, double> ExactHistoryDistribution(
    const StochasticGame& base, int k, const StationaryPolicyProfile& pi,
    int start, int horizon);

}  // namespace satpath

#endif  // SATPATH_EXPERIMENT_H_
