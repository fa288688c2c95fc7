// Copyright 2026 The deceptive-pi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECEPTIVE_CLI_H_
#define DECEPTIVE_CLI_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deceptive/metrics.h"
#include "deceptive/sampler.h"
#include "deceptive/scenarios.h"

namespace deceptive {

// Process exit codes of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

// Command-line values that beat the config file.
struct RunOverrides {
  std::optional<double> lambda;
  std::optional<uint64_t> samples;
  std::optional<uint64_t> episodes;
  std::optional<uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<PolicyKind> policy;
};

// Applies the overrides and validates the result.
RunConfig ApplyOverrides(RunConfig config, const RunOverrides& overrides);

struct RunSummary {
  double lambda = 0.0;  // +inf for reference-policy runs
  uint64_t samples = 0;
  uint64_t episodes = 0;
  double pr_safe = 0.0;
  double mean_final_llr = 0.0;
  double std_final_llr = 0.0;
  double wall_seconds = 0.0;  // reported on stdout only
  uint64_t seed = 0;
};

struct RunResult {
  std::vector<Trajectory> paths;  // sorted by episode index
  LLRSeries llr;
  RunSummary summary;
};

inline uint64_t EpisodeSeed(uint64_t master_seed, uint64_t episode) {
  return DeriveSeed(master_seed, {episode});
}

// Runs config.episodes closed-loop episodes in parallel. Reference-policy
// runs have cumulative LLR identically 0.
RunResult RunExperiment(const RunConfig& config);

// paths.csv, llr.csv and summary.csv in `dir` (created if missing).
void WriteRunArtifacts(const std::string& dir, const RunResult& result);

// summary.csv rows for a set of runs, one row per run in the given order.
void WriteSummaryCsv(const std::string& path,
                     const std::vector<RunSummary>& rows);

// True when pr_safe strictly increases as lambda decreases.
bool PrSafeOrdered(std::vector<RunSummary> rows);

// Empirical sampler selection frequencies against exact Q* per (t, x, N).
struct OracleComparisonRow {
  int t = 0;
  size_t state = 0;
  uint64_t samples = 0;
  uint64_t repetitions = 0;
  double tv = 0.0;
};

std::vector<OracleComparisonRow> CompareOracle(const FiniteKLProblem& problem,
                                               const std::vector<uint64_t>& samples,
                                               uint64_t repetitions, uint64_t seed,
                                               int threads);

void WriteOracleCsv(const std::string& path,
                    const std::vector<OracleComparisonRow>& rows);

// Entry point shared by the executable and the tests.
int RunCommandLine(int argc, const char* const* argv);

}  // namespace deceptive

#endif  // DECEPTIVE_CLI_H_
