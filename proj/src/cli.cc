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

#include "deceptive/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "deceptive/finite_problem.h"
#include "deceptive/format.h"
#include "deceptive/oracle.h"
#include "deceptive/parallel.h"

namespace deceptive {
namespace {

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void CheckWritten(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

std::string Join(const std::filesystem::path& dir, const char* name) {
  return (dir / name).string();
}

}  // namespace

RunConfig ApplyOverrides(RunConfig config, const RunOverrides& o) {
  if (o.lambda) config.lambda = *o.lambda;
  if (o.samples) config.samples = *o.samples;
  if (o.episodes) config.episodes = *o.episodes;
  if (o.seed) config.seed = *o.seed;
  if (o.out_dir) config.out_dir = *o.out_dir;
  if (o.threads) config.threads = *o.threads;
  if (o.policy) config.policy = *o.policy;
  config.Validate();
  return config;
}

RunResult RunExperiment(const RunConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  const UnicycleModel model(config.scenario);
  const ControlProblem problem = model.problem();
  const StateVector x0 = config.scenario.initial_state();
  const size_t episodes = static_cast<size_t>(config.episodes);
  const int horizon = problem.dynamics.horizon();

  // Parallelize over episodes; spare threads go to the rollouts.
  SamplerSettings settings;
  settings.lambda = config.lambda;
  settings.samples = static_cast<size_t>(config.samples);
  const int outer = static_cast<int>(
      std::min<size_t>(episodes, static_cast<size_t>(config.threads)));
  settings.threads = std::max(1, config.threads / outer);

  RunResult result;
  result.paths.resize(episodes);
  std::vector<std::vector<double>> llr(episodes);
  ParallelFor(episodes, config.threads, 1, [&](size_t begin, size_t end) {
    for (size_t e = begin; e < end; ++e) {
      const uint64_t seed = EpisodeSeed(config.seed, e);
      if (config.policy == PolicyKind::kReference) {
        RandomStream rng(seed);
        result.paths[e] = SimulateReference(problem, 0, x0, rng);
        llr[e].assign(static_cast<size_t>(horizon) + 1, 0.0);
      } else {
        Episode ep = RunEpisode(problem, x0, settings, seed);
        llr[e] = EpisodeLLR(ep.record);
        result.paths[e] = std::move(ep.trajectory);
      }
    }
  });

  result.llr = AggregateLLR(std::move(llr));
  RunSummary& s = result.summary;
  s.lambda = config.policy == PolicyKind::kReference
                 ? std::numeric_limits<double>::infinity()
                 : config.lambda;
  s.samples = config.samples;
  s.episodes = config.episodes;
  s.seed = config.seed;
  s.pr_safe = PrSafe(result.paths, model.cost().regions());
  s.mean_final_llr = result.llr.mean.back();
  s.std_final_llr = result.llr.stddev.back();
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void WriteSummaryCsv(const std::string& path, const std::vector<RunSummary>& rows) {
  std::ofstream out = OpenForWrite(path);
  out << "lambda,N,pr_safe,mean_final_llr,std_final_llr\n";
  for (const RunSummary& r : rows) {
    out << FormatReal(r.lambda) << ',' << r.samples << ',' << FormatReal(r.pr_safe)
        << ',' << FormatReal(r.mean_final_llr) << ',' << FormatReal(r.std_final_llr)
        << '\n';
  }
  CheckWritten(out, path);
}

void WriteRunArtifacts(const std::string& dir, const RunResult& result) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);

  const std::string paths_file = Join(root, "paths.csv");
  std::ofstream paths = OpenForWrite(paths_file);
  paths << "episode,t,px,py,s,theta,a,omega\n";
  for (size_t e = 0; e < result.paths.size(); ++e) {
    const Trajectory& traj = result.paths[e];
    for (size_t t = 0; t < traj.states.size(); ++t) {
      const StateVector& x = traj.states[t];
      paths << e << ',' << t << ',' << FormatReal(x[0]) << ',' << FormatReal(x[1])
            << ',' << FormatReal(x[2]) << ',' << FormatReal(x[3]) << ',';
      // No control is applied at the final time.
      if (t < traj.controls.size()) {
        paths << FormatReal(traj.controls[t][0]) << ',' << FormatReal(traj.controls[t][1]);
      } else {
        paths << ',';
      }
      paths << '\n';
    }
  }
  CheckWritten(paths, paths_file);

  const std::string llr_file = Join(root, "llr.csv");
  std::ofstream llr = OpenForWrite(llr_file);
  llr << "episode,t,cum_llr\n";
  for (size_t e = 0; e < result.llr.episodes.size(); ++e) {
    const auto& series = result.llr.episodes[e];
    for (size_t t = 0; t < series.size(); ++t) {
      llr << e << ',' << t << ',' << FormatReal(series[t]) << '\n';
    }
  }
  CheckWritten(llr, llr_file);

  WriteSummaryCsv(Join(root, "summary.csv"), {result.summary});
}

bool PrSafeOrdered(std::vector<RunSummary> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const RunSummary& a, const RunSummary& b) { return a.lambda > b.lambda; });
  for (size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].pr_safe > rows[i - 1].pr_safe)) return false;
  }
  return true;
}

std::vector<OracleComparisonRow> CompareOracle(const FiniteKLProblem& problem,
                                               const std::vector<uint64_t>& samples,
                                               uint64_t repetitions, uint64_t seed,
                                               int threads) {
  problem.Validate();
  if (repetitions == 0) throw ConfigError("repetitions must be at least 1");
  for (uint64_t n : samples) {
    if (n == 0) throw ConfigError("sample counts must be at least 1");
  }
  const DPolicySolution exact = EnumerateDP(problem);
  const FiniteModel model(problem);
  const ControlProblem cp = model.problem();

  std::vector<OracleComparisonRow> rows;
  std::vector<size_t> chosen(static_cast<size_t>(repetitions));
  for (int t = 0; t < problem.horizon(); ++t) {
    const FiniteStage& stage = problem.stages[static_cast<size_t>(t)];
    for (size_t x = 0; x < stage.num_states; ++x) {
      const std::span<const double> q_star(
          exact.policy[static_cast<size_t>(t)].data() + stage.index(x, 0),
          stage.num_actions);
      for (uint64_t n : samples) {
        SamplerSettings settings;
        settings.lambda = problem.lambda;
        settings.samples = static_cast<size_t>(n);
        ParallelFor(chosen.size(), threads, 64, [&](size_t begin, size_t end) {
          for (size_t r = begin; r < end; ++r) {
            const uint64_t step_seed =
                DeriveSeed(seed, {static_cast<uint64_t>(t), x, n, r});
            const Decision d = DeceptiveAction(
                cp, t, StateVector{static_cast<double>(x)}, settings, step_seed);
            chosen[r] = static_cast<size_t>(d.control[0]);
          }
        });
        std::vector<double> freq(stage.num_actions, 0.0);
        for (size_t a : chosen) freq[a] += 1.0;
        for (double& f : freq) f /= static_cast<double>(repetitions);
        rows.push_back({t, x, n, repetitions, TotalVariation(freq, q_star)});
      }
    }
  }
  return rows;
}

void WriteOracleCsv(const std::string& path,
                    const std::vector<OracleComparisonRow>& rows) {
  std::ofstream out = OpenForWrite(path);
  out << "t,state,N,repetitions,tv\n";
  for (const auto& r : rows) {
    out << r.t << ',' << r.state << ',' << r.samples << ',' << r.repetitions << ','
        << FormatReal(r.tv) << '\n';
  }
  CheckWritten(out, path);
}

namespace {

struct CommonFlags {
  std::string config_path;
  std::string config_positional;
  RunOverrides overrides;
  std::string policy;
};

void AddRunFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("config_file", f.config_positional, "Config file (INI)");
  cmd->add_option("--config", f.config_path, "Config file (INI)");
  cmd->add_option("--lambda", f.overrides.lambda, "KL weight lambda");
  cmd->add_option("--samples", f.overrides.samples, "Rollouts N per decision");
  cmd->add_option("--episodes", f.overrides.episodes, "Closed-loop episodes");
  cmd->add_option("--seed", f.overrides.seed, "Master seed");
  cmd->add_option("--out-dir", f.overrides.out_dir, "Output directory");
  cmd->add_option("--threads", f.overrides.threads, "Worker threads");
  cmd->add_option("--policy", f.policy, "deceptive or reference")
      ->check(CLI::IsMember({"deceptive", "reference"}));
}

RunConfig ResolveConfig(CommonFlags& f) {
  if (!f.config_path.empty() && !f.config_positional.empty() &&
      f.config_path != f.config_positional) {
    throw ConfigError("config given both as --config and positionally");
  }
  const std::string path = f.config_path.empty() ? f.config_positional : f.config_path;
  RunConfig base = path.empty() ? RunConfig{} : LoadConfig(path);
  if (f.policy == "reference") f.overrides.policy = PolicyKind::kReference;
  if (f.policy == "deceptive") f.overrides.policy = PolicyKind::kDeceptive;
  return ApplyOverrides(base, f.overrides);
}

void PrintSummary(const RunSummary& s) {
  std::cout << "lambda=" << FormatReal(s.lambda) << " N=" << s.samples
            << " episodes=" << s.episodes << " pr_safe=" << FormatReal(s.pr_safe)
            << " mean_final_llr=" << FormatReal(s.mean_final_llr)
            << " std_final_llr=" << FormatReal(s.std_final_llr) << " seed=" << s.seed
            << " wall_seconds=" << s.wall_seconds << std::endl;
}

int CmdRun(CommonFlags& f) {
  const RunConfig config = ResolveConfig(f);
  const RunResult result = RunExperiment(config);
  WriteRunArtifacts(config.out_dir, result);
  PrintSummary(result.summary);
  return kExitOk;
}

int CmdSweep(CommonFlags& f, const std::vector<double>& lambdas, bool with_reference) {
  RunConfig config = ResolveConfig(f);
  if (lambdas.empty()) throw ConfigError("sweep.lambdas: give at least one lambda");
  const std::filesystem::path root(config.out_dir);
  std::vector<RunSummary> rows;
  std::vector<RunConfig> runs;
  if (with_reference) {
    RunConfig c = config;
    c.policy = PolicyKind::kReference;
    c.out_dir = (root / "reference").string();
    runs.push_back(c);
  }
  for (size_t i = 0; i < lambdas.size(); ++i) {
    RunConfig c = config;
    c.policy = PolicyKind::kDeceptive;
    c.lambda = lambdas[i];
    c.out_dir = (root / ("lambda_" + std::to_string(i))).string();
    c.Validate();
    runs.push_back(c);
  }
  for (const RunConfig& c : runs) {
    const RunResult result = RunExperiment(c);
    WriteRunArtifacts(c.out_dir, result);
    PrintSummary(result.summary);
    rows.push_back(result.summary);
  }
  std::filesystem::create_directories(root);
  WriteSummaryCsv((root / "summary.csv").string(), rows);
  std::cout << "pr_safe strictly increasing as lambda decreases: "
            << (PrSafeOrdered(rows) ? "yes" : "no") << std::endl;
  return kExitOk;
}

int CmdCompareOracle(const std::string& instance, const std::vector<uint64_t>& samples,
                     uint64_t repetitions, uint64_t seed, int threads,
                     const std::string& out_dir) {
  if (threads < 1) throw ConfigError("threads must be at least 1");
  const FiniteKLProblem problem = LoadFiniteProblem(instance);
  const auto rows = CompareOracle(problem, samples, repetitions, seed, threads);
  std::filesystem::create_directories(out_dir);
  WriteOracleCsv((std::filesystem::path(out_dir) / "oracle_tv.csv").string(), rows);
  for (const auto& r : rows) {
    std::cout << "t=" << r.t << " state=" << r.state << " N=" << r.samples
              << " tv=" << FormatReal(r.tv) << '\n';
  }
  return kExitOk;
}

}  // namespace

int RunCommandLine(int argc, const char* const* argv) {
  CLI::App app{"Deceptive policy synthesis by path-integral sampling"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run closed-loop episodes");
  AddRunFlags(run, run_flags);

  CommonFlags sweep_flags;
  std::vector<double> lambdas;
  bool with_reference = false;
  CLI::App* sweep = app.add_subcommand("sweep", "Run one experiment per lambda");
  AddRunFlags(sweep, sweep_flags);
  sweep->add_option("--lambdas", lambdas, "Comma-separated lambda values")
      ->delimiter(',')
      ->required();
  sweep->add_flag("--with-reference", with_reference, "Also run the reference policy");

  std::string instance;
  std::vector<uint64_t> oracle_samples = {100, 1000, 10000, 100000};
  uint64_t repetitions = 1000;
  uint64_t oracle_seed = 1;
  int oracle_threads = 1;
  std::string oracle_out = "out";
  CLI::App* compare =
      app.add_subcommand("compare-oracle", "Compare sampled selection with exact Q*");
  compare->add_option("instance", instance, "Finite instance (JSON)")->required();
  compare->add_option("--samples", oracle_samples, "Comma-separated N values")
      ->delimiter(',');
  compare->add_option("--repetitions", repetitions, "Selections per (t, x, N)");
  compare->add_option("--seed", oracle_seed, "Master seed");
  compare->add_option("--threads", oracle_threads, "Worker threads");
  compare->add_option("--out-dir", oracle_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (run->parsed()) return CmdRun(run_flags);
    if (sweep->parsed()) return CmdSweep(sweep_flags, lambdas, with_reference);
    return CmdCompareOracle(instance, oracle_samples, repetitions, oracle_seed,
                            oracle_threads, oracle_out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << std::endl;
    return kExitConfigError;
  } catch (const NoAdmissibleRollout& e) {
    std::cerr << "runtime error: " << e.what() << std::endl;
    return kExitRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << std::endl;
    return kExitRuntimeError;
  }
}

}  // namespace deceptive
