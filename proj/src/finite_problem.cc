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

#include "deceptive/finite_problem.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "deceptive/format.h"
#include "json.hpp"

namespace deceptive {
namespace {

using nlohmann::json;

constexpr double kNormalizationTolerance = 1e-9;

std::string Where(size_t t, size_t x) {
  return "stage " + std::to_string(t) + ", state " + std::to_string(x);
}

double JsonReal(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return ParseReal(v.get<std::string>());
  throw ConfigError(where + ": expected a number or \"inf\"");
}

size_t JsonIndex(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(where + ": expected a non-negative integer");
  }
  return v.get<size_t>();
}

size_t ActionIndex(const FiniteStage& stage, const ControlVector& u) {
  const double a = u[0];
  if (!(a >= 0.0) || a != std::floor(a) ||
      a >= static_cast<double>(stage.num_actions)) {
    throw ConfigError("control does not name an action of this stage");
  }
  return static_cast<size_t>(a);
}

size_t StateIndex(size_t num_states, const StateVector& x) {
  const double s = x[0];
  if (!(s >= 0.0) || s != std::floor(s) ||
      s >= static_cast<double>(num_states)) {
    throw ConfigError("state does not name a state of this stage");
  }
  return static_cast<size_t>(s);
}

}  // namespace

bool FiniteKLProblem::is_deterministic() const {
  for (const auto& stage : stages) {
    for (const auto& succ : stage.successors) {
      if (succ.size() != 1) return false;
    }
  }
  return true;
}

void FiniteKLProblem::Validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be positive and finite");
  }
  if (terminal_cost.empty()) throw ConfigError("terminal_cost must be non-empty");
  if (initial_state >= num_states(0)) {
    throw ConfigError("initial_state out of range");
  }
  for (double c : terminal_cost) {
    if (std::isnan(c) || c == -std::numeric_limits<double>::infinity()) {
      throw ConfigError("terminal cost must be finite or +inf");
    }
  }
  for (size_t t = 0; t < stages.size(); ++t) {
    const FiniteStage& s = stages[t];
    const size_t next_states = num_states(static_cast<int>(t) + 1);
    if (s.num_states == 0 || s.num_actions == 0) {
      throw ConfigError("stage " + std::to_string(t) + " has no states or actions");
    }
    const size_t cells = s.num_states * s.num_actions;
    if (s.reference.size() != cells || s.cost.size() != cells ||
        s.successors.size() != cells) {
      throw ConfigError("stage " + std::to_string(t) + " tables have the wrong shape");
    }
    for (size_t x = 0; x < s.num_states; ++x) {
      double total = 0.0;
      for (size_t u = 0; u < s.num_actions; ++u) {
        const double p = s.reference[s.index(x, u)];
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw ConfigError(Where(t, x) + ": reference probabilities must be non-negative");
        }
        total += p;
        const double c = s.cost[s.index(x, u)];
        if (std::isnan(c) || c == -std::numeric_limits<double>::infinity()) {
          throw ConfigError(Where(t, x) + ": stage cost must be finite or +inf");
        }
        const auto& succ = s.successors[s.index(x, u)];
        if (succ.empty()) throw ConfigError(Where(t, x) + ": action without successor");
        double mass = 0.0;
        for (const Successor& n : succ) {
          if (n.state >= next_states) {
            throw ConfigError(Where(t, x) + ": successor state out of range");
          }
          if (!(n.probability >= 0.0)) {
            throw ConfigError(Where(t, x) + ": negative transition probability");
          }
          mass += n.probability;
        }
        if (std::abs(mass - 1.0) > kNormalizationTolerance) {
          throw ConfigError(Where(t, x) + ": transition probabilities do not sum to 1");
        }
      }
      if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw ConfigError(Where(t, x) + ": reference distribution is not normalized");
      }
    }
  }
}

PolicyTables ReferenceTables(const FiniteKLProblem& problem) {
  PolicyTables tables;
  tables.reserve(problem.stages.size());
  for (const auto& stage : problem.stages) tables.push_back(stage.reference);
  return tables;
}

FiniteKLProblem ParseFiniteProblem(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("finite problem: ") + e.what());
  }
  static const char* kTopKeys[] = {"lambda", "initial_state", "terminal_cost", "stages"};
  for (const auto& [key, _] : doc.items()) {
    bool known = false;
    for (const char* k : kTopKeys) known = known || key == k;
    if (!known) throw ConfigError("finite problem: unknown key '" + key + "'");
  }

  FiniteKLProblem p;
  try {
    p.lambda = JsonReal(doc.at("lambda"), "lambda");
    p.initial_state = doc.contains("initial_state")
                          ? JsonIndex(doc["initial_state"], "initial_state")
                          : 0;
    for (const auto& c : doc.at("terminal_cost")) {
      p.terminal_cost.push_back(JsonReal(c, "terminal_cost"));
    }
    const json& stages = doc.at("stages");
    for (size_t t = 0; t < stages.size(); ++t) {
      const json& js = stages[t];
      const std::string where = "stages[" + std::to_string(t) + "]";
      FiniteStage s;
      const json& ref = js.at("reference");
      s.num_states = ref.size();
      s.num_actions = s.num_states ? ref[0].size() : 0;
      const json& cost = js.at("cost");
      if (cost.size() != s.num_states) throw ConfigError(where + ": cost rows != states");
      const bool stochastic = js.contains("transitions");
      if (stochastic == js.contains("next")) {
        throw ConfigError(where + ": give exactly one of 'next' or 'transitions'");
      }
      const json& trans = stochastic ? js["transitions"] : js["next"];
      if (trans.size() != s.num_states) {
        throw ConfigError(where + ": transition rows != states");
      }
      for (size_t x = 0; x < s.num_states; ++x) {
        if (ref[x].size() != s.num_actions || cost[x].size() != s.num_actions ||
            trans[x].size() != s.num_actions) {
          throw ConfigError(where + ": ragged row at state " + std::to_string(x));
        }
        for (size_t u = 0; u < s.num_actions; ++u) {
          s.reference.push_back(JsonReal(ref[x][u], where + ".reference"));
          s.cost.push_back(JsonReal(cost[x][u], where + ".cost"));
          std::vector<Successor> succ;
          if (stochastic) {
            for (const auto& pair : trans[x][u]) {
              if (pair.size() != 2) throw ConfigError(where + ": transitions entries are [state, p]");
              succ.push_back({JsonIndex(pair[0], where + ".transitions"),
                              JsonReal(pair[1], where + ".transitions")});
            }
          } else {
            succ.push_back({JsonIndex(trans[x][u], where + ".next"), 1.0});
          }
          s.successors.push_back(std::move(succ));
        }
      }
      p.stages.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("finite problem: ") + e.what());
  }
  p.Validate();
  return p;
}

FiniteKLProblem LoadFiniteProblem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open finite problem '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseFiniteProblem(text.str());
}

FiniteDynamics::FiniteDynamics(const FiniteKLProblem& problem)
    : problem_(problem) {
  if (!problem.is_deterministic()) {
    throw ConfigError("path-integral sampling requires deterministic transitions");
  }
}

StateVector FiniteDynamics::Next(int t, const StateVector& x,
                                 const ControlVector& u) const {
  const FiniteStage& s = problem_.stages[static_cast<size_t>(t)];
  const size_t xi = StateIndex(s.num_states, x);
  const size_t ui = ActionIndex(s, u);
  return {static_cast<double>(s.successors[s.index(xi, ui)].front().state)};
}

ControlVector FiniteReferencePolicy::Sample(int t, const StateVector& x,
                                            RandomStream& rng) const {
  const FiniteStage& s = problem_.stages[static_cast<size_t>(t)];
  const size_t xi = StateIndex(s.num_states, x);
  const double d = rng.Uniform01();
  double running = 0.0;
  size_t last_positive = 0;
  for (size_t u = 0; u < s.num_actions; ++u) {
    const double p = s.reference[s.index(xi, u)];
    if (p <= 0.0) continue;
    last_positive = u;
    running += p;
    if (d < running) return {static_cast<double>(u)};
  }
  return {static_cast<double>(last_positive)};
}

double FiniteReferencePolicy::LogDensity(int t, const StateVector& x,
                                         const ControlVector& u) const {
  const FiniteStage& s = problem_.stages[static_cast<size_t>(t)];
  return std::log(s.reference[s.index(StateIndex(s.num_states, x), ActionIndex(s, u))]);
}

double FiniteCost::Stage(int t, const StateVector& x,
                         const ControlVector& u) const {
  const FiniteStage& s = problem_.stages[static_cast<size_t>(t)];
  return s.cost[s.index(StateIndex(s.num_states, x), ActionIndex(s, u))];
}

double FiniteCost::Terminal(const StateVector& x) const {
  return problem_.terminal_cost[StateIndex(problem_.terminal_cost.size(), x)];
}

FiniteModel::FiniteModel(const FiniteKLProblem& problem)
    : dynamics_(problem), reference_(problem), cost_(problem) {}

}  // namespace deceptive
