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

#include "deceptive/scenarios.h"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "deceptive/format.h"

namespace deceptive {

RegionSet UnicycleScenario::DefaultFireRegions() {
  return RegionSet({Rect{3.0, 23.0, -20.0, 0.0}, Rect{3.0, 23.0, 0.0, 20.0}});
}

void UnicycleScenario::Validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("scenario." + field + ": " + why);
  };
  if (horizon < 0) fail("horizon", "T must be non-negative");
  if (!(goal_radius > 0.0)) fail("goal_radius", "goal radius must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) fail("h", "step size must be positive");
  for (double v : goal) {
    if (!std::isfinite(v)) fail("goal", "goal must be finite");
  }
  for (double v : x0) {
    if (!std::isfinite(v)) fail("x0", "initial state must be finite");
  }
  if (!std::isfinite(k_a) || !std::isfinite(k_omega)) {
    fail(std::isfinite(k_a) ? "k_omega" : "k_a", "gain must be finite");
  }
  const double a = sigma[0], b = sigma[1], c = sigma[2], d = sigma[3];
  if (b != c) fail("sigma", "covariance is not symmetric");
  if (!(a >= GaussianPolicy::kMinVariance) ||
      !(d >= GaussianPolicy::kMinVariance) || !(a * d - b * c > 0.0)) {
    fail("sigma", "covariance is not positive definite");
  }
}

UnicycleDynamics::UnicycleDynamics(double h, int horizon)
    : h_(h), horizon_(horizon) {
  if (!(h > 0.0)) throw ConfigError("unicycle step size must be positive");
  if (horizon < 0) throw ConfigError("horizon must be non-negative");
}

StateVector UnicycleDynamics::Next(int, const StateVector& x,
                                   const ControlVector& u) const {
  const double speed = x[2];
  const double heading = x[3];
  return {x[0] + speed * std::cos(heading) * h_,
          x[1] + speed * std::sin(heading) * h_, speed + u[0] * h_,
          heading + u[1] * h_};
}

UnicycleDynamics MakeUnicycleDynamics(const UnicycleScenario& scenario) {
  return UnicycleDynamics(scenario.h, scenario.horizon);
}

ControlVector UnicycleReferenceMean(const UnicycleScenario& s, int t,
                                    const StateVector& x) {
  if (t < 0 || t >= s.horizon) {
    throw ConfigError("reference policy is defined only for t < T");
  }
  const double dx = s.goal[0] - x[0];
  const double dy = s.goal[1] - x[1];
  const double desired_speed = std::sqrt(dx * dx + dy * dy) / (s.horizon - t);
  // At the goal center the bearing is undefined; hold the current heading.
  const double desired_heading =
      (dx == 0.0 && dy == 0.0) ? x[3] : std::atan2(dy, dx);
  return {-s.k_a * (x[2] - desired_speed),
          -s.k_omega * (x[3] - desired_heading)};
}

GaussianPolicy MakeUnicycleReferencePolicy(const UnicycleScenario& scenario) {
  return GaussianPolicy(
      2,
      [scenario](int t, const StateVector& x) {
        return UnicycleReferenceMean(scenario, t, x);
      },
      {scenario.sigma.begin(), scenario.sigma.end()});
}

FireCost MakeFireCost(const UnicycleScenario& scenario) {
  return FireCost(scenario.fire);
}

UnicycleModel::UnicycleModel(const UnicycleScenario& scenario)
    : scenario_((scenario.Validate(), scenario)),
      dynamics_(MakeUnicycleDynamics(scenario)),
      reference_(MakeUnicycleReferencePolicy(scenario)),
      cost_(MakeFireCost(scenario)) {}

void RunConfig::Validate() const {
  scenario.Validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("run.lambda: λ must be positive");
  }
  if (samples < 1) throw ConfigError("run.samples: N must be at least 1");
  if (episodes < 1) throw ConfigError("run.episodes: must be at least 1");
  if (threads < 1) throw ConfigError("run.threads: must be at least 1");
  if (out_dir.empty()) throw ConfigError("run.out_dir: must not be empty");
}

namespace {

using boost::property_tree::ptree;

template <size_t N>
std::array<double, N> ParseFixed(const std::string& field,
                                 const std::string& text) {
  const std::vector<double> v = ParseRealList(text);
  if (v.size() != N) {
    throw ConfigError(field + ": expected " + std::to_string(N) + " values");
  }
  std::array<double, N> out{};
  for (size_t i = 0; i < N; ++i) out[i] = v[i];
  return out;
}

uint64_t ParseCount(const std::string& field, const std::string& text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t pos = 0;
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  s = s.substr(pos);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    // Allow exact reals such as 1e5.
    double v = 0.0;
    try {
      v = ParseReal(s);
    } catch (const ConfigError&) {
      throw ConfigError(field + ": '" + s + "' is not a non-negative integer");
    }
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
      throw ConfigError(field + ": '" + s + "' is not a non-negative integer");
    }
    return static_cast<uint64_t>(v);
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ConfigError(field + ": '" + s + "' is out of range");
  }
}

double ParseField(const std::string& field, const std::string& text) {
  try {
    return ParseReal(text);
  } catch (const ConfigError& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

std::string FormatList(const double* v, size_t n) {
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += FormatReal(v[i]);
  }
  return out;
}

RegionSet ParseRegions(const std::string& text) {
  std::vector<Shape> shapes;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    shapes.push_back(ParseShape(item));
  }
  return RegionSet(std::move(shapes));
}

void ApplyScenarioKey(UnicycleScenario& s, const std::string& key,
                      const std::string& value) {
  const std::string field = "scenario." + key;
  try {
    if (key == "goal") {
      s.goal = ParseFixed<2>(field, value);
    } else if (key == "goal_radius") {
      s.goal_radius = ParseField(field, value);
    } else if (key == "k_a") {
      s.k_a = ParseField(field, value);
    } else if (key == "k_omega") {
      s.k_omega = ParseField(field, value);
    } else if (key == "sigma") {
      s.sigma = ParseFixed<4>(field, value);
    } else if (key == "h") {
      s.h = ParseField(field, value);
    } else if (key == "horizon") {
      const uint64_t t = ParseCount(field, value);
      if (t > 100000) throw ConfigError(field + ": horizon too large");
      s.horizon = static_cast<int>(t);
    } else if (key == "x0") {
      s.x0 = ParseFixed<4>(field, value);
    } else if (key == "fire") {
      s.fire = ParseRegions(value);
    } else {
      throw ConfigError(field + ": unknown key");
    }
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(field, 0) == 0) throw;
    throw ConfigError(field + ": " + what);
  }
}

void ApplyRunKey(RunConfig& c, const std::string& key,
                 const std::string& value) {
  const std::string field = "run." + key;
  if (key == "lambda") {
    c.lambda = ParseField(field, value);
  } else if (key == "samples") {
    c.samples = ParseCount(field, value);
  } else if (key == "episodes") {
    c.episodes = ParseCount(field, value);
  } else if (key == "seed") {
    c.seed = ParseCount(field, value);
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else if (key == "threads") {
    const uint64_t n = ParseCount(field, value);
    if (n > 4096) throw ConfigError(field + ": too many threads");
    c.threads = static_cast<int>(n);
  } else if (key == "policy") {
    if (value == "deceptive") {
      c.policy = PolicyKind::kDeceptive;
    } else if (value == "reference") {
      c.policy = PolicyKind::kReference;
    } else {
      throw ConfigError(field + ": expected 'deceptive' or 'reference'");
    }
  } else {
    throw ConfigError(field + ": unknown key");
  }
}

}  // namespace

RunConfig ParseConfig(const std::string& text) {
  ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(e.line()) +
                      ": " + e.message());
  }

  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw ConfigError(section + ": keys must appear inside [scenario] or [run]");
    }
    if (section == "scenario") {
      for (const auto& [key, node] : body) {
        ApplyScenarioKey(config.scenario, key, node.data());
      }
    } else if (section == "run") {
      for (const auto& [key, node] : body) ApplyRunKey(config, key, node.data());
    } else {
      throw ConfigError(section + ": unknown section");
    }
  }
  config.Validate();
  return config;
}

RunConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

std::string SerializeConfig(const RunConfig& c) {
  const auto& s = c.scenario;
  std::ostringstream out;
  out << "[scenario]\n";
  out << "goal = " << FormatList(s.goal.data(), 2) << "\n";
  out << "goal_radius = " << FormatReal(s.goal_radius) << "\n";
  out << "k_a = " << FormatReal(s.k_a) << "\n";
  out << "k_omega = " << FormatReal(s.k_omega) << "\n";
  out << "sigma = " << FormatList(s.sigma.data(), 4) << "\n";
  out << "h = " << FormatReal(s.h) << "\n";
  out << "horizon = " << s.horizon << "\n";
  out << "x0 = " << FormatList(s.x0.data(), 4) << "\n";
  out << "fire = ";
  for (size_t i = 0; i < s.fire.shapes().size(); ++i) {
    if (i) out << "; ";
    out << FormatShape(s.fire.shapes()[i]);
  }
  out << "\n\n[run]\n";
  out << "lambda = " << FormatReal(c.lambda) << "\n";
  out << "samples = " << c.samples << "\n";
  out << "episodes = " << c.episodes << "\n";
  out << "seed = " << c.seed << "\n";
  out << "out_dir = " << c.out_dir << "\n";
  out << "threads = " << c.threads << "\n";
  out << "policy = "
      << (c.policy == PolicyKind::kReference ? "reference" : "deceptive")
      << "\n";
  return out.str();
}

}  // namespace deceptive
