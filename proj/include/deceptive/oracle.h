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

#ifndef DECEPTIVE_ORACLE_H_
#define DECEPTIVE_ORACLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "deceptive/finite_problem.h"

namespace deceptive {

// Exact backward-recursion solution of a finite instance.
struct DPolicySolution {
  std::vector<std::vector<double>> value;         // J_t(x), t = 0..T
  PolicyTables policy;                            // Q*_t(u|x), t = 0..T-1
  std::vector<std::vector<double>> desirability;  // Z_t(x) = exp(-J_t(x)/lambda)
};

// Soft-min Bellman recursion in log space. Handles stochastic successor
// tables: the continuation is the expected J_{t+1} over successors.
DPolicySolution EnumerateDP(const FiniteKLProblem& problem);

// Linear recursion Z_t(x) = sum_u R(u|x) exp(-C_t(x,u)/lambda) Z_{t+1}(F_t(x,u)).
// Deterministic instances only.
std::vector<std::vector<double>> ZRecursion(const FiniteKLProblem& problem);

// E_R[exp(-C_{t:T}/lambda)] from (t, x) by enumerating every action
// sequence. Throws EnumerationLimitError if the number of sequences
// exceeds `cap`.
double PathIntegralZ(const FiniteKLProblem& problem, int t, size_t x,
                     uint64_t cap = uint64_t{1} << 22);

// E_Q[C_{0:T}] + lambda * D(Q || R) by exhaustive path enumeration.
double KLControlObjective(const FiniteKLProblem& problem, const PolicyTables& q);

// Terminal cost 0.5 * q * (a x + b u)^2 with Gaussian reference N(mu, sigma2).
struct OneStepGaussian {
  double q = 1.0;
  double a = 1.0;
  double b = 1.0;
  double mu = 0.0;
  double sigma2 = 1.0;
  double lambda = 1.0;
};

struct GaussianParams {
  double mean = 0.0;
  double variance = 1.0;
};

// The optimal one-step policy is Gaussian; completing the square in
// R(u) exp(-q (a x + b u)^2 / (2 lambda)) gives
//   variance = 1 / (1/sigma2 + q b^2 / lambda)
//   mean     = variance * (mu / sigma2 - q a b x / lambda).
GaussianParams GaussianOneStep(const OneStepGaussian& problem, double x);

// Gibbs variational principle on a finite set:
//   F(R, C) = -lambda log sum R exp(-C/lambda) = min_P U(P, C) + lambda D(P||R).
struct DualityReport {
  double free_energy = 0.0;
  std::vector<double> optimal;  // P* proportional to R exp(-C/lambda)
  double optimal_objective = 0.0;  // U(P*, C) + lambda D(P* || R)
  double min_slack = 0.0;          // min over trials of objective - F
  bool holds = false;              // every slack >= -tolerance and P* tight
};

DualityReport LegendreDualityCheck(std::span<const double> reference,
                                   std::span<const double> cost, double lambda,
                                   const std::vector<std::vector<double>>& trials,
                                   double tolerance = 1e-10);

}  // namespace deceptive

#endif  // DECEPTIVE_ORACLE_H_
