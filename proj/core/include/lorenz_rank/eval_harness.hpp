// Copyright 2026 The lorenz-rank Authors
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

#ifndef LORENZ_RANK_EVAL_HARNESS_HPP_
#define LORENZ_RANK_EVAL_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lorenz_rank/core_model.hpp"
#include "lorenz_rank/optimizer.hpp"

namespace lorenz_rank {

// mu_ij = clip(p_j s_i e_ij, 0, 1) with popularity p_j = j^-skew (1-based),
// user scale s_i ~ U[0.5, 1] and noise e_ij ~ LogNormal(0, 0.25).
PreferenceMatrix synthetic_prefs(std::size_t num_users, std::size_t num_items,
                                 double skew, std::uint64_t seed);

// Generalized Lorenz curve at floor(q n): total utility of the worst-off q
// fraction.
double quantile_cumulative_utility(std::span<const double> x, double q);

struct SweepRecord {
  double lambda;
  ObjectiveKind objective;
  std::string user_weights;
  std::string item_weights;
  double total_utility;
  double gini_exposure;
  // quantile_cumulative_utility at each configured quantile; 0 when
  // floor(q n) = 0.
  std::vector<double> quantiles;
  std::vector<double> quantile_utilities;
  double final_objective;
  int iterations;
  std::uint64_t seed;
  // Kept for Lorenz-efficiency audits.
  std::vector<double> user_utilities;
  std::vector<double> item_exposures;
};

inline const std::vector<double> kDefaultQuantiles = {0.25, 0.5};

SweepRecord make_sweep_record(
    const OptimizerConfig& config, const FwResult& result,
    std::span<const double> quantiles = kDefaultQuantiles);

// One optimizer run per lambda, in grid order. Runs may execute concurrently
// on up to `threads` workers (0 = hardware concurrency); the output does not
// depend on the thread count.
std::vector<SweepRecord> pareto_sweep(const OptimizerConfig& base,
                                      std::span<const double> lambda_grid,
                                      const PreferenceMatrix& prefs,
                                      const ExposureWeights& exposure,
                                      std::size_t threads = 1,
                                      std::span<const double> quantiles =
                                          kDefaultQuantiles);

struct AuditViolation {
  std::size_t dominating;  // record index
  std::size_t dominated;
};

struct AuditReport {
  std::size_t pairs_checked = 0;
  std::vector<AuditViolation> violations;
};

inline constexpr double kAuditTolerance = 1e-6;

// Flags pairs where one record jointly Lorenz-dominates the other: weakly on
// both sides and strictly on at least one.
AuditReport lorenz_audit(std::span<const SweepRecord> records,
                         double tolerance = kAuditTolerance);

struct OracleResult {
  double optimum;
  // Per-user distribution over items (n x m) attaining the optimum.
  DenseMatrix argmax;
  double resolution;
  std::size_t points_evaluated;

  std::string describe() const;
};

// Maximum of the exact objective of `config` over a uniform grid of the
// policy space of a tiny K = 1 instance (each user's policy is a
// distribution over its candidate items). Throws std::invalid_argument when
// the space has more than 4 free parameters, K != 1, 1 / resolution is not
// an integer, or the grid would exceed 5e7 points.
OracleResult grid_oracle(const OptimizerConfig& config,
                         const PreferenceMatrix& prefs,
                         const ExposureWeights& exposure, double resolution);

struct ComparisonRun {
  double beta0;
  ConvergenceTrace trace;
  double final_objective;
};

struct ConvergenceComparison {
  ConvergenceTrace subgradient;
  double subgradient_final;
  std::vector<ComparisonRun> smoothing;
};

// FW-subgradient once, plus FW-smoothing for each beta0.
ConvergenceComparison convergence_compare(const OptimizerConfig& config,
                                          const PreferenceMatrix& prefs,
                                          const ExposureWeights& exposure,
                                          std::span<const double> beta0_grid);

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_EVAL_HARNESS_HPP_
