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

// Frank-Wolfe over stochastic ranking policies.
//
// The GGF objectives are nonsmooth. FW-smoothing replaces -g_w by its Moreau
// envelope with beta_t = beta0 / sqrt(t) and takes the standard Frank-Wolfe
// step 2 / (t + 2) toward the best deterministic response to the smoothed
// gradient. FW-subgradient plugs a supergradient of g_w in instead and is kept
// as an ablation. The smooth baselines (welf, equal exposure, equal utility) run
// through the same loop with their exact gradients.

#ifndef LORENZ_RANK_OPTIMIZER_HPP_
#define LORENZ_RANK_OPTIMIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lorenz_rank/core_model.hpp"
#include "lorenz_rank/direction.hpp"
#include "lorenz_rank/gini_welfare.hpp"

namespace lorenz_rank {

enum class ObjectiveKind {
  kTwoSidedGgf,
  kWelf,
  kEqExposure,
  kReciprocalGgf,
  kEqUtility,
};

enum class Variant { kSmoothing, kSubgradient };

std::string_view to_string(ObjectiveKind kind);
std::string_view to_string(Variant variant);
ObjectiveKind parse_objective_kind(std::string_view text);
Variant parse_variant(std::string_view text);

bool is_reciprocal(ObjectiveKind kind);

struct OptimizerConfig {
  int iterations = 1000;
  // Unset means default_beta0().
  std::optional<double> beta0;
  // User/item trade-off for one-sided objectives; std penalty weight for
  // equal utility.
  double lambda = 0.5;
  WeightScheme user_weights = WeightScheme::uniform();
  WeightScheme item_weights = WeightScheme::gini();
  ObjectiveKind objective = ObjectiveKind::kTwoSidedGgf;
  Variant variant = Variant::kSmoothing;
  // welf exponents.
  double alpha_user = 1.0;
  double alpha_item = 0.0;
  // Side blend of the two-sided utility in reciprocal mode.
  double reciprocal_balance = 0.5;
  // Recorded for provenance; the optimizer itself draws no random numbers.
  std::uint64_t seed = 0;
  int trace_every = 10;
  bool record_wall_time = true;
  // Worker threads for the per-user loop (0 = hardware concurrency).
  std::size_t threads = 1;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TraceRecord {
  int t;
  double beta;
  double objective;
  double wall_ms;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;

  // Running maximum of the logged objective values.
  std::vector<double> best_so_far() const;
};

struct FwResult {
  RankingPolicy policy;
  ConvergenceTrace trace;
  // Final user utilities (two-sided in reciprocal mode) and item exposures.
  UtilityProfile profile;
  double objective;
};

// beta0 / sqrt(t)
double beta_schedule(double beta0, int t);

// sqrt(2 n m): each user's pair of (truncated) permutation matrices differs
// by at most 2m in squared Frobenius norm.
double policy_diameter_bound(std::size_t num_users, std::size_t num_items);

// Norm of the concatenated ((1 - lambda) w_user, lambda w_item).
double combined_weight_norm(double lambda, const GgfWeights& user_weights,
                            const GgfWeights& item_weights);

// 2 D b_1 / |w|
double default_beta0(std::size_t num_users, std::size_t num_items,
                     const ExposureWeights& exposure, double lambda,
                     const GgfWeights& user_weights,
                     const GgfWeights& item_weights);

// 2 D b_1 |w| / sqrt(t): worst-case suboptimality after t smoothing steps
// with the default beta0.
double smoothing_error_bound(std::size_t num_users, std::size_t num_items,
                             const ExposureWeights& exposure, double lambda,
                             const GgfWeights& user_weights,
                             const GgfWeights& item_weights, int t);

// Scores s_ij = -[(1 - lambda) y1_i mu_ij + lambda y2_j] from the projected
// duals of the user and item sides.
DirectionScores ggf_direction_scores(std::span<const double> user_dual,
                                     std::span<const double> item_dual,
                                     double lambda);

// Per user, top-K of -[(1 - lambda) y1_i mu_ij + lambda y2_j].
Assignment update_direction(std::span<const double> user_dual,
                            std::span<const double> item_dual,
                            const PreferenceMatrix& prefs, double lambda,
                            std::size_t top_k, std::size_t threads = 1);

inline constexpr double kPositiveFloor = 1e-12;

// Isoelastic welfare: x^a (a > 0), log x (a = 0), -x^a (a < 0). For a <= 0
// the argument is floored at 1e-12 unless `floor` is false, in which case a
// non-positive argument throws std::domain_error.
double welfare_phi(double x, double alpha, bool floor = true);
double welfare_phi_derivative(double x, double alpha, bool floor = true);

double welf_objective(std::span<const double> user_utilities,
                      std::span<const double> item_exposures,
                      double alpha_user, double alpha_item, double lambda,
                      bool floor = true);
DirectionScores welf_direction_scores(std::span<const double> user_utilities,
                                      std::span<const double> item_exposures,
                                      double alpha_user, double alpha_item,
                                      double lambda, bool floor = true);
DenseMatrix welf_gradient_scores(std::span<const double> user_utilities,
                                 std::span<const double> item_exposures,
                                 const PreferenceMatrix& prefs,
                                 double alpha_user, double alpha_item,
                                 double lambda, bool floor = true);

// sum u - (lambda / m) sqrt(sum_j (v_j - mean v)^2)
double eq_exposure_objective(std::span<const double> user_utilities,
                             std::span<const double> item_exposures,
                             double lambda);
DirectionScores eq_exposure_direction_scores(
    std::span<const double> item_exposures, std::size_t num_users,
    double lambda);
DenseMatrix eq_exposure_gradient_scores(std::span<const double> item_exposures,
                                        const PreferenceMatrix& prefs,
                                        double lambda);

// Runs the configured objective and variant.
FwResult frank_wolfe(const OptimizerConfig& config,
                     const PreferenceMatrix& prefs,
                     const ExposureWeights& exposure);

// frank_wolfe with the variant forced.
FwResult fw_smoothing(OptimizerConfig config, const PreferenceMatrix& prefs,
                      const ExposureWeights& exposure);
FwResult fw_subgradient(OptimizerConfig config, const PreferenceMatrix& prefs,
                        const ExposureWeights& exposure);

// Exact (unsmoothed) objective as a function of the utility profile. In
// reciprocal mode `utilities` are the two-sided utilities.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const OptimizerConfig& config, std::size_t num_users,
                     std::size_t num_items);

  double operator()(std::span<const double> utilities,
                    std::span<const double> exposures) const;

  const GgfWeights& user_weights() const { return user_weights_; }
  const GgfWeights& item_weights() const { return item_weights_; }

 private:
  ObjectiveKind kind_;
  double lambda_;
  double alpha_user_;
  double alpha_item_;
  GgfWeights user_weights_;
  GgfWeights item_weights_;
};

// Exact (unsmoothed) objective of a policy under `config`.
double evaluate_objective(const OptimizerConfig& config,
                          const RankingPolicy& policy,
                          const PreferenceMatrix& prefs,
                          const ExposureWeights& exposure);

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_OPTIMIZER_HPP_
