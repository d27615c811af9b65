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

// Reciprocal recommendation: users are also the items being recommended.
//
// User i receives recommendations (utility ubar_i = sum_j mu_ij <P_ij, b>)
// and is itself recommended to others (utility vbar_i = sum_j mu_ij
// <P_ji, b>). The two-sided utility blends both sides:
//
//   u_i = 2 [ (1 - balance) ubar_i + balance vbar_i ]
//
// so balance = 0.5 gives ubar_i + vbar_i.

#ifndef LORENZ_RANK_RECIPROCAL_HPP_
#define LORENZ_RANK_RECIPROCAL_HPP_

#include <span>
#include <vector>

#include "lorenz_rank/core_model.hpp"
#include "lorenz_rank/direction.hpp"
#include "lorenz_rank/gini_welfare.hpp"

namespace lorenz_rank {

class ReciprocalInstance {
 public:
  // Requires a square matrix. The diagonal is zeroed.
  ReciprocalInstance(const PreferenceMatrix& prefs, double balance = 0.5);

  const PreferenceMatrix& prefs() const { return prefs_; }
  double balance() const { return balance_; }
  std::size_t size() const { return prefs_.num_users(); }

 private:
  PreferenceMatrix prefs_;
  double balance_;
};

// Received (ubar) and provided (vbar) sides of the two-sided utility.
struct ReciprocalSides {
  std::vector<double> received;
  std::vector<double> provided;
};

ReciprocalSides reciprocal_sides(const Assignment& assignment,
                                 const ReciprocalInstance& instance,
                                 const ExposureWeights& exposure);
ReciprocalSides reciprocal_sides(const RankingPolicy& policy,
                                 const ReciprocalInstance& instance,
                                 const ExposureWeights& exposure);

// 2 [(1 - balance) received + balance provided]
std::vector<double> blend_sides(const ReciprocalSides& sides, double balance);

std::vector<double> two_sided_utilities(const RankingPolicy& policy,
                                        const ReciprocalInstance& instance,
                                        const ExposureWeights& exposure);

double reciprocal_objective(const GgfWeights& w,
                            std::span<const double> utilities);

// w_i = (1 - lambda) + lambda (n - i + 1) / n
GgfWeights reciprocal_tradeoff_weights(std::size_t n, double lambda);

// s_ij = -[(1 - balance) y_i mu_ij + balance y_j mu_ji], self excluded.
DirectionScores reciprocal_direction_scores(std::span<const double> y,
                                            const ReciprocalInstance& instance);

Assignment reciprocal_update_direction(std::span<const double> y,
                                       const ReciprocalInstance& instance,
                                       std::size_t top_k,
                                       std::size_t threads = 1);

inline constexpr double kStdSmoothing = 1e-12;

// sum u - (lambda / n) sqrt(sum_i (u_i - mean u)^2)
double eq_utility_objective(std::span<const double> utilities, double lambda);

// dF/du_i, using sqrt(. + 1e-12) for the deviation term.
std::vector<double> eq_utility_gradient(std::span<const double> utilities,
                                        double lambda);

// Gradient scores s_ij of the equal-utility objective with respect to the
// policy (chain rule through the two-sided utilities).
DirectionScores eq_utility_direction_scores(std::span<const double> utilities,
                                            double lambda,
                                            const ReciprocalInstance& instance);
DenseMatrix eq_utility_gradient_scores(std::span<const double> utilities,
                                       double lambda,
                                       const ReciprocalInstance& instance);

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_RECIPROCAL_HPP_
