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

#include "lorenz_rank/reciprocal.hpp"

#include <cmath>
#include <stdexcept>

namespace lorenz_rank {

namespace {

PreferenceMatrix zero_diagonal(const PreferenceMatrix& prefs) {
  if (prefs.num_users() != prefs.num_items()) {
    throw std::invalid_argument(
        "reciprocal recommendation needs a square preference matrix");
  }
  DenseMatrix values = prefs.matrix();
  for (std::size_t i = 0; i < values.rows(); ++i) values(i, i) = 0.0;
  return PreferenceMatrix(std::move(values));
}

}  // namespace

ReciprocalInstance::ReciprocalInstance(const PreferenceMatrix& prefs,
                                       double balance)
    : prefs_(zero_diagonal(prefs)), balance_(balance) {
  if (!(balance >= 0.0 && balance <= 1.0)) {
    throw std::invalid_argument("reciprocal balance must be in [0, 1]");
  }
}

ReciprocalSides reciprocal_sides(const Assignment& assignment,
                                 const ReciprocalInstance& instance,
                                 const ExposureWeights& exposure) {
  const std::size_t n = instance.size();
  if (assignment.num_users() != n || assignment.num_items() != n) {
    throw std::invalid_argument("reciprocal_sides: shape mismatch");
  }
  if (exposure.num_slots() != n || exposure.top_k() != assignment.top_k()) {
    throw std::invalid_argument("reciprocal_sides: exposure shape mismatch");
  }
  const PreferenceMatrix& mu = instance.prefs();
  ReciprocalSides sides{std::vector<double>(n, 0.0),
                        std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto ranked = assignment.ranking(i);
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      const std::size_t j = ranked[k];
      sides.received[i] += mu(i, j) * exposure[k];
      sides.provided[j] += mu(j, i) * exposure[k];
    }
  }
  return sides;
}

ReciprocalSides reciprocal_sides(const RankingPolicy& policy,
                                 const ReciprocalInstance& instance,
                                 const ExposureWeights& exposure) {
  const std::size_t n = instance.size();
  ReciprocalSides total{std::vector<double>(n, 0.0),
                        std::vector<double>(n, 0.0)};
  for (const auto& c : policy.components()) {
    const ReciprocalSides part =
        reciprocal_sides(c.assignment, instance, exposure);
    for (std::size_t i = 0; i < n; ++i) {
      total.received[i] += c.coefficient * part.received[i];
      total.provided[i] += c.coefficient * part.provided[i];
    }
  }
  return total;
}

std::vector<double> blend_sides(const ReciprocalSides& sides, double balance) {
  std::vector<double> u(sides.received.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = 2.0 * ((1.0 - balance) * sides.received[i] +
                  balance * sides.provided[i]);
  }
  return u;
}

std::vector<double> two_sided_utilities(const RankingPolicy& policy,
                                        const ReciprocalInstance& instance,
                                        const ExposureWeights& exposure) {
  return blend_sides(reciprocal_sides(policy, instance, exposure),
                     instance.balance());
}

double reciprocal_objective(const GgfWeights& w,
                            std::span<const double> utilities) {
  return ggf_value(w, utilities);
}

GgfWeights reciprocal_tradeoff_weights(std::size_t n, double lambda) {
  return WeightScheme::tradeoff(lambda).materialize(n);
}

DirectionScores reciprocal_direction_scores(
    std::span<const double> y, const ReciprocalInstance& instance) {
  const std::size_t n = instance.size();
  if (y.size() != n) {
    throw std::invalid_argument("reciprocal direction: y has wrong length");
  }
  const double balance = instance.balance();
  DirectionScores scores;
  scores.user_scale.resize(n);
  scores.transpose_scale.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores.user_scale[i] = -(1.0 - balance) * y[i];
    scores.transpose_scale[i] = -balance * y[i];
  }
  scores.exclude_self = true;
  return scores;
}

Assignment reciprocal_update_direction(std::span<const double> y,
                                       const ReciprocalInstance& instance,
                                       std::size_t top_k, std::size_t threads) {
  return best_response(reciprocal_direction_scores(y, instance),
                       instance.prefs(), top_k, threads);
}

namespace {

double sum_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

}  // namespace

double eq_utility_objective(std::span<const double> utilities, double lambda) {
  const double n = static_cast<double>(utilities.size());
  const double total = sum_of(utilities);
  const double mean = total / n;
  double ss = 0.0;
  for (double u : utilities) ss += (u - mean) * (u - mean);
  return total - lambda / n * std::sqrt(ss);
}

std::vector<double> eq_utility_gradient(std::span<const double> utilities,
                                        double lambda) {
  const double n = static_cast<double>(utilities.size());
  const double mean = sum_of(utilities) / n;
  double ss = 0.0;
  for (double u : utilities) ss += (u - mean) * (u - mean);
  const double root = std::sqrt(ss + kStdSmoothing);
  std::vector<double> g(utilities.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = 1.0 - lambda / n * (utilities[i] - mean) / root;
  }
  return g;
}

DirectionScores eq_utility_direction_scores(
    std::span<const double> utilities, double lambda,
    const ReciprocalInstance& instance) {
  const std::size_t n = instance.size();
  if (utilities.size() != n) {
    throw std::invalid_argument("eq utility: utilities have wrong length");
  }
  const std::vector<double> g = eq_utility_gradient(utilities, lambda);
  const double balance = instance.balance();
  DirectionScores scores;
  scores.user_scale.resize(n);
  scores.transpose_scale.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores.user_scale[i] = 2.0 * (1.0 - balance) * g[i];
    scores.transpose_scale[i] = 2.0 * balance * g[i];
  }
  scores.exclude_self = true;
  return scores;
}

DenseMatrix eq_utility_gradient_scores(std::span<const double> utilities,
                                       double lambda,
                                       const ReciprocalInstance& instance) {
  return score_matrix(
      eq_utility_direction_scores(utilities, lambda, instance),
      instance.prefs());
}

}  // namespace lorenz_rank
