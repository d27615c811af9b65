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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "lorenz_rank/direction.hpp"
#include "lorenz_rank/reciprocal.hpp"
#include "oracles.hpp"

using namespace lorenz_rank;
using doctest::Approx;

namespace {

PreferenceMatrix random_square(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> mu(n * n);
  for (double& x : mu) x = u(rng);
  return PreferenceMatrix(n, n, std::move(mu));
}

Assignment random_assignment(std::size_t n, std::size_t k,
                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DirectionScores s;
  s.user_scale.assign(n, 1.0);
  s.exclude_self = true;
  std::vector<double> noise(n * n);
  for (double& x : noise) x = u(rng);
  return best_response(s, PreferenceMatrix(n, n, noise), k);
}

}  // namespace

TEST_CASE("instance zeroes the diagonal and needs a square matrix") {
  const ReciprocalInstance inst(PreferenceMatrix(2, 2, {0.9, 0.6, 0.6, 0.8}));
  CHECK(inst.prefs()(0, 0) == 0.0);
  CHECK(inst.prefs()(1, 1) == 0.0);
  CHECK(inst.prefs()(0, 1) == 0.6);
  CHECK(inst.balance() == 0.5);
  CHECK_THROWS_AS(ReciprocalInstance(PreferenceMatrix(2, 3, std::vector<double>(6, 0.5))),
                  std::invalid_argument);
  CHECK_THROWS_AS(ReciprocalInstance(PreferenceMatrix(2, 2, {0, 1, 1, 0}), 1.5),
                  std::invalid_argument);
}

TEST_CASE("two sided utilities") {
  const PreferenceMatrix mu(2, 2, {0.0, 0.6, 0.6, 0.0});
  const ExposureWeights b({1.0, 0.0}, 1);
  const auto policy = RankingPolicy::deterministic(Assignment(2, 2, 1, {1, 0}));
  const auto u = two_sided_utilities(policy, ReciprocalInstance(mu), b);
  CHECK(u[0] == Approx(1.2));
  CHECK(u[1] == Approx(1.2));

  std::mt19937_64 rng(3);
  const PreferenceMatrix r = random_square(4, rng);
  const ExposureWeights b4 = dcg_exposure_weights(4, 2);
  const auto p = RankingPolicy::deterministic(random_assignment(4, 2, rng));
  const ReciprocalSides sides = reciprocal_sides(p, ReciprocalInstance(r), b4);
  const auto recv = two_sided_utilities(p, ReciprocalInstance(r, 0.0), b4);
  const auto prov = two_sided_utilities(p, ReciprocalInstance(r, 1.0), b4);
  const auto half = two_sided_utilities(p, ReciprocalInstance(r, 0.5), b4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(recv[i] == Approx(2 * sides.received[i]));
    CHECK(prov[i] == Approx(2 * sides.provided[i]));
    CHECK(half[i] == Approx(sides.received[i] + sides.provided[i]));
  }
}

TEST_CASE("provided side counts how much others value being shown") {
  // User 0 shows user 1, who values user 0 at 0.7: provided[1] = mu(1, 0).
  const PreferenceMatrix mu(3, 3, {0.0, 0.2, 0.3,  //
                                   0.7, 0.0, 0.1,  //
                                   0.4, 0.5, 0.0});
  const ExposureWeights b = dcg_exposure_weights(3, 1);
  const Assignment a(3, 3, 1, {1, 2, 0});
  const ReciprocalSides s = reciprocal_sides(a, ReciprocalInstance(mu), b);
  CHECK(s.received == std::vector<double>{0.2, 0.1, 0.4});
  CHECK(s.provided == std::vector<double>{0.3, 0.7, 0.5});
}

TEST_CASE("swap symmetry on two users") {
  const PreferenceMatrix mu(2, 2, {0.0, 0.35, 0.35, 0.0});
  const ExposureWeights b({1.0, 0.0}, 1);
  const Assignment a(2, 2, 1, {1, 0});
  const auto u = two_sided_utilities(RankingPolicy::deterministic(a),
                                     ReciprocalInstance(mu), b);
  CHECK(u[0] == u[1]);
}

TEST_CASE("tradeoff weights and objective") {
  const GgfWeights w = reciprocal_tradeoff_weights(2, 0.5);
  CHECK(w.values() == std::vector<double>{1.0, 0.75});
  CHECK(reciprocal_objective(w, std::vector<double>{1, 3}) == Approx(3.25));
  CHECK(reciprocal_tradeoff_weights(4, 1.0) == gini_weights(4));
  CHECK(reciprocal_objective(reciprocal_tradeoff_weights(3, 0.0),
                             std::vector<double>{1, 2, 4}) == Approx(7.0));
  CHECK_THROWS_AS(reciprocal_tradeoff_weights(3, 1.5), std::invalid_argument);
}

TEST_CASE("objective is concave in the policy") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  const ExposureWeights b = dcg_exposure_weights(5, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const ReciprocalInstance inst(random_square(5, rng));
    const Assignment a1 = random_assignment(5, 2, rng);
    const Assignment a2 = random_assignment(5, 2, rng);
    if (a1 == a2) continue;
    const double alpha = unit(rng);
    const GgfWeights w = reciprocal_tradeoff_weights(5, unit(rng));
    const auto f = [&](const RankingPolicy& p) {
      return reciprocal_objective(w, two_sided_utilities(p, inst, b));
    };
    const RankingPolicy mix({{alpha, a1}, {1 - alpha, a2}});
    CHECK(f(mix) >= alpha * f(RankingPolicy::deterministic(a1)) +
                        (1 - alpha) * f(RankingPolicy::deterministic(a2)) -
                        1e-9);
  }
}

TEST_CASE("direction never recommends a user to themself") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const ReciprocalInstance inst(random_square(n, rng), 0.3);
    std::vector<double> y(n);
    for (double& v : y) v = -std::abs(g(rng));
    const std::size_t k = 1 + trial % (n - 1);
    const Assignment a = reciprocal_update_direction(y, inst, k);
    for (std::size_t i = 0; i < n; ++i) {
      for (ItemIndex j : a.ranking(i)) CHECK(j != i);
    }
  }
}

TEST_CASE("direction matches enumeration") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t n = 2; n <= 3; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      const ReciprocalInstance inst(random_square(n, rng), (trial % 3) / 2.0);
      const ExposureWeights b = dcg_exposure_weights(n, 1);
      std::vector<double> y(n);
      for (double& v : y) v = g(rng);
      const Assignment a = reciprocal_update_direction(y, inst, 1);
      const DenseMatrix s =
          score_matrix(reciprocal_direction_scores(y, inst), inst.prefs());
      for (std::size_t i = 0; i < n; ++i) {
        const double got = s(i, a.item(i, 0));
        for (const auto& cand : oracle::ordered_subsets(n, 1, i)) {
          CHECK(s(i, cand[0]) <= got + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("constant duals reduce to sorting the blended preferences") {
  std::mt19937_64 rng(13);
  const double bal = 0.3;
  const ReciprocalInstance inst(random_square(5, rng), bal);
  const std::vector<double> y(5, -1.0);
  const Assignment a = reciprocal_update_direction(y, inst, 2);
  const auto& mu = inst.prefs();
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<double> blended(5);
    for (std::size_t j = 0; j < 5; ++j) {
      blended[j] = j == i ? -1.0 : (1 - bal) * mu(i, j) + bal * mu(j, i);
    }
    std::vector<std::size_t> idx = {0, 1, 2, 3, 4};
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t p, std::size_t q) { return blended[p] > blended[q]; });
    CHECK(a.item(i, 0) == idx[0]);
    CHECK(a.item(i, 1) == idx[1]);
  }
}

TEST_CASE("eq utility objective") {
  CHECK(eq_utility_objective(std::vector<double>{2, 2, 2}, 0.9) == Approx(6.0));
  CHECK(eq_utility_objective(std::vector<double>{0, 2}, 1.0) ==
        Approx(2.0 - 0.5 * std::sqrt(2.0)));
}

TEST_CASE("eq utility gradients match finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const double lambda = 0.2 + 0.2 * (trial % 4);
    const double bal = (trial % 5) / 4.0;
    std::vector<double> u(n);
    for (double& x : u) x = pos(rng);
    const double h = 1e-6;
    std::vector<double> fd(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto up = u, down = u;
      up[i] += h;
      down[i] -= h;
      fd[i] = (eq_utility_objective(up, lambda) -
               eq_utility_objective(down, lambda)) /
              (2 * h);
    }
    const auto grad = eq_utility_gradient(u, lambda);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(grad[i] - fd[i]) <= 1e-6 * std::max(1.0, std::abs(fd[i])));
    }
    const ReciprocalInstance inst(random_square(n, rng), bal);
    const DenseMatrix s = eq_utility_gradient_scores(u, lambda, inst);
    const auto& mu = inst.prefs();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double want =
            2 * (1 - bal) * fd[i] * mu(i, j) + 2 * bal * fd[j] * mu(j, i);
        CHECK(std::abs(s(i, j) - want) <= 1e-6 * std::max(1.0, std::abs(want)));
      }
    }
  }
}
