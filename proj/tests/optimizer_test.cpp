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
#include "lorenz_rank/eval_harness.hpp"
#include "lorenz_rank/isotonic_projection.hpp"
#include "lorenz_rank/optimizer.hpp"
#include "oracles.hpp"

using namespace lorenz_rank;
using doctest::Approx;

namespace {

PreferenceMatrix random_prefs(std::size_t n, std::size_t m,
                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> mu(n * m);
  for (double& x : mu) x = u(rng);
  return PreferenceMatrix(n, m, std::move(mu));
}

// Two users, two items, one slot; optimum 1.5 at equal exposure.
PreferenceMatrix tiny_prefs() { return PreferenceMatrix(2, 2, {0.9, 0.3, 0.6, 0.4}); }

OptimizerConfig tiny_config(int iterations) {
  OptimizerConfig c;
  c.iterations = iterations;
  c.lambda = 1.0;
  c.user_weights = WeightScheme::uniform();
  c.item_weights = WeightScheme::gini();
  c.trace_every = 1;
  c.record_wall_time = false;
  return c;
}

double slot_value(const DenseMatrix& s, std::size_t user,
                  const std::vector<std::size_t>& items,
                  const ExposureWeights& b) {
  double v = 0.0;
  for (std::size_t k = 0; k < items.size(); ++k) v += s(user, items[k]) * b[k];
  return v;
}

}  // namespace

TEST_CASE("beta schedule and defaults") {
  CHECK(beta_schedule(100, 4) == 50);
  CHECK(beta_schedule(3.5, 1) == 3.5);
  CHECK(beta_schedule(1000, 100) == 100);
  CHECK_THROWS_AS(beta_schedule(1, 0), std::invalid_argument);

  const ExposureWeights b = dcg_exposure_weights(1, 1);
  const GgfWeights one({1.0});
  CHECK(default_beta0(1, 1, b, 0.0, one, one) == Approx(2 * std::sqrt(2.0)));
  CHECK(policy_diameter_bound(4, 3) == Approx(2 * policy_diameter_bound(1, 3)));
  CHECK(combined_weight_norm(0.5, one, one) == Approx(std::sqrt(0.5)));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial, m = 2 + trial;
    const ExposureWeights e = dcg_exposure_weights(m, 1 + trial % 2);
    const double lambda = (trial % 5) / 4.0;
    CHECK(default_beta0(n, m, e, lambda, gini_weights(n), gini_weights(m)) > 0);
  }
}

TEST_CASE("config validation names the field") {
  OptimizerConfig c;
  c.iterations = 0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("iterations"),
                       std::invalid_argument);
  c = OptimizerConfig{};
  c.lambda = 1.5;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("lambda"),
                       std::invalid_argument);
  c = OptimizerConfig{};
  c.beta0 = -1.0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("beta0"),
                       std::invalid_argument);
  CHECK_NOTHROW(OptimizerConfig{}.validate());
}

TEST_CASE("names round trip") {
  for (auto k : {ObjectiveKind::kTwoSidedGgf, ObjectiveKind::kWelf,
                 ObjectiveKind::kEqExposure, ObjectiveKind::kReciprocalGgf,
                 ObjectiveKind::kEqUtility}) {
    CHECK(parse_objective_kind(to_string(k)) == k);
  }
  CHECK(parse_variant("subgradient") == Variant::kSubgradient);
  CHECK_THROWS_AS(parse_objective_kind("nope"), std::invalid_argument);
  CHECK(is_reciprocal(ObjectiveKind::kEqUtility));
  CHECK_FALSE(is_reciprocal(ObjectiveKind::kEqExposure));
}

TEST_CASE("update direction examples") {
  SUBCASE("single user reduces to the utilitarian argmax") {
    const PreferenceMatrix prefs(1, 2, {0.8, 0.2});
    const Assignment a = update_direction(std::vector<double>{-1.0},
                                          std::vector<double>{0.0, 0.0}, prefs,
                                          0.0, 1);
    CHECK(a.item(0, 0) == 0);
  }
  SUBCASE("exposure flows to the starved item") {
    const GgfWeights w({1.0, 0.5});
    const auto y2 = moreau_grad_dual(w, std::vector<double>{2.0, 0.0}, 1.0);
    CHECK(y2[0] == Approx(-0.5));
    CHECK(y2[1] == Approx(-1.0));
    const Assignment a = update_direction(std::vector<double>{0.0, 0.0}, y2,
                                          tiny_prefs(), 1.0, 1);
    CHECK(a.item(0, 0) == 1);
    CHECK(a.item(1, 0) == 1);
  }
}

TEST_CASE("update direction beats every enumerated ranking") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      for (std::size_t k = 1; k <= std::min<std::size_t>(2, m); ++k) {
        for (int trial = 0; trial < 10; ++trial) {
          const PreferenceMatrix prefs = random_prefs(n, m, rng);
          const ExposureWeights b = dcg_exposure_weights(m, k);
          std::vector<double> y1(n), y2(m);
          for (double& v : y1) v = g(rng);
          for (double& v : y2) v = g(rng);
          const double lambda = (trial % 3) / 2.0;
          const Assignment a = update_direction(y1, y2, prefs, lambda, k);
          const DenseMatrix s =
              score_matrix(ggf_direction_scores(y1, y2, lambda), prefs);
          for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> chosen(a.ranking(i).begin(),
                                            a.ranking(i).end());
            const double got = slot_value(s, i, chosen, b);
            for (const auto& cand : oracle::ordered_subsets(m, k)) {
              CHECK(slot_value(s, i, cand, b) <= got + 1e-12);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("parallel best response is identical") {
  std::mt19937_64 rng(9);
  const PreferenceMatrix prefs = random_prefs(300, 120, rng);
  std::vector<double> y1(300), y2(120);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double& v : y1) v = g(rng);
  for (double& v : y2) v = g(rng);
  const Assignment one = update_direction(y1, y2, prefs, 0.3, 5, 1);
  const Assignment many = update_direction(y1, y2, prefs, 0.3, 5, 4);
  CHECK(one == many);
}

TEST_CASE("welfare function") {
  CHECK(welfare_phi(1.0, -2.0) == -1.0);
  CHECK(welfare_phi_derivative(1.0, -2.0) == 2.0);
  CHECK(welfare_phi(4.0, 0.5) == Approx(2.0));
  CHECK(welfare_phi(std::exp(1.0), 0.0) == Approx(1.0));
  CHECK(welfare_phi(0.0, 0.0) == Approx(std::log(kPositiveFloor)));
  CHECK_THROWS_AS(welfare_phi(0.0, 0.0, false), std::domain_error);
  CHECK_THROWS_AS(welfare_phi(-1.0, -2.0, false), std::domain_error);
  const std::vector<double> u = {0.5, 2.0, 1.0};
  CHECK(welf_objective(u, std::vector<double>{1, 1}, 1.0, 0.0, 0.0) ==
        Approx(3.5));
}

TEST_CASE("eq exposure objective") {
  const std::vector<double> u = {1.0, 2.0};
  CHECK(eq_exposure_objective(u, std::vector<double>{1, 1, 1}, 0.7) ==
        Approx(3.0));
  const double lambda = 0.8;
  CHECK(eq_exposure_objective(std::vector<double>{0.0},
                              std::vector<double>{1.0, 0.0}, lambda) ==
        Approx(-0.35355339 * lambda));
}

// s_ij = dF/du_i mu_ij + dF/dv_j, checked by central differences.
TEST_CASE("gradient scores match finite differences") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pos(0.3, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 3, m = 3 + trial % 2;
    const PreferenceMatrix prefs = random_prefs(n, m, rng);
    std::vector<double> u(n), v(m);
    for (double& x : u) x = pos(rng);
    for (double& x : v) x = pos(rng);
    const double lambda = 0.25 + 0.5 * (trial % 2);
    const double alpha_u = trial % 3 == 0 ? -2.0 : (trial % 3 == 1 ? 0.0 : 0.5);
    const double alpha_i = 0.0;

    const auto check = [&](const auto& f, const DenseMatrix& s) {
      const double h = 1e-6;
      std::vector<double> du(n), dv(m);
      for (std::size_t i = 0; i < n; ++i) {
        auto up = u, down = u;
        up[i] += h;
        down[i] -= h;
        du[i] = (f(up, v) - f(down, v)) / (2 * h);
      }
      for (std::size_t j = 0; j < m; ++j) {
        auto up = v, down = v;
        up[j] += h;
        down[j] -= h;
        dv[j] = (f(u, up) - f(u, down)) / (2 * h);
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          const double want = du[i] * prefs(i, j) + dv[j];
          CHECK(std::abs(s(i, j) - want) <= 1e-6 * std::max(1.0, std::abs(want)));
        }
      }
    };

    check([&](const std::vector<double>& a, const std::vector<double>& b) {
      return welf_objective(a, b, alpha_u, alpha_i, lambda);
    }, welf_gradient_scores(u, v, prefs, alpha_u, alpha_i, lambda));
    check([&](const std::vector<double>& a, const std::vector<double>& b) {
      return eq_exposure_objective(a, b, lambda);
    }, eq_exposure_gradient_scores(v, prefs, lambda));
  }
}

TEST_CASE("first step mixes one third and two thirds") {
  const FwResult r = fw_smoothing(tiny_config(1), tiny_prefs(),
                                  dcg_exposure_weights(2, 1));
  REQUIRE(r.policy.size() == 2);
  CHECK(r.policy.components()[0].coefficient == Approx(1.0 / 3.0));
  CHECK(r.policy.components()[1].coefficient == Approx(2.0 / 3.0));
}

TEST_CASE("tiny instance converges within the bound") {
  const ExposureWeights b = dcg_exposure_weights(2, 1);
  const OptimizerConfig c = tiny_config(2000);
  const FwResult r = fw_smoothing(c, tiny_prefs(), b);
  CHECK(r.objective >= 1.5 - 0.01);
  CHECK(r.objective <= 1.5 + 1e-9);
  CHECK(r.objective == Approx(evaluate_objective(c, r.policy, tiny_prefs(), b)));
  for (const TraceRecord& rec : r.trace.records) {
    const double bound = smoothing_error_bound(2, 2, b, 1.0, uniform_weights(2),
                                               gini_weights(2), rec.t);
    CHECK(1.5 - rec.objective <= bound + 1e-12);
  }
  const FwResult sub = fw_subgradient(c, tiny_prefs(), b);
  CHECK(sub.objective <= r.objective + 1e-8);
}

TEST_CASE("policies stay on the simplex at every horizon") {
  std::mt19937_64 rng(19);
  const PreferenceMatrix prefs = random_prefs(6, 5, rng);
  const ExposureWeights b = dcg_exposure_weights(5, 2);
  for (int t = 1; t <= 25; ++t) {
    OptimizerConfig c;
    c.iterations = t;
    c.record_wall_time = false;
    const FwResult r = frank_wolfe(c, prefs, b);
    double total = 0.0;
    for (const auto& comp : r.policy.components()) {
      CHECK(comp.coefficient > 0.0);
      CHECK(comp.coefficient <= 1.0);
      total += comp.coefficient;
    }
    CHECK(total == Approx(1.0).epsilon(1e-12));
    CHECK(r.policy.size() <= static_cast<std::size_t>(t) + 1);
  }
}

TEST_CASE("trace bookkeeping") {
  std::mt19937_64 rng(23);
  const PreferenceMatrix prefs = random_prefs(10, 8, rng);
  OptimizerConfig c;
  c.iterations = 95;
  c.trace_every = 10;
  c.record_wall_time = false;
  const FwResult r = frank_wolfe(c, prefs, dcg_exposure_weights(8, 3));
  const auto& recs = r.trace.records;
  REQUIRE(recs.size() == 11);
  CHECK(recs.front().t == 1);
  CHECK(recs.back().t == 95);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    CHECK(recs[i].t > recs[i - 1].t);
    CHECK(recs[i].beta < recs[i - 1].beta);
    CHECK(recs[i].wall_ms == 0.0);
  }
  const auto best = r.trace.best_so_far();
  for (std::size_t i = 1; i < best.size(); ++i) CHECK(best[i] >= best[i - 1]);
  CHECK(best.back() >= recs.back().objective);
}

TEST_CASE("single user: smoothing and subgradient coincide") {
  const PreferenceMatrix prefs(1, 4, {0.2, 0.7, 0.1, 0.5});
  const ExposureWeights b = dcg_exposure_weights(4, 2);
  OptimizerConfig c;
  c.iterations = 50;
  c.lambda = 0.0;
  c.trace_every = 1;
  c.record_wall_time = false;
  const FwResult s = fw_smoothing(c, prefs, b);
  const FwResult g = fw_subgradient(c, prefs, b);
  REQUIRE(s.trace.records.size() == g.trace.records.size());
  for (std::size_t i = 0; i < s.trace.records.size(); ++i) {
    CHECK(s.trace.records[i].objective == g.trace.records[i].objective);
  }
}

TEST_CASE("baselines run through the same loop") {
  std::mt19937_64 rng(29);
  const PreferenceMatrix prefs = random_prefs(8, 6, rng);
  const ExposureWeights b = dcg_exposure_weights(6, 2);
  OptimizerConfig c;
  c.iterations = 200;
  c.record_wall_time = false;

  c.objective = ObjectiveKind::kWelf;
  c.lambda = 0.0;
  c.alpha_user = 1.0;
  const FwResult welf = frank_wolfe(c, prefs, b);
  // alpha = 1, lambda = 0 is the utilitarian objective; the start is optimal.
  double best = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    std::vector<double> row(prefs.row(i).begin(), prefs.row(i).end());
    std::sort(row.rbegin(), row.rend());
    best += row[0] * b[0] + row[1] * b[1];
  }
  CHECK(welf.objective == Approx(best));

  c.objective = ObjectiveKind::kEqExposure;
  c.lambda = 1.0;
  const FwResult eq = frank_wolfe(c, prefs, b);
  const double start = eq_exposure_objective(
      user_utilities(deterministic_policy(prefs.matrix(), 2), prefs, b),
      item_exposures(deterministic_policy(prefs.matrix(), 2), b), 1.0);
  CHECK(eq.objective >= start - 1e-9);
}

TEST_CASE("thread count does not change the result") {
  const PreferenceMatrix prefs = synthetic_prefs(200, 200, 0.5, 4);
  const ExposureWeights b = dcg_exposure_weights(200, 3);
  OptimizerConfig c;
  c.iterations = 30;
  c.trace_every = 1;
  c.record_wall_time = false;
  c.threads = 1;
  const FwResult one = frank_wolfe(c, prefs, b);
  c.threads = 4;
  const FwResult four = frank_wolfe(c, prefs, b);
  REQUIRE(one.trace.records.size() == four.trace.records.size());
  for (std::size_t i = 0; i < one.trace.records.size(); ++i) {
    CHECK(one.trace.records[i].objective == four.trace.records[i].objective);
  }
  CHECK(one.profile.user_utilities == four.profile.user_utilities);
}
