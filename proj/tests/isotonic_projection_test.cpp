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
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "lorenz_rank/gini_welfare.hpp"
#include "lorenz_rank/isotonic_projection.hpp"
#include "oracles.hpp"

using namespace lorenz_rank;
using doctest::Approx;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng,
                               double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

double norm(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Majorization test for membership in the permutahedron of `t`.
bool in_permutahedron(std::vector<double> y, std::vector<double> t) {
  std::sort(y.rbegin(), y.rend());
  std::sort(t.rbegin(), t.rend());
  double sy = 0.0, st = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sy += y[i];
    st += t[i];
    if (sy > st + 1e-9) return false;
  }
  return std::abs(sy - st) <= 1e-9;
}

}  // namespace

TEST_CASE("pav examples") {
  CHECK(pav_nondecreasing(std::vector<double>{1, 2, 3}) ==
        std::vector<double>{1, 2, 3});
  const auto a = pav_nondecreasing(std::vector<double>{3, 1, 2});
  for (double x : a) CHECK(x == Approx(2.0));
  const auto b = pav_nondecreasing(std::vector<double>{2, 0});
  CHECK(b == std::vector<double>{1, 1});
  CHECK(pav_nondecreasing(std::vector<double>{}).empty());
}

TEST_CASE("pav matches the grid minimizer") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto s = random_vec(n, rng, -1.0, 1.0);
    const auto fit = pav_nondecreasing(s);
    const auto grid = oracle::isotonic_grid(s, -1.0, 1.0, 1e-2);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(fit[i] - grid[i]) <= 1e-2);
  }
}

TEST_CASE("pav blocks are means and satisfy the optimality conditions") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 60;
    const auto s = random_vec(n, rng, -5.0, 5.0);
    const IsotonicFit fit = pav_nondecreasing_blocks(s);
    REQUIRE(fit.values.size() == n);
    for (std::size_t i = 1; i < n; ++i) CHECK(fit.values[i - 1] <= fit.values[i]);
    std::size_t covered = 0;
    for (const PooledBlock& blk : fit.blocks) {
      CHECK(blk.begin == covered);
      covered = blk.end;
      double sum = 0.0;
      for (std::size_t i = blk.begin; i < blk.end; ++i) sum += s[i];
      const double mean = sum / static_cast<double>(blk.end - blk.begin);
      CHECK(blk.value == Approx(mean).epsilon(1e-12));
      double residual = 0.0;
      for (std::size_t i = blk.begin; i < blk.end; ++i) {
        residual += s[i] - fit.values[i];
        if (i + 1 < blk.end) CHECK(residual >= -1e-9);
      }
      CHECK(std::abs(residual) <= 1e-9);
    }
    CHECK(covered == n);
  }
}

TEST_CASE("projection examples") {
  const GgfWeights w({1.0, 0.5});
  CHECK(reversed_negated(w) == std::vector<double>{-0.5, -1.0});
  const auto at = [&](std::vector<double> z) {
    return permutahedron_project(w, z).y;
  };
  auto y = at({0, 0});
  CHECK(y[0] == Approx(-0.75));
  CHECK(y[1] == Approx(-0.75));
  y = at({10, 0});
  CHECK(y[0] == Approx(-0.5));
  CHECK(y[1] == Approx(-1.0));
  y = at({0, 10});
  CHECK(y[0] == Approx(-1.0));
  CHECK(y[1] == Approx(-0.5));

  const ProjectionResult pooled = permutahedron_project(w, std::vector<double>{0, 0});
  REQUIRE(pooled.active_blocks.size() == 1);
  CHECK(pooled.active_blocks[0].size() == 2);
}

TEST_CASE("projection satisfies the variational inequality") {
  std::mt19937_64 rng(47);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 15; ++trial) {
      const auto wv = oracle::random_weights(n, rng);
      const GgfWeights w(wv);
      const auto z = random_vec(n, rng, -3.0, 3.0);
      const auto y = permutahedron_project(w, z).y;
      const auto vertices = oracle::permutations_of(oracle::reversed_negated(wv));
      CHECK(oracle::variational_slack(z, y, vertices) <= 1e-9);
      CHECK(in_permutahedron(y, oracle::reversed_negated(wv)));
    }
  }
}

TEST_CASE("projection is idempotent and lands in the permutahedron") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 40;
    const GgfWeights w(oracle::random_weights(n, rng));
    const auto z = random_vec(n, rng, -10.0, 10.0);
    const auto y = permutahedron_project(w, z).y;
    CHECK(in_permutahedron(y, reversed_negated(w)));
    const auto again = permutahedron_project(w, y).y;
    CHECK(norm(again, y) <= 1e-9);
  }
}

TEST_CASE("scratch projector agrees with the allocating version") {
  std::mt19937_64 rng(59);
  const GgfWeights w = gini_weights(25);
  PermutahedronProjector proj(w);
  CHECK(proj.size() == 25);
  std::vector<double> y(25);
  for (int trial = 0; trial < 50; ++trial) {
    const auto z = random_vec(25, rng, -4.0, 4.0);
    proj.project(z, 0.5, y);
    std::vector<double> half(z);
    for (double& v : half) v *= 0.5;
    const auto want = permutahedron_project(w, half).y;
    CHECK(norm(y, want) <= 1e-12);
  }
}

TEST_CASE("moreau gradient") {
  const GgfWeights one({1.0});
  CHECK(moreau_grad_dual(one, std::vector<double>{3.7}, 0.2) ==
        std::vector<double>{-1.0});
  const auto y = moreau_grad_dual(GgfWeights({1, 0.5}),
                                  std::vector<double>{0, 0}, 7.0);
  CHECK(y[0] == Approx(-0.75));
  CHECK(y[1] == Approx(-0.75));
  CHECK_THROWS_AS(moreau_grad_dual(one, std::vector<double>{0}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(moreau_envelope_value(one, std::vector<double>{0}, -1.0),
                  std::invalid_argument);
  CHECK(checked_beta(1e-20) == kMinBeta);
}

TEST_CASE("moreau envelope value") {
  const GgfWeights one({1.0});
  CHECK(moreau_envelope_value(one, std::vector<double>{2.0}, 0.5) ==
        Approx(-2.0 - 0.25));

  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> beta_dist(0.01, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const GgfWeights w(oracle::random_weights(n, rng));
    const auto z = random_vec(n, rng, -3.0, 3.0);
    const double beta = beta_dist(rng);
    const double env = moreau_envelope_value(w, z, beta);
    const double h = -ggf_value(w, z);
    const double gap = beta / 2.0 * w.norm() * w.norm();
    CHECK(env <= h + 1e-9);
    CHECK(h <= env + gap + 1e-9);
  }
}

TEST_CASE("moreau gradient matches finite differences") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const GgfWeights w(oracle::random_weights(n, rng));
    const auto z = random_vec(n, rng, -3.0, 3.0);
    const double beta = 0.5 + trial % 3;
    const auto y = moreau_grad_dual(w, z, beta);
    const double h = 1e-6;
    for (std::size_t i = 0; i < n; ++i) {
      auto up = z, down = z;
      up[i] += h;
      down[i] -= h;
      const double fd = (moreau_envelope_value(w, up, beta) -
                         moreau_envelope_value(w, down, beta)) /
                        (2 * h);
      CHECK(std::abs(fd - y[i]) <= 1e-5 * std::max(1.0, std::abs(y[i])));
    }
  }
}

TEST_CASE("moreau gradient is 1/beta Lipschitz") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const GgfWeights w(oracle::random_weights(n, rng));
    const auto z1 = random_vec(n, rng, -3.0, 3.0);
    const auto z2 = random_vec(n, rng, -3.0, 3.0);
    const double beta = 0.1 + (trial % 5);
    const auto y1 = moreau_grad_dual(w, z1, beta);
    const auto y2 = moreau_grad_dual(w, z2, beta);
    CHECK(norm(y1, y2) <= norm(z1, z2) / beta + 1e-9);
  }
}
