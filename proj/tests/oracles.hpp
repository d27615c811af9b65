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

// Brute-force reference computations. Nothing here calls into the library's
// sorting, projection or ranking code.

#ifndef LORENZ_RANK_TESTS_ORACLES_HPP_
#define LORENZ_RANK_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Every permutation of `base` (with repeats if entries coincide).
inline std::vector<Vec> permutations_of(Vec base) {
  std::vector<std::size_t> idx(base.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Vec> out;
  do {
    Vec p(base.size());
    for (std::size_t i = 0; i < idx.size(); ++i) p[i] = base[idx[i]];
    out.push_back(std::move(p));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

// min over permutations s of sum_i w_s(i) x_i.
inline double owa_by_permutations(const Vec& w, const Vec& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : permutations_of(w)) best = std::min(best, dot(p, x));
  return best;
}

// -(w_n, ..., w_1)
inline Vec reversed_negated(const Vec& w) {
  Vec out(w.rbegin(), w.rend());
  for (double& x : out) x = -x;
  return out;
}

// max over vertices v of <z - y, v - y>; <= 0 iff y is the projection of z.
inline double variational_slack(const Vec& z, const Vec& y,
                                const std::vector<Vec>& vertices) {
  Vec r(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i] - y[i];
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vec& v : vertices) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += r[i] * (v[i] - y[i]);
    worst = std::max(worst, s);
  }
  return worst;
}

// Nondecreasing grid point (step `res` over [lo, hi]) nearest to s in
// squared error. Exhaustive in the first n - 1 coordinates; the last one is
// chosen by scanning as well, so the search is exact on the grid.
inline Vec isotonic_grid(const Vec& s, double lo, double hi, double res) {
  const int steps = static_cast<int>(std::lround((hi - lo) / res));
  const auto at = [&](int k) { return lo + res * k; };
  const std::size_t n = s.size();
  Vec best(n), cur(n);
  double best_err = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, int, double)> rec = [&](std::size_t i,
                                                          int from,
                                                          double err) {
    if (err >= best_err) return;
    if (i == n) {
      best_err = err;
      best = cur;
      return;
    }
    if (i + 1 == n) {
      // Separable last coordinate: nearest admissible grid point.
      int k = static_cast<int>(std::lround((s[i] - lo) / res));
      k = std::clamp(k, from, steps);
      for (int d : {k - 1, k, k + 1}) {
        if (d < from || d > steps) continue;
        const double e = err + (at(d) - s[i]) * (at(d) - s[i]);
        if (e < best_err) {
          best_err = e;
          cur[i] = at(d);
          best = cur;
        }
      }
      return;
    }
    for (int k = from; k <= steps; ++k) {
      cur[i] = at(k);
      rec(i + 1, k, err + (cur[i] - s[i]) * (cur[i] - s[i]));
    }
  };
  rec(0, 0, 0.0);
  return best;
}

// All ordered selections of k distinct indices from [0, m), skipping
// `excluded` when it is < m.
inline std::vector<std::vector<std::size_t>> ordered_subsets(
    std::size_t m, std::size_t k,
    std::size_t excluded = std::numeric_limits<std::size_t>::max()) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::vector<bool> used(m, false);
  std::function<void()> rec = [&] {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j] || j == excluded) continue;
      used[j] = true;
      cur.push_back(j);
      rec();
      cur.pop_back();
      used[j] = false;
    }
  };
  rec();
  return out;
}

// Ascending cumulative sums computed by insertion sort.
inline Vec lorenz_points(Vec x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    for (std::size_t j = i; j > 0 && x[j - 1] > x[j]; --j) {
      std::swap(x[j - 1], x[j]);
    }
  }
  for (std::size_t i = 1; i < x.size(); ++i) x[i] += x[i - 1];
  return x;
}

// Mean absolute difference form of the Gini coefficient.
inline double gini_pairwise(const Vec& x) {
  double diff = 0.0, total = 0.0;
  for (double a : x) {
    total += a;
    for (double b : x) diff += std::abs(a - b);
  }
  const double n = static_cast<double>(x.size());
  return diff / (2.0 * n * total);
}

// Admissible GGF weights: w_1 = 1, non-increasing, non-negative.
inline Vec random_weights(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec w(n);
  w[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) w[i] = w[i - 1] * u(rng);
  return w;
}

}  // namespace oracle

#endif  // LORENZ_RANK_TESTS_ORACLES_HPP_
