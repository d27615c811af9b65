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

// Generalized Gini welfare functions (GGFs), i.e. ordered weighted averages
// with non-increasing weights, and the generalized Lorenz curve machinery
// around them.
//
// A GGF with weights w_1 = 1 >= w_2 >= ... >= w_n >= 0 evaluates
//
//   g_w(x) = sum_i w_i * x_(i)        (x_(1) <= ... <= x_(n))
//
// It is concave and equal to sum_i w'_i X_i, where X is the generalized
// Lorenz curve of x and w'_i = w_i - w_{i+1} are its Lorenz-space weights.

#ifndef LORENZ_RANK_GINI_WELFARE_HPP_
#define LORENZ_RANK_GINI_WELFARE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lorenz_rank {

class GgfWeights {
 public:
  // Throws std::invalid_argument unless 1 = w_1 >= ... >= w_n >= 0 (1e-9
  // slack on each comparison).
  explicit GgfWeights(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& values() const { return weights_; }

  // w'_i = w_i - w_{i+1}, with w_{n+1} = 0.
  std::vector<double> lorenz_weights() const;

  double norm() const;

  friend bool operator==(const GgfWeights&, const GgfWeights&) = default;

 private:
  std::vector<double> weights_;
};

// Cumulative sums of the ascending-sorted input.
struct LorenzVector {
  std::vector<double> points;
};

// Ascending order of `x`, ties by index.
std::vector<std::size_t> ascending_order(std::span<const double> x);

double ggf_value(const GgfWeights& w, std::span<const double> x);

GgfWeights uniform_weights(std::size_t n);
// w_i = (n - i + 1) / n
GgfWeights gini_weights(std::size_t n);
// w_i proportional to sum_{l >= i} 1 / (l n), rescaled so that w_1 = 1.
GgfWeights bonferroni_weights(std::size_t n);
// Lorenz mass `omega` at floor(q n) and 1 - omega at n.
GgfWeights quantile_owa_weights(std::size_t n, double q, double omega);
// w_i = sum_{l >= i} w'_l
GgfWeights lorenz_to_owa(std::span<const double> lorenz_weights);

// Index of the quantile point: floor(q n) (1-based). Throws if it is 0 or q
// is outside (0, 1].
std::size_t quantile_index(std::size_t n, double q);

LorenzVector lorenz_curve(std::span<const double> x);

enum class Dominance {
  kEqual,
  kStrictlyDominates,
  kStrictlyDominated,
  kIncomparable,
};

std::string_view to_string(Dominance d);

inline constexpr double kDominanceTolerance = 1e-9;

// Compares the generalized Lorenz curves of x and y.
Dominance lorenz_dominance(std::span<const double> x, std::span<const double> y,
                           double tolerance = kDominanceTolerance);

// x weakly Lorenz-dominates y: X_i >= Y_i - tolerance for all i.
bool weakly_dominates(std::span<const double> x, std::span<const double> y,
                      double tolerance = kDominanceTolerance);

// s_i = w_{rank(x_i)}; a supergradient of the concave g_w at x.
std::vector<double> ggf_supergradient(const GgfWeights& w,
                                      std::span<const double> x);

// Standard discrete Gini index 1 + 1/n - 2 sum_i X_i / (n sum x). Throws
// unless sum x > 0.
double gini_index(std::span<const double> x);

// (1 - lambda) g_user(u) + lambda g_item(v)
double two_sided_objective(double lambda, const GgfWeights& user_weights,
                           const GgfWeights& item_weights,
                           std::span<const double> user_utilities,
                           std::span<const double> item_exposures);

// A weight family that can be materialized for any population size.
//
// Accepted strings: "gini", "bonferroni", "uniform",
// "quantile:q=<f>,omega=<f>", "tradeoff:lambda=<f>" (w_i = (1 - lambda) +
// lambda (n - i + 1) / n), "explicit:<w_1>,<w_2>,...".
class WeightScheme {
 public:
  enum class Kind { kGini, kBonferroni, kUniform, kQuantile, kTradeoff,
                    kExplicit };

  static WeightScheme parse(std::string_view text);
  static WeightScheme gini() { return WeightScheme(Kind::kGini); }
  static WeightScheme uniform() { return WeightScheme(Kind::kUniform); }
  static WeightScheme bonferroni() { return WeightScheme(Kind::kBonferroni); }
  static WeightScheme quantile(double q, double omega);
  static WeightScheme tradeoff(double lambda);
  static WeightScheme explicit_weights(std::vector<double> w);

  Kind kind() const { return kind_; }

  // Throws std::invalid_argument if the scheme cannot produce n weights.
  GgfWeights materialize(std::size_t n) const;

  // Canonical text form; parse(to_string()) reproduces the scheme.
  std::string to_string() const;

 private:
  explicit WeightScheme(Kind kind) : kind_(kind) {}

  Kind kind_;
  double q_ = 0.0;
  double omega_ = 0.0;
  double lambda_ = 0.0;
  std::vector<double> explicit_;
};

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_GINI_WELFARE_HPP_
