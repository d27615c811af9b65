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

// Gradient of the smoothed (Moreau envelope) negated GGF.
//
// h(z) = -g_w(z) is the support function of the permutahedron PH(w~) with
// w~ = -(w_n, ..., w_1). Its Moreau envelope
//
//   h^beta(z) = min_z' h(z') + |z - z'|^2 / (2 beta)
//
// has gradient proj_PH(w~)(z / beta). The projection reduces to isotonic
// regression after sorting z in decreasing order:
//
//   x = PAV_nondecreasing(w~ - z_sigma),   y = z + x permuted back.

#ifndef LORENZ_RANK_ISOTONIC_PROJECTION_HPP_
#define LORENZ_RANK_ISOTONIC_PROJECTION_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "lorenz_rank/gini_welfare.hpp"

namespace lorenz_rank {

// Half-open range [begin, end) of positions pooled into one block.
struct PooledBlock {
  std::size_t begin;
  std::size_t end;
  double value;
};

struct IsotonicFit {
  std::vector<double> values;
  std::vector<PooledBlock> blocks;
};

// Least-squares fit of a non-decreasing sequence (pool adjacent violators).
std::vector<double> pav_nondecreasing(std::span<const double> s);
IsotonicFit pav_nondecreasing_blocks(std::span<const double> s);

struct ProjectionResult {
  std::vector<double> y;
  // Original indices grouped by the PAV block they were pooled in.
  std::vector<std::vector<std::size_t>> active_blocks;
};

// w~ = -(w_n, ..., w_1), sorted in decreasing order.
std::vector<double> reversed_negated(const GgfWeights& w);

// Euclidean projection of z onto PH(w~).
ProjectionResult permutahedron_project(const GgfWeights& w,
                                       std::span<const double> z);

// Allocation-free projection for inner loops. Holds scratch buffers; not
// safe to share between threads.
class PermutahedronProjector {
 public:
  explicit PermutahedronProjector(const GgfWeights& w);

  std::size_t size() const { return target_.size(); }

  // y = proj_PH(w~)(scale * z). `y` may not alias `z`.
  void project(std::span<const double> z, double scale, std::span<double> y);

 private:
  std::vector<double> target_;  // w~
  std::vector<std::size_t> order_;
  std::vector<double> residual_;
  std::vector<double> block_sum_;
  std::vector<std::size_t> block_len_;
};

inline constexpr double kMinBeta = 1e-12;

struct MoreauParams {
  double beta;
};

// Returns beta clamped from below at kMinBeta. Throws unless beta > 0.
double checked_beta(double beta);

// Gradient of h^beta at z: proj_PH(w~)(z / beta).
std::vector<double> moreau_grad_dual(const GgfWeights& w,
                                     std::span<const double> z, double beta);

// h^beta(z) via the Moreau decomposition prox(z) = z - beta * y.
double moreau_envelope_value(const GgfWeights& w, std::span<const double> z,
                             double beta);

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_ISOTONIC_PROJECTION_HPP_
