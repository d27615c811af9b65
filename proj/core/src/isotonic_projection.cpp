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

#include "lorenz_rank/isotonic_projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lorenz_rank {

namespace {

// Block-merge stack. On return block_sum/block_len hold the pooled blocks in
// order; the caller expands them.
std::size_t pav_blocks(std::span<const double> s, std::vector<double>& block_sum,
                       std::vector<std::size_t>& block_len) {
  block_sum.resize(s.size());
  block_len.resize(s.size());
  std::size_t top = 0;
  for (double value : s) {
    block_sum[top] = value;
    block_len[top] = 1;
    ++top;
    while (top > 1 &&
           block_sum[top - 1] / static_cast<double>(block_len[top - 1]) <
               block_sum[top - 2] / static_cast<double>(block_len[top - 2])) {
      block_sum[top - 2] += block_sum[top - 1];
      block_len[top - 2] += block_len[top - 1];
      --top;
    }
  }
  return top;
}

}  // namespace

IsotonicFit pav_nondecreasing_blocks(std::span<const double> s) {
  std::vector<double> sums;
  std::vector<std::size_t> lens;
  const std::size_t count = pav_blocks(s, sums, lens);
  IsotonicFit fit;
  fit.values.resize(s.size());
  fit.blocks.reserve(count);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < count; ++b) {
    const double mean = sums[b] / static_cast<double>(lens[b]);
    std::fill_n(fit.values.begin() + pos, lens[b], mean);
    fit.blocks.push_back({pos, pos + lens[b], mean});
    pos += lens[b];
  }
  return fit;
}

std::vector<double> pav_nondecreasing(std::span<const double> s) {
  return pav_nondecreasing_blocks(s).values;
}

std::vector<double> reversed_negated(const GgfWeights& w) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = -w[w.size() - 1 - i];
  return out;
}

PermutahedronProjector::PermutahedronProjector(const GgfWeights& w)
    : target_(reversed_negated(w)),
      order_(w.size()),
      residual_(w.size()),
      block_sum_(w.size()),
      block_len_(w.size()) {}

void PermutahedronProjector::project(std::span<const double> z, double scale,
                                     std::span<double> y) {
  const std::size_t n = target_.size();
  if (z.size() != n || y.size() != n) {
    throw std::invalid_argument("PermutahedronProjector: length mismatch");
  }
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  // Decreasing by value, ties by index. scale > 0 preserves the order of z.
  std::stable_sort(order_.begin(), order_.end(),
                   [z](std::size_t a, std::size_t b) { return z[a] > z[b]; });
  for (std::size_t r = 0; r < n; ++r) {
    residual_[r] = target_[r] - scale * z[order_[r]];
  }
  const std::size_t count = pav_blocks(residual_, block_sum_, block_len_);
  std::size_t r = 0;
  for (std::size_t b = 0; b < count; ++b) {
    const double mean = block_sum_[b] / static_cast<double>(block_len_[b]);
    for (std::size_t e = 0; e < block_len_[b]; ++e, ++r) {
      const std::size_t i = order_[r];
      y[i] = scale * z[i] + mean;
    }
  }
}

ProjectionResult permutahedron_project(const GgfWeights& w,
                                       std::span<const double> z) {
  const std::size_t n = w.size();
  if (z.size() != n) {
    throw std::invalid_argument("permutahedron_project: length mismatch");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [z](std::size_t a, std::size_t b) { return z[a] > z[b]; });
  const std::vector<double> target = reversed_negated(w);
  std::vector<double> residual(n);
  for (std::size_t r = 0; r < n; ++r) residual[r] = target[r] - z[order[r]];
  const IsotonicFit fit = pav_nondecreasing_blocks(residual);

  ProjectionResult result;
  result.y.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    result.y[order[r]] = z[order[r]] + fit.values[r];
  }
  result.active_blocks.reserve(fit.blocks.size());
  for (const PooledBlock& block : fit.blocks) {
    std::vector<std::size_t> members(order.begin() + block.begin,
                                     order.begin() + block.end);
    std::sort(members.begin(), members.end());
    result.active_blocks.push_back(std::move(members));
  }
  return result;
}

double checked_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("smoothing parameter beta must be positive");
  }
  return std::max(beta, kMinBeta);
}

std::vector<double> moreau_grad_dual(const GgfWeights& w,
                                     std::span<const double> z, double beta) {
  beta = checked_beta(beta);
  if (z.size() != w.size()) {
    throw std::invalid_argument("moreau_grad_dual: length mismatch");
  }
  PermutahedronProjector projector(w);
  std::vector<double> y(z.size());
  projector.project(z, 1.0 / beta, y);
  return y;
}

double moreau_envelope_value(const GgfWeights& w, std::span<const double> z,
                             double beta) {
  beta = checked_beta(beta);
  const std::vector<double> y = moreau_grad_dual(w, z, beta);
  std::vector<double> prox(z.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    prox[i] = z[i] - beta * y[i];
    sq += y[i] * y[i];
  }
  // |z - prox|^2 / (2 beta) = beta |y|^2 / 2
  return -ggf_value(w, prox) + 0.5 * beta * sq;
}

}  // namespace lorenz_rank
