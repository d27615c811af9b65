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

#include "lorenz_rank/direction.hpp"

#include <stdexcept>

#include "lorenz_rank/parallel.hpp"

namespace lorenz_rank {

namespace {

void validate(const DirectionScores& scores, const PreferenceMatrix& prefs) {
  const std::size_t n = prefs.num_users();
  const std::size_t m = prefs.num_items();
  if (scores.user_scale.size() != n) {
    throw std::invalid_argument("direction scores: need one scale per user");
  }
  if (!scores.item_offset.empty() && scores.item_offset.size() != m) {
    throw std::invalid_argument("direction scores: need one offset per item");
  }
  if ((!scores.transpose_scale.empty() || scores.exclude_self) && n != m) {
    throw std::invalid_argument(
        "direction scores: reciprocal terms need a square preference matrix");
  }
  if (!scores.transpose_scale.empty() && scores.transpose_scale.size() != m) {
    throw std::invalid_argument(
        "direction scores: need one transpose scale per item");
  }
}

void fill_row(const DirectionScores& scores, const PreferenceMatrix& prefs,
              std::size_t i, std::span<double> row) {
  const auto mu = prefs.row(i);
  const double a = scores.user_scale[i];
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = a * mu[j];
  if (!scores.item_offset.empty()) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += scores.item_offset[j];
  }
  if (!scores.transpose_scale.empty()) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] += scores.transpose_scale[j] * prefs(j, i);
    }
  }
}

}  // namespace

DenseMatrix score_matrix(const DirectionScores& scores,
                         const PreferenceMatrix& prefs) {
  validate(scores, prefs);
  DenseMatrix out(prefs.num_users(), prefs.num_items());
  for (std::size_t i = 0; i < prefs.num_users(); ++i) {
    fill_row(scores, prefs, i, out.row(i));
  }
  return out;
}

Assignment best_response(const DirectionScores& scores,
                         const PreferenceMatrix& prefs, std::size_t top_k,
                         std::size_t threads) {
  validate(scores, prefs);
  const std::size_t n = prefs.num_users();
  const std::size_t m = prefs.num_items();
  const std::size_t candidates = scores.exclude_self ? m - 1 : m;
  if (top_k < 1 || top_k > candidates) {
    throw std::invalid_argument("best_response: K exceeds candidate items");
  }
  std::vector<ItemIndex> items(n * top_k);
  // Threads only pay off once a step has real work in it.
  constexpr std::size_t kMinParallelWork = std::size_t{1} << 15;
  if (n * m < kMinParallelWork) threads = 1;
  parallel_for_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> row(m);
    std::vector<ItemIndex> scratch;
    scratch.reserve(m);
    for (std::size_t i = begin; i < end; ++i) {
      fill_row(scores, prefs, i, row);
      std::optional<ItemIndex> excluded;
      if (scores.exclude_self) excluded = static_cast<ItemIndex>(i);
      top_k_indices(row, std::span<ItemIndex>(items.data() + i * top_k, top_k),
                    scratch, excluded);
    }
  });
  return Assignment(n, m, top_k, std::move(items));
}

}  // namespace lorenz_rank
