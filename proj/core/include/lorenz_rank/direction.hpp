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

// Linear-minimization step of Frank-Wolfe over ranking policies.
//
// Every objective handled here has a gradient of the form
//
//   dF / dP_ijk = s_ij * b_k,   s_ij = a_i mu_ij + c_j + d_j mu_ji,
//
// so the best deterministic response ranks, for every user, the K items with
// the largest s_ij in decreasing order (rearrangement inequality).

#ifndef LORENZ_RANK_DIRECTION_HPP_
#define LORENZ_RANK_DIRECTION_HPP_

#include <cstddef>
#include <vector>

#include "lorenz_rank/core_model.hpp"

namespace lorenz_rank {

struct DirectionScores {
  std::vector<double> user_scale;       // a_i, one per user
  std::vector<double> item_offset;      // c_j, one per item or empty
  std::vector<double> transpose_scale;  // d_j, one per item or empty
  bool exclude_self = false;            // never rank item i for user i
};

// Dense n x m matrix of s_ij.
DenseMatrix score_matrix(const DirectionScores& scores,
                         const PreferenceMatrix& prefs);

// Per user, top-K of s_i in decreasing order, ties by item index. The user
// loop runs on up to `threads` workers (0 = hardware concurrency); the result
// does not depend on the thread count.
Assignment best_response(const DirectionScores& scores,
                         const PreferenceMatrix& prefs, std::size_t top_k,
                         std::size_t threads = 1);

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_DIRECTION_HPP_
