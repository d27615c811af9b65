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

#ifndef LORENZ_RANK_CORE_MODEL_HPP_
#define LORENZ_RANK_CORE_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace lorenz_rank {

using ItemIndex = std::uint32_t;

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }

  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// User-by-item affinity scores in [0, 1].
class PreferenceMatrix {
 public:
  // Throws std::invalid_argument if a dimension is zero or an entry is not a
  // finite value in [0, 1]. The message names the offending cell (1-based).
  explicit PreferenceMatrix(DenseMatrix values);
  PreferenceMatrix(std::size_t num_users, std::size_t num_items,
                   std::vector<double> values);

  std::size_t num_users() const { return values_.rows(); }
  std::size_t num_items() const { return values_.cols(); }

  double operator()(std::size_t user, std::size_t item) const {
    return values_(user, item);
  }
  std::span<const double> row(std::size_t user) const {
    return values_.row(user);
  }
  const DenseMatrix& matrix() const { return values_; }

  // Column sums, used as item merit.
  std::vector<double> item_merits() const;

  friend bool operator==(const PreferenceMatrix&,
                         const PreferenceMatrix&) = default;

 private:
  DenseMatrix values_;
};

// Position-based examination model: b_1 >= ... >= b_K > 0, zero below K.
class ExposureWeights {
 public:
  // `weights` has one entry per slot (m entries). Throws if the first K are
  // not positive and non-increasing, or the tail is not exactly zero.
  ExposureWeights(std::vector<double> weights, std::size_t top_k);

  std::size_t num_slots() const { return weights_.size(); }
  std::size_t top_k() const { return top_k_; }
  double operator[](std::size_t slot) const { return weights_[slot]; }

  // The K non-zero weights.
  std::span<const double> top() const { return {weights_.data(), top_k_}; }
  const std::vector<double>& all() const { return weights_; }

  // b_1 + ... + b_K
  double total() const;

 private:
  std::vector<double> weights_;
  std::size_t top_k_;
};

// b_k = 1 / log2(1 + k) for k <= K.
ExposureWeights dcg_exposure_weights(std::size_t num_slots, std::size_t top_k);

// One deterministic top-K ranking per user. Slot k of user i holds
// `item(i, k)`; item indices are 0-based.
class Assignment {
 public:
  Assignment(std::size_t num_users, std::size_t num_items, std::size_t top_k,
             std::vector<ItemIndex> items);

  std::size_t num_users() const { return num_users_; }
  std::size_t num_items() const { return num_items_; }
  std::size_t top_k() const { return top_k_; }

  ItemIndex item(std::size_t user, std::size_t slot) const {
    return items_[user * top_k_ + slot];
  }
  std::span<const ItemIndex> ranking(std::size_t user) const {
    return {items_.data() + user * top_k_, top_k_};
  }
  const std::vector<ItemIndex>& items() const { return items_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::size_t num_users_;
  std::size_t num_items_;
  std::size_t top_k_;
  std::vector<ItemIndex> items_;
};

struct AssignmentHash {
  std::size_t operator()(const Assignment& a) const;
};

// Sparse Birkhoff-von Neumann form: a convex combination of deterministic
// assignments.
class RankingPolicy {
 public:
  struct Component {
    double coefficient;
    Assignment assignment;
  };

  // Validates the coefficient simplex (positive, summing to 1 within 1e-12)
  // and that all assignments share dimensions.
  explicit RankingPolicy(std::vector<Component> components);

  static RankingPolicy deterministic(Assignment assignment);

  std::size_t num_users() const;
  std::size_t num_items() const;
  std::size_t top_k() const;

  const std::vector<Component>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  // P <- (1 - step) P + step Q, with step in (0, 1]. Components whose
  // assignment equals Q are merged rather than duplicated.
  void mix(double step, const Assignment& direction);

 private:
  void rebuild_index();
  std::optional<std::size_t> find(const Assignment& a, std::size_t hash) const;

  std::vector<Component> components_;
  // Assignment hash -> component position.
  std::unordered_multimap<std::size_t, std::size_t> index_;
};

// u_i and v_j under the linear position-based model.
struct UtilityProfile {
  std::vector<double> user_utilities;
  std::vector<double> item_exposures;
};

// For each user, the K highest-scoring items in non-increasing score order.
// Ties go to the smaller item index.
Assignment deterministic_policy(const DenseMatrix& scores, std::size_t top_k);

// Writes the K best entries of `scores` into `out` (ties by index). When
// `excluded` is set, that index is never selected.
void top_k_indices(std::span<const double> scores, std::span<ItemIndex> out,
                   std::vector<ItemIndex>& scratch,
                   std::optional<ItemIndex> excluded = std::nullopt);

std::vector<double> user_utilities(const Assignment& assignment,
                                   const PreferenceMatrix& prefs,
                                   const ExposureWeights& exposure);
std::vector<double> user_utilities(const RankingPolicy& policy,
                                   const PreferenceMatrix& prefs,
                                   const ExposureWeights& exposure);

std::vector<double> item_exposures(const Assignment& assignment,
                                   const ExposureWeights& exposure);
std::vector<double> item_exposures(const RankingPolicy& policy,
                                   const ExposureWeights& exposure);

UtilityProfile utility_profile(const RankingPolicy& policy,
                               const PreferenceMatrix& prefs,
                               const ExposureWeights& exposure);

inline constexpr double kMeritFloor = 1e-9;

// v_j / max(q_j, 1e-9) with q_j the column sum of the preferences.
std::vector<double> merit_weighted_exposures(std::span<const double> exposures,
                                             const PreferenceMatrix& prefs);

// m x K matrix: entry (j, k) is the probability that `user` sees item j in
// slot k.
DenseMatrix reconstruct_dense(const RankingPolicy& policy, std::size_t user);

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_CORE_MODEL_HPP_
