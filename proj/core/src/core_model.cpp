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

#include "lorenz_rank/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace lorenz_rank {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("DenseMatrix: expected " +
                                std::to_string(rows_ * cols_) +
                                " values, got " +
                                std::to_string(values_.size()));
  }
}

PreferenceMatrix::PreferenceMatrix(DenseMatrix values)
    : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw std::invalid_argument("PreferenceMatrix: needs n >= 1 and m >= 1");
  }
  for (std::size_t i = 0; i < values_.rows(); ++i) {
    for (std::size_t j = 0; j < values_.cols(); ++j) {
      const double x = values_(i, j);
      if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
        throw std::invalid_argument(
            "PreferenceMatrix: value at (" + std::to_string(i + 1) + ", " +
            std::to_string(j + 1) + ") is outside [0, 1]");
      }
    }
  }
}

PreferenceMatrix::PreferenceMatrix(std::size_t num_users, std::size_t num_items,
                                   std::vector<double> values)
    : PreferenceMatrix(DenseMatrix(num_users, num_items, std::move(values))) {}

std::vector<double> PreferenceMatrix::item_merits() const {
  std::vector<double> merits(num_items(), 0.0);
  for (std::size_t i = 0; i < num_users(); ++i) {
    const auto r = row(i);
    for (std::size_t j = 0; j < r.size(); ++j) merits[j] += r[j];
  }
  return merits;
}

ExposureWeights::ExposureWeights(std::vector<double> weights,
                                 std::size_t top_k)
    : weights_(std::move(weights)), top_k_(top_k) {
  if (top_k_ < 1 || top_k_ > weights_.size()) {
    throw std::invalid_argument("ExposureWeights: need 1 <= K <= m");
  }
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const double b = weights_[k];
    if (!std::isfinite(b)) {
      throw std::invalid_argument("ExposureWeights: non-finite weight");
    }
    if (k < top_k_) {
      if (b <= 0.0) {
        throw std::invalid_argument(
            "ExposureWeights: top-K weights must be positive");
      }
      if (k > 0 && b > weights_[k - 1]) {
        throw std::invalid_argument(
            "ExposureWeights: weights must be non-increasing");
      }
    } else if (b != 0.0) {
      throw std::invalid_argument(
          "ExposureWeights: weights beyond K must be zero");
    }
  }
}

double ExposureWeights::total() const {
  double s = 0.0;
  for (double b : top()) s += b;
  return s;
}

ExposureWeights dcg_exposure_weights(std::size_t num_slots,
                                     std::size_t top_k) {
  if (top_k < 1 || top_k > num_slots) {
    throw std::invalid_argument("dcg_exposure_weights: need 1 <= K <= m");
  }
  std::vector<double> b(num_slots, 0.0);
  for (std::size_t k = 0; k < top_k; ++k) {
    b[k] = 1.0 / std::log2(static_cast<double>(k) + 2.0);
  }
  return ExposureWeights(std::move(b), top_k);
}

Assignment::Assignment(std::size_t num_users, std::size_t num_items,
                       std::size_t top_k, std::vector<ItemIndex> items)
    : num_users_(num_users),
      num_items_(num_items),
      top_k_(top_k),
      items_(std::move(items)) {
  if (top_k_ < 1 || top_k_ > num_items_) {
    throw std::invalid_argument("Assignment: need 1 <= K <= m");
  }
  if (items_.size() != num_users_ * top_k_) {
    throw std::invalid_argument("Assignment: expected n*K item indices");
  }
  std::vector<std::size_t> last_seen(num_items_, num_users_);
  for (std::size_t i = 0; i < num_users_; ++i) {
    for (ItemIndex j : ranking(i)) {
      if (j >= num_items_) {
        throw std::invalid_argument("Assignment: item index out of range");
      }
      if (last_seen[j] == i) {
        throw std::invalid_argument("Assignment: user " +
                                    std::to_string(i + 1) +
                                    " lists an item twice");
      }
      last_seen[j] = i;
    }
  }
}

std::size_t AssignmentHash::operator()(const Assignment& a) const {
  // FNV-1a over the item indices.
  std::uint64_t h = 1469598103934665603ULL;
  for (ItemIndex j : a.items()) {
    h ^= j;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

RankingPolicy::RankingPolicy(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("RankingPolicy: no components");
  }
  const Assignment& first = components_.front().assignment;
  double total = 0.0;
  for (const Component& c : components_) {
    if (!(c.coefficient > 0.0) || c.coefficient > 1.0 + 1e-12) {
      throw std::invalid_argument(
          "RankingPolicy: coefficients must lie in (0, 1]");
    }
    if (c.assignment.num_users() != first.num_users() ||
        c.assignment.num_items() != first.num_items() ||
        c.assignment.top_k() != first.top_k()) {
      throw std::invalid_argument(
          "RankingPolicy: components have different shapes");
    }
    total += c.coefficient;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("RankingPolicy: coefficients sum to " +
                                std::to_string(total) + ", expected 1");
  }
  rebuild_index();
}

RankingPolicy RankingPolicy::deterministic(Assignment assignment) {
  std::vector<Component> c;
  c.push_back({1.0, std::move(assignment)});
  return RankingPolicy(std::move(c));
}

std::size_t RankingPolicy::num_users() const {
  return components_.front().assignment.num_users();
}
std::size_t RankingPolicy::num_items() const {
  return components_.front().assignment.num_items();
}
std::size_t RankingPolicy::top_k() const {
  return components_.front().assignment.top_k();
}

std::optional<std::size_t> RankingPolicy::find(const Assignment& a,
                                               std::size_t hash) const {
  auto [lo, hi] = index_.equal_range(hash);
  for (auto it = lo; it != hi; ++it) {
    if (components_[it->second].assignment == a) return it->second;
  }
  return std::nullopt;
}

void RankingPolicy::rebuild_index() {
  std::vector<Component> all = std::move(components_);
  components_.clear();
  index_.clear();
  for (Component& c : all) {
    const std::size_t h = AssignmentHash{}(c.assignment);
    if (auto pos = find(c.assignment, h)) {
      components_[*pos].coefficient += c.coefficient;
    } else {
      index_.emplace(h, components_.size());
      components_.push_back(std::move(c));
    }
  }
}

void RankingPolicy::mix(double step, const Assignment& direction) {
  if (!(step > 0.0) || step > 1.0) {
    throw std::invalid_argument("RankingPolicy::mix: step must be in (0, 1]");
  }
  if (direction.num_users() != num_users() ||
      direction.num_items() != num_items() || direction.top_k() != top_k()) {
    throw std::invalid_argument("RankingPolicy::mix: shape mismatch");
  }
  if (step == 1.0) {
    components_.clear();
    components_.push_back({1.0, direction});
    rebuild_index();
    return;
  }
  const double keep = 1.0 - step;
  for (Component& c : components_) c.coefficient *= keep;
  const std::size_t h = AssignmentHash{}(direction);
  if (auto pos = find(direction, h)) {
    components_[*pos].coefficient += step;
  } else {
    index_.emplace(h, components_.size());
    components_.push_back({step, direction});
  }
}

void top_k_indices(std::span<const double> scores, std::span<ItemIndex> out,
                   std::vector<ItemIndex>& scratch,
                   std::optional<ItemIndex> excluded) {
  scratch.clear();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (excluded && *excluded == j) continue;
    scratch.push_back(static_cast<ItemIndex>(j));
  }
  const std::size_t k = out.size();
  if (k > scratch.size()) {
    throw std::invalid_argument("top_k_indices: K exceeds candidate count");
  }
  // Strict total order: larger score first, then smaller index.
  const auto better = [scores](ItemIndex a, ItemIndex b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  if (k < scratch.size()) {
    std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end(),
                     better);
  }
  std::sort(scratch.begin(), scratch.begin() + k, better);
  std::copy_n(scratch.begin(), k, out.begin());
}

Assignment deterministic_policy(const DenseMatrix& scores, std::size_t top_k) {
  const std::size_t n = scores.rows();
  const std::size_t m = scores.cols();
  if (top_k < 1 || top_k > m) {
    throw std::invalid_argument("deterministic_policy: need 1 <= K <= m");
  }
  for (double s : scores.values()) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument("deterministic_policy: non-finite score");
    }
  }
  std::vector<ItemIndex> items(n * top_k);
  std::vector<ItemIndex> scratch;
  scratch.reserve(m);
  for (std::size_t i = 0; i < n; ++i) {
    top_k_indices(scores.row(i),
                  std::span<ItemIndex>(items.data() + i * top_k, top_k),
                  scratch);
  }
  return Assignment(n, m, top_k, std::move(items));
}

namespace {

void check_exposure(std::size_t num_items, std::size_t top_k,
                    const ExposureWeights& exposure) {
  if (exposure.num_slots() != num_items || exposure.top_k() != top_k) {
    throw std::invalid_argument(
        "exposure weights do not match the policy dimensions");
  }
}

}  // namespace

std::vector<double> user_utilities(const Assignment& assignment,
                                   const PreferenceMatrix& prefs,
                                   const ExposureWeights& exposure) {
  if (prefs.num_users() != assignment.num_users() ||
      prefs.num_items() != assignment.num_items()) {
    throw std::invalid_argument(
        "user_utilities: preference matrix does not match the policy");
  }
  check_exposure(assignment.num_items(), assignment.top_k(), exposure);
  std::vector<double> u(assignment.num_users(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto ranked = assignment.ranking(i);
    const auto mu = prefs.row(i);
    double s = 0.0;
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      s += mu[ranked[k]] * exposure[k];
    }
    u[i] = s;
  }
  return u;
}

std::vector<double> user_utilities(const RankingPolicy& policy,
                                   const PreferenceMatrix& prefs,
                                   const ExposureWeights& exposure) {
  std::vector<double> u(policy.num_users(), 0.0);
  for (const auto& c : policy.components()) {
    const auto part = user_utilities(c.assignment, prefs, exposure);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += c.coefficient * part[i];
  }
  return u;
}

std::vector<double> item_exposures(const Assignment& assignment,
                                   const ExposureWeights& exposure) {
  check_exposure(assignment.num_items(), assignment.top_k(), exposure);
  std::vector<double> v(assignment.num_items(), 0.0);
  for (std::size_t i = 0; i < assignment.num_users(); ++i) {
    const auto ranked = assignment.ranking(i);
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      v[ranked[k]] += exposure[k];
    }
  }
  return v;
}

std::vector<double> item_exposures(const RankingPolicy& policy,
                                   const ExposureWeights& exposure) {
  std::vector<double> v(policy.num_items(), 0.0);
  for (const auto& c : policy.components()) {
    const auto part = item_exposures(c.assignment, exposure);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += c.coefficient * part[j];
  }
  return v;
}

UtilityProfile utility_profile(const RankingPolicy& policy,
                               const PreferenceMatrix& prefs,
                               const ExposureWeights& exposure) {
  return {user_utilities(policy, prefs, exposure),
          item_exposures(policy, exposure)};
}

std::vector<double> merit_weighted_exposures(std::span<const double> exposures,
                                             const PreferenceMatrix& prefs) {
  if (exposures.size() != prefs.num_items()) {
    throw std::invalid_argument(
        "merit_weighted_exposures: exposure length must equal item count");
  }
  const std::vector<double> merit = prefs.item_merits();
  std::vector<double> out(exposures.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = exposures[j] / std::max(merit[j], kMeritFloor);
  }
  return out;
}

DenseMatrix reconstruct_dense(const RankingPolicy& policy, std::size_t user) {
  if (user >= policy.num_users()) {
    throw std::invalid_argument("reconstruct_dense: user out of range");
  }
  DenseMatrix dense(policy.num_items(), policy.top_k());
  for (const auto& c : policy.components()) {
    const auto ranked = c.assignment.ranking(user);
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      dense(ranked[k], k) += c.coefficient;
    }
  }
  return dense;
}

}  // namespace lorenz_rank
