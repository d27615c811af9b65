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

#include "lorenz_rank/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lorenz_rank/isotonic_projection.hpp"
#include "lorenz_rank/reciprocal.hpp"

namespace lorenz_rank {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kTwoSidedGgf:
      return "two-sided-ggf";
    case ObjectiveKind::kWelf:
      return "welf";
    case ObjectiveKind::kEqExposure:
      return "eq-exposure";
    case ObjectiveKind::kReciprocalGgf:
      return "reciprocal-ggf";
    case ObjectiveKind::kEqUtility:
      return "eq-utility";
  }
  return "unknown";
}

std::string_view to_string(Variant variant) {
  return variant == Variant::kSmoothing ? "smoothing" : "subgradient";
}

ObjectiveKind parse_objective_kind(std::string_view text) {
  for (ObjectiveKind kind :
       {ObjectiveKind::kTwoSidedGgf, ObjectiveKind::kWelf,
        ObjectiveKind::kEqExposure, ObjectiveKind::kReciprocalGgf,
        ObjectiveKind::kEqUtility}) {
    if (text == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown objective kind '" + std::string(text) +
                              "'");
}

Variant parse_variant(std::string_view text) {
  if (text == "smoothing") return Variant::kSmoothing;
  if (text == "subgradient") return Variant::kSubgradient;
  throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
}

bool is_reciprocal(ObjectiveKind kind) {
  return kind == ObjectiveKind::kReciprocalGgf ||
         kind == ObjectiveKind::kEqUtility;
}

void OptimizerConfig::validate() const {
  if (iterations < 1) {
    throw std::invalid_argument("iterations: must be >= 1");
  }
  if (beta0 && !(*beta0 > 0.0 && std::isfinite(*beta0))) {
    throw std::invalid_argument("beta0: must be positive");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda: must be in [0, 1]");
  }
  if (!(reciprocal_balance >= 0.0 && reciprocal_balance <= 1.0)) {
    throw std::invalid_argument("reciprocal_balance: must be in [0, 1]");
  }
  if (!std::isfinite(alpha_user) || !std::isfinite(alpha_item)) {
    throw std::invalid_argument("alpha: must be finite");
  }
  if (trace_every < 1) {
    throw std::invalid_argument("trace_every: must be >= 1");
  }
}

std::vector<double> ConvergenceTrace::best_so_far() const {
  std::vector<double> best;
  best.reserve(records.size());
  for (const TraceRecord& r : records) {
    best.push_back(best.empty() ? r.objective
                                : std::max(best.back(), r.objective));
  }
  return best;
}

double beta_schedule(double beta0, int t) {
  if (t < 1) throw std::invalid_argument("beta_schedule: t must be >= 1");
  if (!(beta0 > 0.0)) {
    throw std::invalid_argument("beta_schedule: beta0 must be positive");
  }
  return beta0 / std::sqrt(static_cast<double>(t));
}

double policy_diameter_bound(std::size_t num_users, std::size_t num_items) {
  return std::sqrt(2.0 * static_cast<double>(num_users) *
                   static_cast<double>(num_items));
}

double combined_weight_norm(double lambda, const GgfWeights& user_weights,
                            const GgfWeights& item_weights) {
  const double a = (1.0 - lambda) * user_weights.norm();
  const double b = lambda * item_weights.norm();
  return std::sqrt(a * a + b * b);
}

double default_beta0(std::size_t num_users, std::size_t num_items,
                     const ExposureWeights& exposure, double lambda,
                     const GgfWeights& user_weights,
                     const GgfWeights& item_weights) {
  const double diameter = policy_diameter_bound(num_users, num_items);
  return 2.0 * diameter * exposure[0] /
         combined_weight_norm(lambda, user_weights, item_weights);
}

double smoothing_error_bound(std::size_t num_users, std::size_t num_items,
                             const ExposureWeights& exposure, double lambda,
                             const GgfWeights& user_weights,
                             const GgfWeights& item_weights, int t) {
  if (t < 1) throw std::invalid_argument("smoothing_error_bound: t >= 1");
  const double diameter = policy_diameter_bound(num_users, num_items);
  return 2.0 * diameter * exposure[0] *
         combined_weight_norm(lambda, user_weights, item_weights) /
         std::sqrt(static_cast<double>(t));
}

DirectionScores ggf_direction_scores(std::span<const double> user_dual,
                                     std::span<const double> item_dual,
                                     double lambda) {
  DirectionScores scores;
  scores.user_scale.resize(user_dual.size());
  for (std::size_t i = 0; i < user_dual.size(); ++i) {
    scores.user_scale[i] = -(1.0 - lambda) * user_dual[i];
  }
  if (lambda > 0.0) {
    scores.item_offset.resize(item_dual.size());
    for (std::size_t j = 0; j < item_dual.size(); ++j) {
      scores.item_offset[j] = -lambda * item_dual[j];
    }
  }
  return scores;
}

Assignment update_direction(std::span<const double> user_dual,
                            std::span<const double> item_dual,
                            const PreferenceMatrix& prefs, double lambda,
                            std::size_t top_k, std::size_t threads) {
  if (user_dual.size() != prefs.num_users() ||
      item_dual.size() != prefs.num_items()) {
    throw std::invalid_argument("update_direction: dual vectors have wrong size");
  }
  return best_response(ggf_direction_scores(user_dual, item_dual, lambda),
                       prefs, top_k, threads);
}

// ---------------------------------------------------------------------------
// Smooth baselines

double welfare_phi(double x, double alpha, bool floor) {
  if (alpha > 0.0) return std::pow(x, alpha);
  if (x <= 0.0 && !floor) {
    throw std::domain_error("welfare_phi: non-positive argument");
  }
  x = std::max(x, kPositiveFloor);
  if (alpha == 0.0) return std::log(x);
  return -std::pow(x, alpha);
}

double welfare_phi_derivative(double x, double alpha, bool floor) {
  if (alpha > 0.0) {
    if (alpha < 1.0) x = std::max(x, kPositiveFloor);
    return alpha * std::pow(x, alpha - 1.0);
  }
  if (x <= 0.0 && !floor) {
    throw std::domain_error("welfare_phi_derivative: non-positive argument");
  }
  x = std::max(x, kPositiveFloor);
  if (alpha == 0.0) return 1.0 / x;
  return -alpha * std::pow(x, alpha - 1.0);
}

double welf_objective(std::span<const double> user_utilities,
                      std::span<const double> item_exposures,
                      double alpha_user, double alpha_item, double lambda,
                      bool floor) {
  double users = 0.0;
  double items = 0.0;
  if (lambda < 1.0) {
    for (double u : user_utilities) users += welfare_phi(u, alpha_user, floor);
  }
  if (lambda > 0.0) {
    for (double v : item_exposures) items += welfare_phi(v, alpha_item, floor);
  }
  return (1.0 - lambda) * users + lambda * items;
}

DirectionScores welf_direction_scores(std::span<const double> user_utilities,
                                      std::span<const double> item_exposures,
                                      double alpha_user, double alpha_item,
                                      double lambda, bool floor) {
  DirectionScores scores;
  scores.user_scale.resize(user_utilities.size(), 0.0);
  if (lambda < 1.0) {
    for (std::size_t i = 0; i < user_utilities.size(); ++i) {
      scores.user_scale[i] =
          (1.0 - lambda) *
          welfare_phi_derivative(user_utilities[i], alpha_user, floor);
    }
  }
  if (lambda > 0.0) {
    scores.item_offset.resize(item_exposures.size());
    for (std::size_t j = 0; j < item_exposures.size(); ++j) {
      scores.item_offset[j] =
          lambda * welfare_phi_derivative(item_exposures[j], alpha_item, floor);
    }
  }
  return scores;
}

DenseMatrix welf_gradient_scores(std::span<const double> user_utilities,
                                 std::span<const double> item_exposures,
                                 const PreferenceMatrix& prefs,
                                 double alpha_user, double alpha_item,
                                 double lambda, bool floor) {
  return score_matrix(welf_direction_scores(user_utilities, item_exposures,
                                            alpha_user, alpha_item, lambda,
                                            floor),
                      prefs);
}

namespace {

struct Deviation {
  double mean;
  double sum_sq;
};

Deviation deviation(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += v;
  const double mean = total / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, ss};
}

}  // namespace

double eq_exposure_objective(std::span<const double> user_utilities,
                             std::span<const double> item_exposures,
                             double lambda) {
  double total = 0.0;
  for (double u : user_utilities) total += u;
  const Deviation d = deviation(item_exposures);
  return total - lambda / static_cast<double>(item_exposures.size()) *
                     std::sqrt(d.sum_sq);
}

DirectionScores eq_exposure_direction_scores(
    std::span<const double> item_exposures, std::size_t num_users,
    double lambda) {
  const Deviation d = deviation(item_exposures);
  const double m = static_cast<double>(item_exposures.size());
  const double root = std::sqrt(d.sum_sq + kStdSmoothing);
  DirectionScores scores;
  scores.user_scale.assign(num_users, 1.0);
  scores.item_offset.resize(item_exposures.size());
  for (std::size_t j = 0; j < item_exposures.size(); ++j) {
    scores.item_offset[j] = -lambda / m * (item_exposures[j] - d.mean) / root;
  }
  return scores;
}

DenseMatrix eq_exposure_gradient_scores(std::span<const double> item_exposures,
                                        const PreferenceMatrix& prefs,
                                        double lambda) {
  return score_matrix(eq_exposure_direction_scores(item_exposures,
                                                   prefs.num_users(), lambda),
                      prefs);
}

// ---------------------------------------------------------------------------
// Frank-Wolfe loop

namespace {

// Linear statistics of a policy. One-sided mode uses (users, items) =
// (u, v); reciprocal mode additionally tracks the provided side per user.
struct PolicyStats {
  std::vector<double> users;     // u, or the received side in reciprocal mode
  std::vector<double> items;     // v
  std::vector<double> provided;  // reciprocal mode only

  void blend(double step, const PolicyStats& other) {
    const double keep = 1.0 - step;
    auto mix = [&](std::vector<double>& a, const std::vector<double>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = keep * a[i] + step * b[i];
    };
    mix(users, other.users);
    mix(items, other.items);
    mix(provided, other.provided);
  }
};

class Problem {
 public:
  Problem(const OptimizerConfig& config, const PreferenceMatrix& prefs,
          const ExposureWeights& exposure)
      : config_(config),
        prefs_(prefs),
        exposure_(exposure),
        evaluator_(config, prefs.num_users(), prefs.num_items()),
        user_weights_(evaluator_.user_weights()),
        item_weights_(evaluator_.item_weights()) {
    config.validate();
    if (exposure.num_slots() != prefs.num_items()) {
      throw std::invalid_argument(
          "exposure weights must have one slot per item");
    }
    if (is_reciprocal(config.objective)) {
      instance_.emplace(prefs, config.reciprocal_balance);
      if (exposure.top_k() + 1 > prefs.num_items()) {
        throw std::invalid_argument(
            "reciprocal mode needs K <= n - 1 (no self-recommendation)");
      }
    }
  }

  const PreferenceMatrix& ranking_prefs() const {
    return instance_ ? instance_->prefs() : prefs_;
  }

  bool smoothed() const {
    return config_.variant == Variant::kSmoothing &&
           (config_.objective == ObjectiveKind::kTwoSidedGgf ||
            config_.objective == ObjectiveKind::kReciprocalGgf);
  }

  double beta0() const {
    if (config_.beta0) return *config_.beta0;
    if (instance_) {
      return 2.0 * policy_diameter_bound(prefs_.num_users(),
                                         prefs_.num_items()) *
             exposure_[0] / user_weights_.norm();
    }
    return default_beta0(prefs_.num_users(), prefs_.num_items(), exposure_,
                         config_.lambda, user_weights_, item_weights_);
  }

  Assignment initial_assignment() const {
    DirectionScores scores;
    scores.user_scale.assign(prefs_.num_users(), 1.0);
    scores.exclude_self = instance_.has_value();
    return best_response(scores, ranking_prefs(), exposure_.top_k(),
                         config_.threads);
  }

  PolicyStats stats(const Assignment& a) const {
    PolicyStats s;
    s.items = item_exposures(a, exposure_);
    if (instance_) {
      ReciprocalSides sides = reciprocal_sides(a, *instance_, exposure_);
      s.users = std::move(sides.received);
      s.provided = std::move(sides.provided);
    } else {
      s.users = user_utilities(a, prefs_, exposure_);
    }
    return s;
  }

  // Utilities entering the user-side welfare.
  std::vector<double> utilities(const PolicyStats& s) const {
    if (!instance_) return s.users;
    return blend_sides({s.users, s.provided}, instance_->balance());
  }

  double objective(const PolicyStats& s) const {
    return evaluator_(utilities(s), s.items);
  }

  // Dual vector (gradient of the smoothed -g_w, or minus a supergradient).
  void dual(const GgfWeights& w, PermutahedronProjector& projector,
            std::span<const double> x, double beta, std::vector<double>& out)
      const {
    out.resize(x.size());
    if (config_.variant == Variant::kSmoothing) {
      projector.project(x, 1.0 / beta, out);
    } else {
      const std::vector<double> s = ggf_supergradient(w, x);
      for (std::size_t i = 0; i < s.size(); ++i) out[i] = -s[i];
    }
  }

  DirectionScores direction_scores(const PolicyStats& s, double beta,
                                   PermutahedronProjector& user_projector,
                                   PermutahedronProjector& item_projector) {
    const double lambda = config_.lambda;
    switch (config_.objective) {
      case ObjectiveKind::kTwoSidedGgf: {
        user_dual_.assign(prefs_.num_users(), 0.0);
        item_dual_.assign(prefs_.num_items(), 0.0);
        if (lambda < 1.0) {
          dual(user_weights_, user_projector, s.users, beta, user_dual_);
        }
        if (lambda > 0.0) {
          dual(item_weights_, item_projector, s.items, beta, item_dual_);
        }
        return ggf_direction_scores(user_dual_, item_dual_, lambda);
      }
      case ObjectiveKind::kWelf:
        return welf_direction_scores(s.users, s.items, config_.alpha_user,
                                     config_.alpha_item, lambda);
      case ObjectiveKind::kEqExposure:
        return eq_exposure_direction_scores(s.items, prefs_.num_users(),
                                            lambda);
      case ObjectiveKind::kReciprocalGgf: {
        const std::vector<double> u = utilities(s);
        dual(user_weights_, user_projector, u, beta, user_dual_);
        return reciprocal_direction_scores(user_dual_, *instance_);
      }
      case ObjectiveKind::kEqUtility:
        return eq_utility_direction_scores(utilities(s), lambda, *instance_);
    }
    throw std::logic_error("unreachable objective kind");
  }

  FwResult run() {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const std::size_t top_k = exposure_.top_k();
    const double beta_start = smoothed() ? beta0() : 0.0;

    PermutahedronProjector user_projector(user_weights_);
    PermutahedronProjector item_projector(item_weights_);

    Assignment initial = initial_assignment();
    PolicyStats current = stats(initial);
    RankingPolicy policy = RankingPolicy::deterministic(std::move(initial));
    ConvergenceTrace trace;

    const int T = config_.iterations;
    for (int t = 1; t <= T; ++t) {
      const double beta = smoothed() ? beta_schedule(beta_start, t) : 0.0;
      const DirectionScores scores = direction_scores(
          current, std::max(beta, kMinBeta), user_projector, item_projector);
      const Assignment direction =
          best_response(scores, ranking_prefs(), top_k, config_.threads);
      const double step = 2.0 / (static_cast<double>(t) + 2.0);
      current.blend(step, stats(direction));
      policy.mix(step, direction);

      if (t == 1 || t % config_.trace_every == 0 || t == T) {
        double wall_ms = 0.0;
        if (config_.record_wall_time) {
          wall_ms = std::chrono::duration<double, std::milli>(Clock::now() -
                                                              start)
                        .count();
        }
        trace.records.push_back({t, beta, objective(current), wall_ms});
      }
    }

    UtilityProfile profile{utilities(current), current.items};
    const double final_objective = objective(current);
    return {std::move(policy), std::move(trace), std::move(profile),
            final_objective};
  }

 private:
  const OptimizerConfig& config_;
  const PreferenceMatrix& prefs_;
  const ExposureWeights& exposure_;
  ObjectiveEvaluator evaluator_;
  GgfWeights user_weights_;
  GgfWeights item_weights_;
  std::optional<ReciprocalInstance> instance_;
  std::vector<double> user_dual_;
  std::vector<double> item_dual_;
};

}  // namespace

FwResult frank_wolfe(const OptimizerConfig& config,
                     const PreferenceMatrix& prefs,
                     const ExposureWeights& exposure) {
  Problem problem(config, prefs, exposure);
  return problem.run();
}

FwResult fw_smoothing(OptimizerConfig config, const PreferenceMatrix& prefs,
                      const ExposureWeights& exposure) {
  config.variant = Variant::kSmoothing;
  return frank_wolfe(config, prefs, exposure);
}

FwResult fw_subgradient(OptimizerConfig config, const PreferenceMatrix& prefs,
                        const ExposureWeights& exposure) {
  config.variant = Variant::kSubgradient;
  return frank_wolfe(config, prefs, exposure);
}

ObjectiveEvaluator::ObjectiveEvaluator(const OptimizerConfig& config,
                                       std::size_t num_users,
                                       std::size_t num_items)
    : kind_(config.objective),
      lambda_(config.lambda),
      alpha_user_(config.alpha_user),
      alpha_item_(config.alpha_item),
      user_weights_(config.user_weights.materialize(num_users)),
      item_weights_(config.item_weights.materialize(num_items)) {}

double ObjectiveEvaluator::operator()(std::span<const double> utilities,
                                      std::span<const double> exposures) const {
  switch (kind_) {
    case ObjectiveKind::kTwoSidedGgf:
      return two_sided_objective(lambda_, user_weights_, item_weights_,
                                 utilities, exposures);
    case ObjectiveKind::kWelf:
      return welf_objective(utilities, exposures, alpha_user_, alpha_item_,
                            lambda_);
    case ObjectiveKind::kEqExposure:
      return eq_exposure_objective(utilities, exposures, lambda_);
    case ObjectiveKind::kReciprocalGgf:
      return reciprocal_objective(user_weights_, utilities);
    case ObjectiveKind::kEqUtility:
      return eq_utility_objective(utilities, lambda_);
  }
  throw std::logic_error("unreachable objective kind");
}

double evaluate_objective(const OptimizerConfig& config,
                          const RankingPolicy& policy,
                          const PreferenceMatrix& prefs,
                          const ExposureWeights& exposure) {
  config.validate();
  const ObjectiveEvaluator evaluator(config, prefs.num_users(),
                                     prefs.num_items());
  const std::vector<double> v = item_exposures(policy, exposure);
  if (is_reciprocal(config.objective)) {
    const ReciprocalInstance instance(prefs, config.reciprocal_balance);
    return evaluator(two_sided_utilities(policy, instance, exposure), v);
  }
  return evaluator(user_utilities(policy, prefs, exposure), v);
}

}  // namespace lorenz_rank
