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

#include "lorenz_rank/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lorenz_rank/format.hpp"
#include "lorenz_rank/gini_welfare.hpp"
#include "lorenz_rank/parallel.hpp"
#include "lorenz_rank/reciprocal.hpp"

namespace lorenz_rank {

PreferenceMatrix synthetic_prefs(std::size_t num_users, std::size_t num_items,
                                 double skew, std::uint64_t seed) {
  if (num_users < 1 || num_items < 1) {
    throw std::invalid_argument("synthetic_prefs: need n >= 1 and m >= 1");
  }
  if (!(skew >= 0.0) || !std::isfinite(skew)) {
    throw std::invalid_argument("synthetic_prefs: skew must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> user_scale(0.5, 1.0);
  std::lognormal_distribution<double> noise(0.0, 0.25);

  std::vector<double> scale(num_users);
  for (double& s : scale) s = user_scale(rng);
  std::vector<double> popularity(num_items);
  for (std::size_t j = 0; j < num_items; ++j) {
    popularity[j] = std::pow(static_cast<double>(j + 1), -skew);
  }

  DenseMatrix values(num_users, num_items);
  for (std::size_t i = 0; i < num_users; ++i) {
    for (std::size_t j = 0; j < num_items; ++j) {
      values(i, j) = std::clamp(popularity[j] * scale[i] * noise(rng), 0.0, 1.0);
    }
  }
  return PreferenceMatrix(std::move(values));
}

double quantile_cumulative_utility(std::span<const double> x, double q) {
  const std::size_t idx = quantile_index(x.size(), q);
  return lorenz_curve(x).points[idx - 1];
}

SweepRecord make_sweep_record(const OptimizerConfig& config,
                              const FwResult& result,
                              std::span<const double> quantiles) {
  const auto& u = result.profile.user_utilities;
  const auto& v = result.profile.item_exposures;
  double total = 0.0;
  for (double x : u) total += x;
  const std::size_t n = u.size();
  std::vector<double> qcum;
  for (double q : quantiles) {
    // Quantiles that round down to zero users report zero.
    qcum.push_back(std::floor(q * static_cast<double>(n) + 1e-9) >= 1.0
                       ? quantile_cumulative_utility(u, q)
                       : 0.0);
  }
  return SweepRecord{config.lambda,
                     config.objective,
                     config.user_weights.to_string(),
                     config.item_weights.to_string(),
                     total,
                     gini_index(v),
                     std::vector<double>(quantiles.begin(), quantiles.end()),
                     std::move(qcum),
                     result.objective,
                     config.iterations,
                     config.seed,
                     u,
                     v};
}

std::vector<SweepRecord> pareto_sweep(const OptimizerConfig& base,
                                      std::span<const double> lambda_grid,
                                      const PreferenceMatrix& prefs,
                                      const ExposureWeights& exposure,
                                      std::size_t threads,
                                      std::span<const double> quantiles) {
  for (double lambda : lambda_grid) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw std::invalid_argument("pareto_sweep: lambda outside [0, 1]");
    }
  }
  std::vector<std::optional<SweepRecord>> slots(lambda_grid.size());
  const std::size_t workers = std::min(resolve_threads(threads),
                                       std::max<std::size_t>(1, slots.size()));
  // With several runs in flight, each run stays single-threaded.
  const std::size_t inner = workers > 1 ? 1 : threads;
  parallel_for_chunks(slots.size(), workers,
                      [&](std::size_t begin, std::size_t end) {
                        for (std::size_t r = begin; r < end; ++r) {
                          OptimizerConfig config = base;
                          config.lambda = lambda_grid[r];
                          config.threads = inner;
                          const FwResult result =
                              frank_wolfe(config, prefs, exposure);
                          slots[r] = make_sweep_record(config, result, quantiles);
                        }
                      });
  std::vector<SweepRecord> records;
  records.reserve(slots.size());
  for (auto& s : slots) records.push_back(std::move(*s));
  return records;
}

AuditReport lorenz_audit(std::span<const SweepRecord> records,
                         double tolerance) {
  AuditReport report;
  // b jointly dominates a.
  const auto dominates = [&](const SweepRecord& b, const SweepRecord& a) {
    const Dominance users =
        lorenz_dominance(b.user_utilities, a.user_utilities, tolerance);
    const Dominance items =
        lorenz_dominance(b.item_exposures, a.item_exposures, tolerance);
    const auto weak = [](Dominance d) {
      return d == Dominance::kEqual || d == Dominance::kStrictlyDominates;
    };
    return weak(users) && weak(items) &&
           (users == Dominance::kStrictlyDominates ||
            items == Dominance::kStrictlyDominates);
  };
  for (std::size_t a = 0; a < records.size(); ++a) {
    for (std::size_t b = a + 1; b < records.size(); ++b) {
      ++report.pairs_checked;
      if (dominates(records[b], records[a])) {
        report.violations.push_back({b, a});
      } else if (dominates(records[a], records[b])) {
        report.violations.push_back({a, b});
      }
    }
  }
  return report;
}

std::string OracleResult::describe() const {
  std::ostringstream out;
  out << "optimum " << format_double(optimum) << " at resolution "
      << format_double(resolution) << " (" << points_evaluated
      << " points); argmax rows:";
  for (std::size_t i = 0; i < argmax.rows(); ++i) {
    out << " [";
    for (std::size_t j = 0; j < argmax.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(argmax(i, j));
    }
    out << ']';
  }
  return out.str();
}

namespace {

// All ways to write `total` as an ordered sum of `parts` non-negative ints.
std::vector<std::vector<int>> compositions(int total, std::size_t parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(parts, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx,
                                                  int remaining) {
    if (idx + 1 == parts) {
      current[idx] = remaining;
      out.push_back(current);
      return;
    }
    for (int x = 0; x <= remaining; ++x) {
      current[idx] = x;
      rec(idx + 1, remaining - x);
    }
  };
  rec(0, total);
  return out;
}

}  // namespace

OracleResult grid_oracle(const OptimizerConfig& config,
                         const PreferenceMatrix& prefs,
                         const ExposureWeights& exposure, double resolution) {
  config.validate();
  if (exposure.top_k() != 1) {
    throw std::invalid_argument("grid_oracle: only K = 1 is supported");
  }
  if (exposure.num_slots() != prefs.num_items()) {
    throw std::invalid_argument("grid_oracle: exposure/preference mismatch");
  }
  if (!(resolution > 0.0 && resolution <= 1.0)) {
    throw std::invalid_argument("grid_oracle: resolution must be in (0, 1]");
  }
  const double steps_real = 1.0 / resolution;
  const int steps = static_cast<int>(std::lround(steps_real));
  if (std::abs(steps_real - steps) > 1e-6 * steps_real) {
    throw std::invalid_argument("grid_oracle: 1 / resolution must be an integer");
  }

  const std::size_t n = prefs.num_users();
  const std::size_t m = prefs.num_items();
  const bool reciprocal = is_reciprocal(config.objective);
  std::optional<ReciprocalInstance> instance;
  if (reciprocal) instance.emplace(prefs, config.reciprocal_balance);
  const PreferenceMatrix& mu = instance ? instance->prefs() : prefs;

  std::vector<std::vector<std::size_t>> candidates(n);
  std::size_t free_params = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (reciprocal && i == j) continue;
      candidates[i].push_back(j);
    }
    if (candidates[i].empty()) {
      throw std::invalid_argument("grid_oracle: a user has no candidate items");
    }
    free_params += candidates[i].size() - 1;
  }
  if (free_params > 4) {
    throw std::invalid_argument("grid_oracle: policy space has " +
                                std::to_string(free_params) +
                                " free parameters; at most 4 are supported");
  }

  std::vector<std::vector<std::vector<int>>> per_user(n);
  double total_points = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    // C(steps + c - 1, c - 1) compositions; checked before enumerating.
    double count = 1.0;
    const std::size_t c = candidates[i].size();
    for (std::size_t r = 1; r < c; ++r) {
      count = count * static_cast<double>(steps + r) / static_cast<double>(r);
    }
    total_points *= count;
  }
  if (total_points > 5e7) {
    throw std::invalid_argument("grid_oracle: grid too large at this resolution");
  }
  for (std::size_t i = 0; i < n; ++i) {
    per_user[i] = compositions(steps, candidates[i].size());
  }

  const ObjectiveEvaluator evaluate(config, n, m);
  const double b1 = exposure[0];
  DenseMatrix dist(n, m);
  std::vector<double> received(n), provided(n), users(n), items(m);

  OracleResult best{-std::numeric_limits<double>::infinity(), DenseMatrix(n, m),
                    resolution, 0};

  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      std::fill(items.begin(), items.end(), 0.0);
      std::fill(received.begin(), received.end(), 0.0);
      std::fill(provided.begin(), provided.end(), 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < m; ++j) {
          const double p = dist(r, j);
          if (p == 0.0) continue;
          received[r] += p * mu(r, j) * b1;
          items[j] += p * b1;
          if (reciprocal) provided[j] += p * mu(j, r) * b1;
        }
      }
      if (reciprocal) {
        users = blend_sides({received, provided}, instance->balance());
      } else {
        users = received;
      }
      const double value = evaluate(users, items);
      ++best.points_evaluated;
      if (value > best.optimum) {
        best.optimum = value;
        best.argmax = dist;
      }
      return;
    }
    for (const auto& comp : per_user[i]) {
      for (std::size_t c = 0; c < comp.size(); ++c) {
        dist(i, candidates[i][c]) =
            static_cast<double>(comp[c]) / static_cast<double>(steps);
      }
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

ConvergenceComparison convergence_compare(const OptimizerConfig& config,
                                          const PreferenceMatrix& prefs,
                                          const ExposureWeights& exposure,
                                          std::span<const double> beta0_grid) {
  ConvergenceComparison out;
  FwResult sub = fw_subgradient(config, prefs, exposure);
  out.subgradient = std::move(sub.trace);
  out.subgradient_final = sub.objective;
  for (double beta0 : beta0_grid) {
    OptimizerConfig c = config;
    c.beta0 = beta0;
    FwResult run = fw_smoothing(c, prefs, exposure);
    out.smoothing.push_back({beta0, std::move(run.trace), run.objective});
  }
  return out;
}

}  // namespace lorenz_rank
