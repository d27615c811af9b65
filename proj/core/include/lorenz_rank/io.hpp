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

// Configuration and file formats.
//
// Preferences: CSV, dense or sparse.
//   # dense n m            n rows of m comma-separated values follow
//   user,item,value        1-based triplets, missing entries are 0
// A sparse file may carry "# sparse n m" before its header to fix the shape;
// otherwise the shape is the largest index seen. Other lines starting with
// '#' and blank lines are ignored.
//
// Every file written here starts with provenance: a "# lorenz-rank <version>
// config=<json>" line for CSV, a "generator" member for JSON.

#ifndef LORENZ_RANK_IO_HPP_
#define LORENZ_RANK_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lorenz_rank/core_model.hpp"
#include "lorenz_rank/eval_harness.hpp"
#include "lorenz_rank/optimizer.hpp"

namespace lorenz_rank {

std::string_view version();

// Malformed configuration or command line. Maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file. Carries the source name and line in the message.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SyntheticSpec {
  std::size_t users = 50;
  std::size_t items = 50;
  double skew = 1.0;
};

struct RunConfig {
  OptimizerConfig optimizer;
  std::size_t top_k = 1;
  // Empty means DCG weights; otherwise the K leading slot weights.
  std::vector<double> exposure;
  bool reciprocal = false;
  std::vector<double> lambda_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> beta0_grid = {1.0, 10.0, 100.0};
  std::vector<double> quantiles = kDefaultQuantiles;
  SyntheticSpec synthetic;
  std::string prefs_path;
  std::string out_path;
  std::string trace_path;

  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Parses a JSON object. Unknown keys, wrong types and out-of-range values
// throw ConfigError naming the key. The thread count is not a config key; it
// comes from the environment.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

// Canonical single-line JSON of every effective setting except paths and
// threads, so that it is identical across machines.
std::string run_config_json(const RunConfig& config);

// Switches to the reciprocal counterpart of the objective: two-sided-ggf to
// reciprocal-ggf, eq-exposure to eq-utility. Throws ConfigError for welf.
void enable_reciprocal(RunConfig& config);

// DCG or explicit exposure weights for `num_items` slots.
ExposureWeights make_exposure(const RunConfig& config, std::size_t num_items);

// LORENZ_RANK_THREADS: unset or empty means 0 (auto). Throws ConfigError on
// anything that is not a non-negative integer.
std::size_t threads_from_env();

PreferenceMatrix read_prefs(std::istream& in, std::string_view source);
PreferenceMatrix load_prefs(const std::filesystem::path& path);
// Dense format, shortest round-trip decimals.
void write_prefs(std::ostream& out, const PreferenceMatrix& prefs,
                 std::string_view provenance = {});
void save_prefs(const std::filesystem::path& path,
                const PreferenceMatrix& prefs,
                std::string_view provenance = {});

// "# lorenz-rank <version> config=<json>"
std::string provenance_line(const RunConfig& config);

// Item ids in the JSON are 1-based.
void write_policy(std::ostream& out, const RankingPolicy& policy,
                  const RunConfig& config);
RankingPolicy read_policy(std::istream& in, std::string_view source);
RankingPolicy load_policy(const std::filesystem::path& path);

void write_trace(std::ostream& out, const ConvergenceTrace& trace,
                 const RunConfig& config);
void write_sweep(std::ostream& out, std::span<const SweepRecord> records,
                 const RunConfig& config);
// Columns t, subgradient, then beta_<b0>, objective_<b0> per smoothing run.
void write_comparison(std::ostream& out, const ConvergenceComparison& cmp,
                      const RunConfig& config);

// Metrics of a fixed policy.
struct PolicyMetrics {
  double objective;
  double total_utility;
  double gini_exposure;
  std::vector<double> quantiles;
  std::vector<double> quantile_utilities;
  std::vector<double> user_utilities;
  std::vector<double> item_exposures;
};

PolicyMetrics evaluate_policy(const RunConfig& config,
                              const RankingPolicy& policy,
                              const PreferenceMatrix& prefs);
void write_metrics(std::ostream& out, const PolicyMetrics& metrics,
                   const RunConfig& config);

// Numbers separated by commas, whitespace or newlines; '#' starts a comment.
std::vector<double> read_vector(std::istream& in, std::string_view source);
std::vector<double> load_vector(const std::filesystem::path& path);

// Writes through a temporary sibling and renames it into place.
void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body);

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_IO_HPP_
