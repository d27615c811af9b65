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

#include "lorenz_rank/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "lorenz_rank/format.hpp"
#include "lorenz_rank/gini_welfare.hpp"
#include "lorenz_rank/reciprocal.hpp"

#ifndef LORENZ_RANK_VERSION_STRING
#define LORENZ_RANK_VERSION_STRING "0.0.0"
#endif

namespace lorenz_rank {

using json = nlohmann::json;

std::string_view version() { return LORENZ_RANK_VERSION_STRING; }

// ---------------------------------------------------------------------------
// RunConfig

namespace {

[[noreturn]] void config_fail(std::string_view key, std::string_view what) {
  throw ConfigError("config key '" + std::string(key) + "': " +
                    std::string(what));
}

double get_number(const json& value, std::string_view key) {
  if (!value.is_number()) config_fail(key, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) config_fail(key, "must be finite");
  return x;
}

std::int64_t get_integer(const json& value, std::string_view key) {
  if (!value.is_number_integer()) config_fail(key, "expected an integer");
  return value.get<std::int64_t>();
}

std::size_t get_count(const json& value, std::string_view key,
                      std::int64_t min) {
  const std::int64_t x = get_integer(value, key);
  if (x < min) config_fail(key, "must be >= " + std::to_string(min));
  return static_cast<std::size_t>(x);
}

std::string get_string(const json& value, std::string_view key) {
  if (!value.is_string()) config_fail(key, "expected a string");
  return value.get<std::string>();
}

bool get_bool(const json& value, std::string_view key) {
  if (!value.is_boolean()) config_fail(key, "expected true or false");
  return value.get<bool>();
}

std::vector<double> get_numbers(const json& value, std::string_view key) {
  if (!value.is_array()) config_fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (const json& x : value) out.push_back(get_number(x, key));
  return out;
}

WeightScheme get_scheme(const json& value, std::string_view key) {
  try {
    return WeightScheme::parse(get_string(value, key));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    config_fail(key, e.what());
  }
}

template <typename F>
auto rethrow_as_config(std::string_view key, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    config_fail(key, e.what());
  }
}

json scheme_json(const WeightScheme& s) { return s.to_string(); }

}  // namespace

void enable_reciprocal(RunConfig& config) {
  config.reciprocal = true;
  switch (config.optimizer.objective) {
    case ObjectiveKind::kTwoSidedGgf:
      config.optimizer.objective = ObjectiveKind::kReciprocalGgf;
      break;
    case ObjectiveKind::kEqExposure:
      config.optimizer.objective = ObjectiveKind::kEqUtility;
      break;
    case ObjectiveKind::kWelf:
      throw ConfigError(
          "config key 'objective': welf has no reciprocal counterpart");
    case ObjectiveKind::kReciprocalGgf:
    case ObjectiveKind::kEqUtility:
      break;
  }
}

void RunConfig::validate() const {
  // Map OptimizerConfig messages ("field: ...") onto config keys.
  try {
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const std::size_t colon = what.find(": ");
    if (colon == std::string::npos) throw ConfigError(what);
    throw ConfigError("config key '" + what.substr(0, colon) +
                      "': " + what.substr(colon + 2));
  }
  if (top_k < 1) config_fail("top_k", "must be >= 1");
  if (!exposure.empty() && exposure.size() != top_k) {
    config_fail("exposure", "needs exactly top_k weights");
  }
  for (std::size_t k = 0; k < exposure.size(); ++k) {
    if (!(exposure[k] > 0.0) || (k > 0 && exposure[k] > exposure[k - 1])) {
      config_fail("exposure", "weights must be positive and non-increasing");
    }
  }
  if (reciprocal != is_reciprocal(optimizer.objective)) {
    config_fail("objective", "'" + std::string(to_string(optimizer.objective)) +
                                 "' does not match reciprocal = " +
                                 (reciprocal ? "true" : "false"));
  }
  for (double l : lambda_grid) {
    if (!(l >= 0.0 && l <= 1.0)) config_fail("lambda_grid", "values in [0, 1]");
  }
  for (double b : beta0_grid) {
    if (!(b > 0.0)) config_fail("beta0_grid", "values must be positive");
  }
  for (double q : quantiles) {
    if (!(q > 0.0 && q <= 1.0)) config_fail("quantiles", "values in (0, 1]");
  }
  if (synthetic.users < 1 || synthetic.items < 1) {
    config_fail("synthetic", "users and items must be >= 1");
  }
  if (!(synthetic.skew >= 0.0)) config_fail("synthetic.skew", "must be >= 0");
}

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig c;
  OptimizerConfig& o = c.optimizer;
  bool objective_given = false;
  bool reciprocal = false;
  for (const auto& [key, value] : root.items()) {
    if (key == "iterations") {
      o.iterations = static_cast<int>(get_count(value, key, 1));
    } else if (key == "beta0") {
      if (value.is_null()) {
        o.beta0.reset();
      } else {
        o.beta0 = get_number(value, key);
      }
    } else if (key == "lambda") {
      o.lambda = get_number(value, key);
    } else if (key == "user_weights") {
      o.user_weights = get_scheme(value, key);
    } else if (key == "item_weights") {
      o.item_weights = get_scheme(value, key);
    } else if (key == "objective") {
      o.objective = rethrow_as_config(
          key, [&] { return parse_objective_kind(get_string(value, key)); });
      objective_given = true;
    } else if (key == "variant") {
      o.variant = rethrow_as_config(
          key, [&] { return parse_variant(get_string(value, key)); });
    } else if (key == "alpha_user") {
      o.alpha_user = get_number(value, key);
    } else if (key == "alpha_item") {
      o.alpha_item = get_number(value, key);
    } else if (key == "reciprocal_balance") {
      o.reciprocal_balance = get_number(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        config_fail(key, "expected a non-negative integer");
      }
      o.seed = value.get<std::uint64_t>();
    } else if (key == "trace_every") {
      o.trace_every = static_cast<int>(get_count(value, key, 1));
    } else if (key == "record_wall_time") {
      o.record_wall_time = get_bool(value, key);
    } else if (key == "top_k") {
      c.top_k = get_count(value, key, 1);
    } else if (key == "exposure") {
      if (value.is_string()) {
        if (value.get<std::string>() != "dcg") {
          config_fail(key, "expected \"dcg\" or an array of weights");
        }
        c.exposure.clear();
      } else {
        c.exposure = get_numbers(value, key);
      }
    } else if (key == "reciprocal") {
      reciprocal = get_bool(value, key);
    } else if (key == "lambda_grid") {
      c.lambda_grid = get_numbers(value, key);
    } else if (key == "beta0_grid") {
      c.beta0_grid = get_numbers(value, key);
    } else if (key == "quantiles") {
      c.quantiles = get_numbers(value, key);
    } else if (key == "synthetic") {
      if (!value.is_object()) config_fail(key, "expected an object");
      for (const auto& [sub, sv] : value.items()) {
        const std::string full = "synthetic." + sub;
        if (sub == "users") {
          c.synthetic.users = get_count(sv, full, 1);
        } else if (sub == "items") {
          c.synthetic.items = get_count(sv, full, 1);
        } else if (sub == "skew") {
          c.synthetic.skew = get_number(sv, full);
        } else {
          config_fail(full, "unknown key");
        }
      }
    } else if (key == "prefs") {
      c.prefs_path = get_string(value, key);
    } else if (key == "out") {
      c.out_path = get_string(value, key);
    } else if (key == "trace") {
      c.trace_path = get_string(value, key);
    } else {
      config_fail(key, "unknown key");
    }
  }
  if (is_reciprocal(o.objective)) reciprocal = true;
  if (reciprocal) {
    if (objective_given && !is_reciprocal(o.objective) &&
        o.objective != ObjectiveKind::kTwoSidedGgf &&
        o.objective != ObjectiveKind::kEqExposure) {
      config_fail("objective", "not available in reciprocal mode");
    }
    enable_reciprocal(c);
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

std::string run_config_json(const RunConfig& c) {
  const OptimizerConfig& o = c.optimizer;
  json j;
  j["iterations"] = o.iterations;
  j["beta0"] = o.beta0 ? json(*o.beta0) : json(nullptr);
  j["lambda"] = o.lambda;
  j["user_weights"] = scheme_json(o.user_weights);
  j["item_weights"] = scheme_json(o.item_weights);
  j["objective"] = std::string(to_string(o.objective));
  j["variant"] = std::string(to_string(o.variant));
  j["alpha_user"] = o.alpha_user;
  j["alpha_item"] = o.alpha_item;
  j["reciprocal_balance"] = o.reciprocal_balance;
  j["seed"] = o.seed;
  j["trace_every"] = o.trace_every;
  j["record_wall_time"] = o.record_wall_time;
  j["top_k"] = c.top_k;
  j["exposure"] = c.exposure.empty() ? json("dcg") : json(c.exposure);
  j["reciprocal"] = c.reciprocal;
  j["lambda_grid"] = c.lambda_grid;
  j["beta0_grid"] = c.beta0_grid;
  j["quantiles"] = c.quantiles;
  j["synthetic"] = {{"users", c.synthetic.users},
                    {"items", c.synthetic.items},
                    {"skew", c.synthetic.skew}};
  return j.dump();
}

ExposureWeights make_exposure(const RunConfig& config, std::size_t num_items) {
  const std::size_t limit = config.reciprocal ? num_items - 1 : num_items;
  if (config.top_k > limit) {
    throw ConfigError("config key 'top_k': " + std::to_string(config.top_k) +
                      " exceeds the " + std::to_string(limit) +
                      " rankable items");
  }
  if (config.exposure.empty()) {
    return dcg_exposure_weights(num_items, config.top_k);
  }
  std::vector<double> b(num_items, 0.0);
  std::copy(config.exposure.begin(), config.exposure.end(), b.begin());
  return ExposureWeights(std::move(b), config.top_k);
}

std::size_t threads_from_env() {
  const char* raw = std::getenv("LORENZ_RANK_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string_view text(raw);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("LORENZ_RANK_THREADS must be a non-negative integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

// ---------------------------------------------------------------------------
// Preferences

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line,
                             const std::string& what) {
  throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " +
                   what);
}

std::size_t parse_index(std::string_view text, std::string_view source,
                        std::size_t line, std::string_view what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      value < 1) {
    parse_fail(source, line,
               std::string(what) + " must be a positive integer, got '" +
                   std::string(text) + "'");
  }
  return value;
}

double parse_value(std::string_view text, std::string_view source,
                   std::size_t line, std::size_t user, std::size_t item) {
  double x = 0.0;
  try {
    x = parse_double(text);
  } catch (const std::invalid_argument&) {
    parse_fail(source, line, "malformed value '" + std::string(text) + "'");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    parse_fail(source, line,
               "value " + std::string(text) + " at cell (" +
                   std::to_string(user) + ", " + std::to_string(item) +
                   ") is outside [0, 1]");
  }
  return x;
}

// "# <word> n m" header; returns false when the comment is something else.
bool shape_header(std::string_view line, std::string_view word,
                  std::size_t& rows, std::size_t& cols) {
  std::istringstream in{std::string(line)};
  std::string hash, w;
  if (!(in >> hash >> w) || hash != "#" || w != word) return false;
  long long r = 0, c = 0;
  std::string rest;
  if (!(in >> r >> c) || (in >> rest) || r < 1 || c < 1) {
    throw ParseError("malformed '# " + std::string(word) +
                     " n m' header: " + std::string(line));
  }
  rows = static_cast<std::size_t>(r);
  cols = static_cast<std::size_t>(c);
  return true;
}

}  // namespace

PreferenceMatrix read_prefs(std::istream& in, std::string_view source) {
  std::string raw;
  std::size_t line_no = 0;
  enum class Mode { kUnknown, kDense, kSparse } mode = Mode::kUnknown;
  std::size_t rows = 0, cols = 0;
  bool sparse_shape = false;

  std::vector<double> dense;
  std::size_t dense_rows = 0;
  std::map<std::pair<std::size_t, std::size_t>, double> triplets;
  std::size_t max_user = 0, max_item = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (mode != Mode::kUnknown) continue;
      try {
        if (shape_header(line, "dense", rows, cols)) {
          mode = Mode::kDense;
          dense.reserve(rows * cols);
        } else if (shape_header(line, "sparse", rows, cols)) {
          sparse_shape = true;
        }
      } catch (const ParseError& e) {
        parse_fail(source, line_no, e.what());
      }
      continue;
    }
    if (mode == Mode::kUnknown) {
      const auto fields = split_commas(line);
      if (fields.size() == 3 && fields[0] == "user" && fields[1] == "item" &&
          fields[2] == "value") {
        mode = Mode::kSparse;
        continue;
      }
      parse_fail(source, line_no,
                 "expected a '# dense n m' or 'user,item,value' header");
    }
    const auto fields = split_commas(line);
    if (mode == Mode::kDense) {
      if (dense_rows == rows) {
        parse_fail(source, line_no,
                   "more than the declared " + std::to_string(rows) + " rows");
      }
      if (fields.size() != cols) {
        parse_fail(source, line_no,
                   "expected " + std::to_string(cols) + " values, found " +
                       std::to_string(fields.size()));
      }
      ++dense_rows;
      for (std::size_t j = 0; j < cols; ++j) {
        dense.push_back(
            parse_value(fields[j], source, line_no, dense_rows, j + 1));
      }
    } else {
      if (fields.size() != 3) {
        parse_fail(source, line_no, "expected user,item,value");
      }
      const std::size_t user = parse_index(fields[0], source, line_no, "user");
      const std::size_t item = parse_index(fields[1], source, line_no, "item");
      if (sparse_shape && (user > rows || item > cols)) {
        parse_fail(source, line_no,
                   "cell (" + std::to_string(user) + ", " +
                       std::to_string(item) + ") outside the declared " +
                       std::to_string(rows) + " x " + std::to_string(cols) +
                       " shape");
      }
      const double value = parse_value(fields[2], source, line_no, user, item);
      if (!triplets.emplace(std::make_pair(user, item), value).second) {
        parse_fail(source, line_no,
                   "duplicate entry for cell (" + std::to_string(user) + ", " +
                       std::to_string(item) + ")");
      }
      max_user = std::max(max_user, user);
      max_item = std::max(max_item, item);
    }
  }
  if (in.bad()) throw ParseError(std::string(source) + ": read error");

  switch (mode) {
    case Mode::kUnknown:
      throw ParseError(std::string(source) + ": no preference data");
    case Mode::kDense:
      if (dense_rows != rows) {
        throw ParseError(std::string(source) + ": expected " +
                         std::to_string(rows) + " rows, found " +
                         std::to_string(dense_rows));
      }
      return PreferenceMatrix(rows, cols, std::move(dense));
    case Mode::kSparse:
      break;
  }
  if (!sparse_shape) {
    if (triplets.empty()) {
      throw ParseError(std::string(source) +
                       ": sparse file without entries or '# sparse n m'");
    }
    rows = max_user;
    cols = max_item;
  }
  DenseMatrix values(rows, cols);
  for (const auto& [cell, value] : triplets) {
    values(cell.first - 1, cell.second - 1) = value;
  }
  return PreferenceMatrix(std::move(values));
}

PreferenceMatrix load_prefs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_prefs(in, path.string());
}

void write_prefs(std::ostream& out, const PreferenceMatrix& prefs,
                 std::string_view provenance) {
  if (!provenance.empty()) out << provenance << '\n';
  out << "# dense " << prefs.num_users() << ' ' << prefs.num_items() << '\n';
  for (std::size_t i = 0; i < prefs.num_users(); ++i) {
    for (std::size_t j = 0; j < prefs.num_items(); ++j) {
      if (j > 0) out << ',';
      out << format_double(prefs(i, j));
    }
    out << '\n';
  }
}

void save_prefs(const std::filesystem::path& path,
                const PreferenceMatrix& prefs, std::string_view provenance) {
  write_file(path, [&](std::ostream& out) {
    write_prefs(out, prefs, provenance);
  });
}

std::string provenance_line(const RunConfig& config) {
  return "# lorenz-rank " + std::string(version()) +
         " config=" + run_config_json(config);
}

// ---------------------------------------------------------------------------
// Policies

namespace {

json generator_json(const RunConfig& config) {
  return {{"tool", "lorenz-rank"},
          {"version", std::string(version())},
          {"config", json::parse(run_config_json(config))}};
}

}  // namespace

void write_policy(std::ostream& out, const RankingPolicy& policy,
                  const RunConfig& config) {
  json components = json::array();
  for (const auto& c : policy.components()) {
    json rows = json::array();
    for (std::size_t i = 0; i < c.assignment.num_users(); ++i) {
      json ids = json::array();
      for (ItemIndex item : c.assignment.ranking(i)) ids.push_back(item + 1);
      rows.push_back(std::move(ids));
    }
    components.push_back(
        {{"coefficient", c.coefficient}, {"assignments", std::move(rows)}});
  }
  json root;
  root["generator"] = generator_json(config);
  root["n"] = policy.num_users();
  root["m"] = policy.num_items();
  root["K"] = policy.top_k();
  root["components"] = std::move(components);
  out << root.dump(1) << '\n';
}

RankingPolicy read_policy(std::istream& in, std::string_view source) {
  const std::string src(source);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(src + ": not valid JSON: " + e.what());
  }
  const auto fail = [&](const std::string& what) -> void {
    throw ParseError(src + ": " + what);
  };
  if (!root.is_object()) fail("policy must be a JSON object");
  for (const char* key : {"n", "m", "K", "components"}) {
    if (!root.contains(key)) fail(std::string("missing '") + key + "'");
  }
  const auto count = [&](const char* key) {
    const json& v = root[key];
    if (!v.is_number_unsigned() || v.get<std::size_t>() < 1) {
      fail(std::string("'") + key + "' must be a positive integer");
    }
    return v.get<std::size_t>();
  };
  const std::size_t n = count("n");
  const std::size_t m = count("m");
  const std::size_t k = count("K");
  const json& comps = root["components"];
  if (!comps.is_array() || comps.empty()) {
    fail("'components' must be a non-empty array");
  }
  std::vector<RankingPolicy::Component> parts;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const std::string where = "component " + std::to_string(c + 1);
    const json& comp = comps[c];
    if (!comp.is_object() || !comp.contains("coefficient") ||
        !comp.contains("assignments") || !comp["coefficient"].is_number()) {
      fail(where + ": needs a numeric 'coefficient' and 'assignments'");
    }
    const json& rows = comp["assignments"];
    if (!rows.is_array() || rows.size() != n) {
      fail(where + ": 'assignments' must have n rows");
    }
    std::vector<ItemIndex> items;
    items.reserve(n * k);
    for (std::size_t i = 0; i < n; ++i) {
      const json& row = rows[i];
      if (!row.is_array() || row.size() != k) {
        fail(where + ", user " + std::to_string(i + 1) + ": expected K items");
      }
      for (const json& id : row) {
        if (!id.is_number_unsigned() || id.get<std::size_t>() < 1 ||
            id.get<std::size_t>() > m) {
          fail(where + ", user " + std::to_string(i + 1) +
               ": item ids must be integers in [1, m]");
        }
        items.push_back(static_cast<ItemIndex>(id.get<std::size_t>() - 1));
      }
    }
    try {
      parts.push_back({comp["coefficient"].get<double>(),
                       Assignment(n, m, k, std::move(items))});
    } catch (const std::invalid_argument& e) {
      fail(where + ": " + e.what());
    }
  }
  try {
    return RankingPolicy(std::move(parts));
  } catch (const std::invalid_argument& e) {
    throw ParseError(src + ": " + e.what());
  }
}

RankingPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_policy(in, path.string());
}

// ---------------------------------------------------------------------------
// CSV outputs

namespace {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// Short label for a parameter value: at least two decimals (0.25, 0.50),
// full precision when that is not exact.
std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  if (parse_double(buf) == x) return buf;
  return format_double(x);
}

}  // namespace

void write_trace(std::ostream& out, const ConvergenceTrace& trace,
                 const RunConfig& config) {
  out << provenance_line(config) << '\n';
  out << "t,beta,objective,wall_ms\n";
  for (const TraceRecord& r : trace.records) {
    out << r.t << ',' << format_double(r.beta) << ','
        << format_double(r.objective) << ',' << format_double(r.wall_ms)
        << '\n';
  }
}

void write_sweep(std::ostream& out, std::span<const SweepRecord> records,
                 const RunConfig& config) {
  out << provenance_line(config) << '\n';
  out << "lambda,objective_kind,weights_user,weights_item,total_utility,"
         "gini_exposure";
  for (double q : config.quantiles) out << ",qcum_" << label(q);
  out << ",final_objective,iters,seed\n";
  for (const SweepRecord& r : records) {
    if (r.quantiles != config.quantiles) {
      throw std::invalid_argument(
          "write_sweep: record quantiles differ from the config");
    }
    out << format_double(r.lambda) << ',' << to_string(r.objective) << ','
        << csv_field(r.user_weights) << ',' << csv_field(r.item_weights) << ','
        << format_double(r.total_utility) << ','
        << format_double(r.gini_exposure);
    for (double x : r.quantile_utilities) out << ',' << format_double(x);
    out << ',' << format_double(r.final_objective) << ',' << r.iterations
        << ',' << r.seed << '\n';
  }
}

void write_comparison(std::ostream& out, const ConvergenceComparison& cmp,
                      const RunConfig& config) {
  out << provenance_line(config) << '\n';
  out << "t,subgradient";
  for (const ComparisonRun& run : cmp.smoothing) {
    out << ",beta_" << label(run.beta0) << ",objective_" << label(run.beta0);
  }
  out << '\n';
  const std::size_t rows = cmp.subgradient.records.size();
  for (const ComparisonRun& run : cmp.smoothing) {
    if (run.trace.records.size() != rows) {
      throw std::invalid_argument("write_comparison: traces are not aligned");
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    out << cmp.subgradient.records[r].t << ','
        << format_double(cmp.subgradient.records[r].objective);
    for (const ComparisonRun& run : cmp.smoothing) {
      out << ',' << format_double(run.trace.records[r].beta) << ','
          << format_double(run.trace.records[r].objective);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Metrics

PolicyMetrics evaluate_policy(const RunConfig& config,
                              const RankingPolicy& policy,
                              const PreferenceMatrix& prefs) {
  const ExposureWeights exposure = make_exposure(config, prefs.num_items());
  if (policy.num_users() != prefs.num_users() ||
      policy.num_items() != prefs.num_items() ||
      policy.top_k() != exposure.top_k()) {
    throw std::invalid_argument(
        "policy shape does not match the preferences and top_k");
  }
  PolicyMetrics m;
  m.item_exposures = item_exposures(policy, exposure);
  if (config.reciprocal) {
    const ReciprocalInstance instance(prefs,
                                      config.optimizer.reciprocal_balance);
    m.user_utilities = two_sided_utilities(policy, instance, exposure);
  } else {
    m.user_utilities = user_utilities(policy, prefs, exposure);
  }
  const ObjectiveEvaluator evaluate(config.optimizer, prefs.num_users(),
                                    prefs.num_items());
  m.objective = evaluate(m.user_utilities, m.item_exposures);
  m.total_utility = 0.0;
  for (double u : m.user_utilities) m.total_utility += u;
  m.gini_exposure = gini_index(m.item_exposures);
  m.quantiles = config.quantiles;
  const double n = static_cast<double>(m.user_utilities.size());
  for (double q : config.quantiles) {
    m.quantile_utilities.push_back(
        std::floor(q * n + 1e-9) >= 1.0
            ? quantile_cumulative_utility(m.user_utilities, q)
            : 0.0);
  }
  return m;
}

void write_metrics(std::ostream& out, const PolicyMetrics& m,
                   const RunConfig& config) {
  json root;
  root["generator"] = generator_json(config);
  root["objective"] = m.objective;
  root["total_utility"] = m.total_utility;
  root["gini_exposure"] = m.gini_exposure;
  json q = json::array();
  for (std::size_t i = 0; i < m.quantiles.size(); ++i) {
    q.push_back({{"q", m.quantiles[i]}, {"cumulative_utility",
                                         m.quantile_utilities[i]}});
  }
  root["quantiles"] = std::move(q);
  root["user_utilities"] = m.user_utilities;
  root["item_exposures"] = m.item_exposures;
  out << root.dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// Plain vectors and files

std::vector<double> read_vector(std::istream& in, std::string_view source) {
  std::vector<double> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::size_t pos = 0;
    while (pos < line.size()) {
      const std::size_t end = line.find_first_of(", \t\r", pos);
      const std::string_view token =
          line.substr(pos, end == std::string_view::npos ? end : end - pos);
      if (!token.empty()) {
        try {
          out.push_back(parse_double(token));
        } catch (const std::invalid_argument&) {
          parse_fail(source, line_no,
                     "malformed number '" + std::string(token) + "'");
        }
      }
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
  }
  if (out.empty()) throw ParseError(std::string(source) + ": no numbers");
  return out;
}

std::vector<double> load_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_vector(in, path.string());
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace lorenz_rank
