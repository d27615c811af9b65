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

#include "lorenz_rank/gini_welfare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "lorenz_rank/format.hpp"

namespace lorenz_rank {

namespace {

constexpr double kWeightSlack = 1e-9;

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

GgfWeights::GgfWeights(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw std::invalid_argument("GgfWeights: empty weight vector");
  }
  if (std::abs(weights_.front() - 1.0) > kWeightSlack) {
    throw std::invalid_argument("GgfWeights: w_1 must equal 1");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < -kWeightSlack) {
      throw std::invalid_argument("GgfWeights: weights must be non-negative");
    }
    if (i > 0 && weights_[i] > weights_[i - 1] + kWeightSlack) {
      throw std::invalid_argument("GgfWeights: weights must be non-increasing");
    }
  }
}

std::vector<double> GgfWeights::lorenz_weights() const {
  std::vector<double> out(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double next = i + 1 < weights_.size() ? weights_[i + 1] : 0.0;
    out[i] = weights_[i] - next;
  }
  return out;
}

double GgfWeights::norm() const {
  double s = 0.0;
  for (double w : weights_) s += w * w;
  return std::sqrt(s);
}

std::vector<std::size_t> ascending_order(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return order;
}

double ggf_value(const GgfWeights& w, std::span<const double> x) {
  check_lengths(w.size(), x.size(), "ggf_value");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  double s = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) s += w[i] * sorted[i];
  return s;
}

GgfWeights uniform_weights(std::size_t n) {
  if (n < 1) throw std::invalid_argument("uniform_weights: n must be >= 1");
  return GgfWeights(std::vector<double>(n, 1.0));
}

GgfWeights gini_weights(std::size_t n) {
  if (n < 1) throw std::invalid_argument("gini_weights: n must be >= 1");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = static_cast<double>(n - i) / static_cast<double>(n);
  }
  return GgfWeights(std::move(w));
}

GgfWeights bonferroni_weights(std::size_t n) {
  if (n < 1) throw std::invalid_argument("bonferroni_weights: n must be >= 1");
  // Tail harmonic sums; the 1/n factor cancels in the normalization.
  std::vector<double> w(n);
  double tail = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    tail += 1.0 / static_cast<double>(i + 1);
    w[i] = tail;
  }
  const double head = w.front();
  for (double& x : w) x /= head;
  w.front() = 1.0;
  return GgfWeights(std::move(w));
}

std::size_t quantile_index(std::size_t n, double q) {
  if (!(q > 0.0) || q > 1.0) {
    throw std::invalid_argument("quantile: q must be in (0, 1]");
  }
  // Guard against q * n landing a hair below an integer.
  const double scaled = std::floor(q * static_cast<double>(n) + 1e-9);
  if (scaled < 1.0) {
    throw std::invalid_argument("quantile: floor(q n) must be >= 1 (q=" +
                                format_double(q) +
                                ", n=" + std::to_string(n) + ")");
  }
  return std::min(n, static_cast<std::size_t>(scaled));
}

GgfWeights quantile_owa_weights(std::size_t n, double q, double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::invalid_argument("quantile_owa_weights: omega must be in [0, 1]");
  }
  const std::size_t idx = quantile_index(n, q);
  std::vector<double> lorenz(n, 0.0);
  lorenz[idx - 1] += omega;
  lorenz[n - 1] += 1.0 - omega;
  return lorenz_to_owa(lorenz);
}

GgfWeights lorenz_to_owa(std::span<const double> lorenz_weights) {
  if (lorenz_weights.empty()) {
    throw std::invalid_argument("lorenz_to_owa: empty weight vector");
  }
  double total = 0.0;
  for (double x : lorenz_weights) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument(
          "lorenz_to_owa: Lorenz weights must be non-negative");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("lorenz_to_owa: Lorenz weights must sum to 1");
  }
  std::vector<double> w(lorenz_weights.size());
  double tail = 0.0;
  for (std::size_t i = w.size(); i-- > 0;) {
    tail += lorenz_weights[i];
    w[i] = tail;
  }
  return GgfWeights(std::move(w));
}

LorenzVector lorenz_curve(std::span<const double> x) {
  std::vector<double> points(x.begin(), x.end());
  std::sort(points.begin(), points.end());
  double s = 0.0;
  for (double& p : points) {
    s += p;
    p = s;
  }
  return {std::move(points)};
}

std::string_view to_string(Dominance d) {
  switch (d) {
    case Dominance::kEqual:
      return "equal";
    case Dominance::kStrictlyDominates:
      return "strictly-dominates";
    case Dominance::kStrictlyDominated:
      return "strictly-dominated";
    case Dominance::kIncomparable:
      return "incomparable";
  }
  return "unknown";
}

Dominance lorenz_dominance(std::span<const double> x, std::span<const double> y,
                           double tolerance) {
  check_lengths(x.size(), y.size(), "lorenz_dominance");
  const auto lx = lorenz_curve(x).points;
  const auto ly = lorenz_curve(y).points;
  bool x_above = false;  // some X_i > Y_i + tol
  bool y_above = false;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    if (lx[i] > ly[i] + tolerance) x_above = true;
    if (ly[i] > lx[i] + tolerance) y_above = true;
  }
  if (x_above && y_above) return Dominance::kIncomparable;
  if (x_above) return Dominance::kStrictlyDominates;
  if (y_above) return Dominance::kStrictlyDominated;
  return Dominance::kEqual;
}

bool weakly_dominates(std::span<const double> x, std::span<const double> y,
                      double tolerance) {
  const Dominance d = lorenz_dominance(x, y, tolerance);
  return d == Dominance::kEqual || d == Dominance::kStrictlyDominates;
}

std::vector<double> ggf_supergradient(const GgfWeights& w,
                                      std::span<const double> x) {
  check_lengths(w.size(), x.size(), "ggf_supergradient");
  const auto order = ascending_order(x);
  std::vector<double> s(x.size());
  for (std::size_t r = 0; r < order.size(); ++r) s[order[r]] = w[r];
  return s;
}

double gini_index(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("gini_index: empty vector");
  const auto curve = lorenz_curve(x).points;
  const double total = curve.back();
  if (!(total > 0.0)) {
    throw std::invalid_argument("gini_index: sum of values must be positive");
  }
  const double n = static_cast<double>(x.size());
  const double area = std::accumulate(curve.begin(), curve.end(), 0.0);
  return 1.0 + 1.0 / n - 2.0 * area / (n * total);
}

double two_sided_objective(double lambda, const GgfWeights& user_weights,
                           const GgfWeights& item_weights,
                           std::span<const double> user_utilities,
                           std::span<const double> item_exposures) {
  double value = 0.0;
  if (lambda < 1.0) {
    value += (1.0 - lambda) * ggf_value(user_weights, user_utilities);
  }
  if (lambda > 0.0) {
    value += lambda * ggf_value(item_weights, item_exposures);
  }
  return value;
}

// ---------------------------------------------------------------------------
// WeightScheme

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// Parses "k1=v1,k2=v2" requiring exactly the listed keys.
std::vector<double> parse_params(std::string_view body,
                                 std::initializer_list<std::string_view> keys,
                                 std::string_view scheme) {
  std::vector<double> values(keys.size());
  std::vector<bool> seen(keys.size(), false);
  for (std::string_view part : split(body, ',')) {
    const std::size_t eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("weight scheme '" + std::string(scheme) +
                                  "': expected key=value, got '" +
                                  std::string(part) + "'");
    }
    const std::string_view key = part.substr(0, eq);
    std::size_t idx = 0;
    for (std::string_view k : keys) {
      if (k == key) break;
      ++idx;
    }
    if (idx == keys.size() || seen[idx]) {
      throw std::invalid_argument("weight scheme '" + std::string(scheme) +
                                  "': unexpected key '" + std::string(key) +
                                  "'");
    }
    values[idx] = parse_double(part.substr(eq + 1));
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw std::invalid_argument("weight scheme '" + std::string(scheme) +
                                  "': missing key '" +
                                  std::string(*(keys.begin() + i)) + "'");
    }
  }
  return values;
}

}  // namespace

WeightScheme WeightScheme::quantile(double q, double omega) {
  if (!(q > 0.0 && q <= 1.0) || !(omega >= 0.0 && omega <= 1.0)) {
    throw std::invalid_argument(
        "quantile scheme: need q in (0, 1] and omega in [0, 1]");
  }
  WeightScheme s(Kind::kQuantile);
  s.q_ = q;
  s.omega_ = omega;
  return s;
}

WeightScheme WeightScheme::tradeoff(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("tradeoff scheme: lambda must be in [0, 1]");
  }
  WeightScheme s(Kind::kTradeoff);
  s.lambda_ = lambda;
  return s;
}

WeightScheme WeightScheme::explicit_weights(std::vector<double> w) {
  GgfWeights check(w);  // validates
  WeightScheme s(Kind::kExplicit);
  s.explicit_ = std::move(w);
  return s;
}

WeightScheme WeightScheme::parse(std::string_view text) {
  if (text == "gini") return gini();
  if (text == "bonferroni") return bonferroni();
  if (text == "uniform") return uniform();
  const std::size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view body =
      colon == std::string_view::npos ? std::string_view{}
                                      : text.substr(colon + 1);
  if (head == "quantile" && colon != std::string_view::npos) {
    const auto v = parse_params(body, {"q", "omega"}, text);
    return quantile(v[0], v[1]);
  }
  if (head == "tradeoff" && colon != std::string_view::npos) {
    const auto v = parse_params(body, {"lambda"}, text);
    return tradeoff(v[0]);
  }
  if (head == "explicit" && colon != std::string_view::npos) {
    std::vector<double> w;
    for (std::string_view part : split(body, ',')) {
      w.push_back(parse_double(part));
    }
    return explicit_weights(std::move(w));
  }
  throw std::invalid_argument("unknown weight scheme '" + std::string(text) +
                              "'");
}

GgfWeights WeightScheme::materialize(std::size_t n) const {
  switch (kind_) {
    case Kind::kGini:
      return gini_weights(n);
    case Kind::kBonferroni:
      return bonferroni_weights(n);
    case Kind::kUniform:
      return uniform_weights(n);
    case Kind::kQuantile:
      return quantile_owa_weights(n, q_, omega_);
    case Kind::kTradeoff: {
      if (n < 1) throw std::invalid_argument("tradeoff weights: n must be >= 1");
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = (1.0 - lambda_) +
               lambda_ * static_cast<double>(n - i) / static_cast<double>(n);
      }
      return GgfWeights(std::move(w));
    }
    case Kind::kExplicit:
      if (explicit_.size() != n) {
        throw std::invalid_argument(
            "explicit weights have length " + std::to_string(explicit_.size()) +
            " but the population has size " + std::to_string(n));
      }
      return GgfWeights(explicit_);
  }
  throw std::logic_error("unreachable weight scheme kind");
}

std::string WeightScheme::to_string() const {
  switch (kind_) {
    case Kind::kGini:
      return "gini";
    case Kind::kBonferroni:
      return "bonferroni";
    case Kind::kUniform:
      return "uniform";
    case Kind::kQuantile:
      return "quantile:q=" + format_double(q_) +
             ",omega=" + format_double(omega_);
    case Kind::kTradeoff:
      return "tradeoff:lambda=" + format_double(lambda_);
    case Kind::kExplicit: {
      std::string s = "explicit:";
      for (std::size_t i = 0; i < explicit_.size(); ++i) {
        if (i > 0) s += ',';
        s += format_double(explicit_[i]);
      }
      return s;
    }
  }
  return {};
}

}  // namespace lorenz_rank
