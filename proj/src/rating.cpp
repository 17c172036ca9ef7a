// Copyright 2026 The pitchrank Authors
//
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

#include "pitchrank/rating.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "pitchrank/error.hpp"

namespace pitchrank {
namespace {

void check_unit(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error("invalid_argument", std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

std::pair<double, double> rating_bounds(std::span<const double> weights) {
  double lower = 0.0, upper = 0.0;
  for (double w : weights) {
    if (w < 0.0) lower += w;
    else upper += w;
  }
  return {lower, upper};
}

RatingConfig RatingConfig::from_weights(const WeightVector& weights, double alpha, double beta) {
  RatingConfig config;
  config.alpha = alpha;
  config.beta = beta;
  std::tie(config.lower, config.upper) = rating_bounds(weights.weights);
  config.validate();
  return config;
}

void RatingConfig::validate() const {
  check_unit(alpha, "alpha");
  check_unit(beta, "beta");
  if (!(x_pct >= 0.0 && x_pct <= 100.0)) throw Error("invalid_argument", "x_pct must lie in [0, 100]");
  if (!(lower <= 0.0 && upper >= 0.0 && lower < upper)) {
    throw Error("invalid_argument", "rating bounds need L <= 0 <= U and L < U");
  }
}

double rate_performance(std::span<const double> normalized, const WeightVector& weights,
                        const RatingConfig& config) {
  if (normalized.size() != weights.weights.size()) {
    throw Error("catalog_mismatch", "vector has " + std::to_string(normalized.size()) +
                                        " features, weights have " +
                                        std::to_string(weights.weights.size()));
  }
  if (!(config.lower < config.upper)) throw Error("invalid_argument", "rating bounds need L < U");
  double s = 0.0;
  for (std::size_t i = 0; i < normalized.size(); ++i) s += weights.weights[i] * normalized[i];
  return std::clamp((s - config.lower) / (config.upper - config.lower), 0.0, 1.0);
}

double adjusted_rating(double r, double goals, double max_goals, double alpha) {
  check_unit(alpha, "alpha");
  if (!(max_goals >= 1.0)) throw Error("invalid_argument", "max_goals must be at least 1");
  if (!(goals >= 0.0)) throw Error("invalid_argument", "goals must be non-negative");
  const double norm_goals = std::min(goals / max_goals, 1.0);
  return alpha * norm_goals + (1.0 - alpha) * r;
}

double ewma_update(std::optional<double> previous, double r_new, double beta) {
  check_unit(beta, "beta");
  check_unit(r_new, "rating");
  if (!previous) return r_new;
  return beta * r_new + (1.0 - beta) * *previous;
}

double RatingSeries::r_bar() const {
  if (matches.empty()) throw Error("undefined", "player has no rated match");
  return matches.back().r_bar;
}

double RatingSeries::r_bar_star() const {
  if (matches.empty()) throw Error("undefined", "player has no rated match");
  return matches.back().r_bar_star;
}

void append_rating(RatingSeries& series, MatchRating rating, double beta) {
  std::optional<double> prev, prev_star;
  if (!series.matches.empty()) {
    prev = series.matches.back().r_bar;
    prev_star = series.matches.back().r_bar_star;
  }
  rating.r_bar = ewma_update(prev, rating.r, beta);
  rating.r_bar_star = ewma_update(prev_star, rating.r_star, beta);
  series.matches.push_back(std::move(rating));
}

void replay_series(RatingSeries& series, double beta, std::size_t from) {
  for (std::size_t i = from; i < series.matches.size(); ++i) {
    auto& m = series.matches[i];
    std::optional<double> prev, prev_star;
    if (i > 0) {
      prev = series.matches[i - 1].r_bar;
      prev_star = series.matches[i - 1].r_bar_star;
    }
    m.r_bar = ewma_update(prev, m.r, beta);
    m.r_bar_star = ewma_update(prev_star, m.r_star, beta);
  }
}

}  // namespace pitchrank
