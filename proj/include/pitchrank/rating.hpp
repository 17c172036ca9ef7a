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

// Match ratings, goal-adjusted ratings and exponentially smoothed player
// ratings.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pitchrank/learning.hpp"
#include "pitchrank/roles.hpp"

namespace pitchrank {

struct RatingConfig {
  double alpha = 0.0;  // goal weight
  double beta = 0.1;   // smoothing factor
  // Bounds of the raw weighted sum over [0,1]^n.
  double lower = 0.0;
  double upper = 0.0;
  std::size_t min_matches = 10;
  double x_pct = 40.0;

  // Fills lower/upper from the weights; throws when every weight is zero.
  static RatingConfig from_weights(const WeightVector& weights, double alpha = 0.0,
                                   double beta = 0.1);
  void validate() const;
};

// (sum of negative weights, sum of positive weights).
std::pair<double, double> rating_bounds(std::span<const double> weights);

// (S - L) / (U - L) with S = w.x, clamped to [0, 1].
double rate_performance(std::span<const double> normalized, const WeightVector& weights,
                        const RatingConfig& config);

// alpha * goals / max_goals + (1 - alpha) * r; goals beyond max_goals count
// as max_goals.
double adjusted_rating(double r, double goals, double max_goals, double alpha);

// First value initializes; afterwards beta * r_new + (1 - beta) * previous.
double ewma_update(std::optional<double> previous, double r_new, double beta);

struct MatchRating {
  std::int64_t player_id = 0;
  std::int64_t match_id = 0;
  std::int64_t team_id = 0;
  double r = 0.0;
  double r_star = 0.0;
  double norm_goals = 0.0;
  int goals = 0;
  std::optional<RoleAssignment> role;
  // Player rating after this match.
  double r_bar = 0.0;
  double r_bar_star = 0.0;
};

// Chronological match ratings of one player.
struct RatingSeries {
  std::int64_t player_id = 0;
  std::vector<MatchRating> matches;

  bool empty() const { return matches.empty(); }
  std::size_t size() const { return matches.size(); }
  double r_bar() const;
  double r_bar_star() const;
};

// Appends a rating and sets its running r_bar / r_bar_star.
void append_rating(RatingSeries& series, MatchRating rating, double beta);
// Recomputes every running value from position `from` on.
void replay_series(RatingSeries& series, double beta, std::size_t from = 0);

}  // namespace pitchrank
