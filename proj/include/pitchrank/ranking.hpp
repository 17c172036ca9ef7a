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

// Role-based rankings and the analyses built on player ratings:
// versatility, rating statistics, goal-weight sweeps and expert concordance.

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pitchrank/rating.hpp"

namespace pitchrank {

using SeriesMap = std::map<std::int64_t, RatingSeries>;

struct RankEntry {
  std::int64_t player_id = 0;
  double r_bar = 0.0;
  std::size_t matches = 0;
};

struct RoleRanking {
  int role = 0;
  std::vector<RankEntry> entries;  // r_bar descending, player_id ascending on ties
  double x_pct = 0.0;
  std::size_t min_matches = 0;

  // 1-based position of the player, if ranked.
  std::optional<std::size_t> position_of(std::int64_t player_id) const;
};

// Role assignments of the matches in a series that carry one.
std::vector<RoleAssignment> role_history(const RatingSeries& series);

// Roles a player holds under the x% rule, or nothing when the player is
// below min_matches.
std::set<int> eligible_roles(const RatingSeries& series, const RatingConfig& config);

RoleRanking build_role_ranking(const SeriesMap& series, int role, const RatingConfig& config);
// One ranking per role in [0, k).
std::vector<RoleRanking> build_role_rankings(const SeriesMap& series, int k,
                                             const RatingConfig& config);

// Every player with at least min_matches matches, in ranking order.
std::vector<RankEntry> overall_ranking(const SeriesMap& series, const RatingConfig& config);

struct VersatilityScore {
  std::int64_t player_id = 0;
  double value = 0.0;
  std::vector<double> frequencies;  // per role, sums to 1
};

// Normalized entropy of the role frequencies; a match with hybrid roles
// splits its unit weight equally among them.
VersatilityScore versatility(std::span<const RoleAssignment> history, int k,
                             std::int64_t player_id = 0);

struct PlayerRatingSummary {
  std::size_t matches = 0;
  std::size_t excellent = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct RatingStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double excellence_threshold = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
  std::size_t excellent = 0;    // ratings above the threshold
  std::size_t within_band = 0;  // ratings inside [band_low, band_high]
  std::map<std::int64_t, PlayerRatingSummary> players;
  // Pearson correlation of per-player mean and std; empty when undefined.
  std::optional<double> mean_std_correlation;
};

RatingStats rating_stats(std::span<const MatchRating> ratings);

struct AlphaCorrelation {
  double alpha = 0.0;
  std::optional<double> overall;
  std::map<int, std::optional<double>> per_role;
};

// Pearson(r_bar, r_bar_star) over players with at least min_matches, with
// r_bar_star replayed for each alpha.
std::vector<AlphaCorrelation> alpha_sweep_correlation(const SeriesMap& series,
                                                      std::span<const double> alphas,
                                                      const RatingConfig& config);

enum class ExpertLabel { first, second, equal };

struct ExpertPair {
  std::int64_t first = 0;
  std::int64_t second = 0;
  std::array<ExpertLabel, 3> labels{};
};

// Whitespace separated lines `player_a player_b l1 l2 l3`, labels in
// {first, second, equal}; `#` starts a comment.
std::vector<ExpertPair> read_expert_pairs(std::istream& in);
void write_expert_pairs(std::span<const ExpertPair> pairs, std::ostream& out);

struct ConcordanceBucket {
  std::size_t min_distance = 0;
  std::optional<std::size_t> max_distance;  // empty = unbounded
  std::size_t evaluated = 0;
  std::size_t agreed = 0;

  std::optional<double> rate() const;
};

struct ConcordanceReport {
  double c_maj = 0.0;
  std::optional<double> c_una;  // empty without unanimous pairs
  std::size_t evaluated = 0;
  std::size_t agreed = 0;
  std::size_t unanimous = 0;
  std::size_t unanimous_agreed = 0;
  std::size_t discarded = 0;
  std::size_t skipped = 0;
  std::array<ConcordanceBucket, 3> buckets;
  std::vector<std::string> warnings;
};

// `positions` maps a player to its 1-based ranking position. Pairs whose
// experts are all "equal" or split first/second/equal are discarded; pairs
// with an unranked player are skipped with a warning.
ConcordanceReport concordance(std::span<const ExpertPair> pairs,
                              const std::map<std::int64_t, std::size_t>& positions);

}  // namespace pitchrank
