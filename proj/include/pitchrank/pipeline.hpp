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

// Offline learning phase, model bundle persistence and the online
// rating/ranking snapshots.

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pitchrank/config.hpp"
#include "pitchrank/features.hpp"
#include "pitchrank/learning.hpp"
#include "pitchrank/ranking.hpp"
#include "pitchrank/rating.hpp"
#include "pitchrank/retrieval.hpp"
#include "pitchrank/roles.hpp"
#include "pitchrank/store.hpp"

namespace pitchrank {

struct ModelBundle {
  static constexpr int kVersion = 1;

  std::uint64_t config_digest = 0;
  NormalizationParams normalization;  // player level
  WeightVector weights;
  EvalReport holdout;
  RoleModel roles;
  // Online-phase settings captured from the configuration.
  double alpha = 0.0;
  double beta = 0.1;
  double delta_s = 0.1;
  double x_pct = 40.0;
  std::size_t min_matches = 10;
  std::size_t min_events_for_role = 3;
  int max_goals = 1;
  ZoneTessellation grid;

  RatingConfig rating_config() const;
  // FNV-1a of the serialized bundle.
  std::uint64_t digest() const;
};

void write_bundle(const ModelBundle& bundle, std::ostream& out);
void write_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle read_bundle(std::istream& in);
ModelBundle read_bundle(const std::filesystem::path& path);

// Centers of every (player, match) with at least `min_events` events.
std::vector<CenterOfPerformance> compute_centers(const EventStore& store, std::size_t min_events);

// Features, weights, then roles. Errors are re-raised with the stage name
// prefixed to the message.
ModelBundle run_learning_phase(const EventStore& store, const PipelineConfig& config);

struct PlayerProfile {
  std::string name;
  std::vector<std::uint64_t> zone_counts;
  std::vector<double> presence;  // zone_counts normalized
  // (date, match_id) of each rated match, parallel to the series.
  std::vector<std::pair<std::string, std::int64_t>> order;
};

struct Snapshot {
  SeriesMap series;
  std::map<std::int64_t, PlayerProfile> profiles;
  std::vector<RoleRanking> rankings;
  std::set<std::int64_t> processed;
  std::uint64_t updates = 0;

  std::vector<MatchRating> ratings() const;
  // Players with at least min_matches rated matches.
  std::vector<SearchCandidate> candidates(std::size_t min_matches) const;
  // 1-based positions in the overall ranking.
  std::map<std::int64_t, std::size_t> overall_positions(const RatingConfig& config) const;
};

// Ratings of every outfield participant of one match.
std::vector<MatchRating> rate_match(const EventStore& store, const ModelBundle& bundle,
                                    std::int64_t match_id);

// Batch route: every match of the store, each player's series replayed in
// chronological order.
Snapshot build_snapshot(const EventStore& store, const ModelBundle& bundle);

// Adds one match to a copy of `previous`. Throws not_found for a match
// missing from the store and duplicate for an already processed match.
// Only rankings of roles held by the match participants are rebuilt.
Snapshot run_online_update(const EventStore& store, const ModelBundle& bundle,
                           const Snapshot& previous, std::int64_t match_id);

// Tab-separated exports.
void write_ratings(const Snapshot& snapshot, std::ostream& out);
void write_ranking(const RoleRanking& ranking, const Snapshot& snapshot, std::ostream& out);

}  // namespace pitchrank
