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

// Feature catalog, per-player performance vectors and team aggregates.

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pitchrank/event.hpp"
#include "pitchrank/store.hpp"

namespace pitchrank {

// One (event type, subtype, tag) combination counted as a feature.
struct FeatureDescriptor {
  EventType type;
  Subtype subtype;
  int tag;
  std::string name;
};

class FeatureCatalog {
 public:
  explicit FeatureCatalog(std::vector<FeatureDescriptor> descriptors);

  std::size_t size() const { return descriptors_.size(); }
  const FeatureDescriptor& operator[](std::size_t i) const { return descriptors_[i]; }
  const std::vector<FeatureDescriptor>& descriptors() const { return descriptors_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  // Index of the descriptor matching (type, subtype, tag), if any.
  std::optional<std::size_t> find(EventType type, Subtype subtype, int tag) const;
  // Stable digest of the ordered descriptor list.
  std::uint64_t hash() const { return hash_; }

 private:
  std::vector<FeatureDescriptor> descriptors_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
  std::uint64_t hash_ = 0;
};

// The 76-feature catalog over duels, fouls, free kicks, touches, passes and
// shots. The goal tag is never a feature.
const FeatureCatalog& default_catalog();
FeatureCatalog build_feature_catalog();

struct PerformanceVector {
  std::int64_t player_id = 0;
  std::int64_t match_id = 0;
  std::int64_t team_id = 0;
  std::vector<double> values;
  int goals_scored = 0;
};

struct TeamPerformance {
  std::int64_t team_id = 0;
  std::int64_t match_id = 0;
  std::vector<double> values;
  int outcome = 0;
  std::vector<std::int64_t> roster;
};

struct NormalizationParams {
  std::uint64_t catalog_hash = 0;
  std::vector<double> min;
  std::vector<double> max;
  // Largest number of goals scored by one player in one match.
  int max_goals = 0;
};

// Counts the events matching each descriptor. All events must share one
// (player, match); the goal tag only feeds `goals_scored`.
PerformanceVector extract_raw_performance(std::span<const Event> events,
                                          const FeatureCatalog& catalog);

// Raw vectors for every (player, match) with events in the store.
std::vector<PerformanceVector> extract_all(const EventStore& store, const FeatureCatalog& catalog);

NormalizationParams fit_normalization(std::span<const PerformanceVector> corpus,
                                      const FeatureCatalog& catalog);
NormalizationParams fit_normalization(std::span<const TeamPerformance> corpus,
                                      const FeatureCatalog& catalog);

// Min-max scaling into [0, 1]; values outside the fitted range are clipped
// and constant features map to 0.
std::vector<double> apply_normalization(std::span<const double> raw,
                                        const NormalizationParams& params);
PerformanceVector apply_normalization(const PerformanceVector& raw,
                                      const NormalizationParams& params);

// Component-wise sum of a roster's raw vectors.
TeamPerformance aggregate_team(std::span<const PerformanceVector> roster, int outcome);
// One TeamPerformance per (match, team) present in `vectors`.
std::vector<TeamPerformance> aggregate_teams(const EventStore& store,
                                             std::span<const PerformanceVector> vectors);

void write_normalization(const NormalizationParams& params, const FeatureCatalog& catalog,
                         std::ostream& out);
NormalizationParams read_normalization(std::istream& in, const FeatureCatalog& catalog);

// Tab-separated vectors file: player_id, match_id, team_id, goals, then one
// column per feature (header carries the feature names).
void write_vectors(std::span<const PerformanceVector> vectors, const FeatureCatalog& catalog,
                   std::ostream& out);
std::vector<PerformanceVector> read_vectors(std::istream& in, const FeatureCatalog& catalog);

}  // namespace pitchrank
