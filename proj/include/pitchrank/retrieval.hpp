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

// Zone-tessellated player search: presence vectors over a grid of field
// zones, dot-product query scores and ranking by score times rating.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "pitchrank/event.hpp"

namespace pitchrank {

struct ZoneTessellation {
  int rows = 10;
  int cols = 10;

  int zones() const { return rows * cols; }
  // Cells are half-open except along the upper and right field edges, so
  // (100, 100) falls in the last zone. Zone index is row * cols + col with
  // the row taken from y and the column from x.
  int zone_of(double x, double y) const;
  void validate() const;

  friend bool operator==(const ZoneTessellation&, const ZoneTessellation&) = default;
};

struct PlayerZoneVector {
  std::int64_t player_id = 0;
  std::vector<std::uint64_t> counts;
  std::vector<double> presence;  // counts / total, sums to 1

  std::uint64_t total() const;
};

// Counts the start position of every event.
PlayerZoneVector build_player_zone_vector(std::int64_t player_id, std::span<const Event> events,
                                          const ZoneTessellation& grid);
PlayerZoneVector zone_vector_from_counts(std::int64_t player_id, std::vector<std::uint64_t> counts);

double score_query(std::span<const double> presence, std::span<const double> query);

struct ZoneQuery {
  ZoneTessellation grid;
  std::vector<double> weights;  // one non-negative weight per zone
  std::size_t top_k = 10;
};

// {"grid": {"rows", "cols"}, "zones": [indices] | "weights": [h reals], "top_k"}.
// The grid must equal `expected`.
ZoneQuery parse_zone_query(const nlohmann::json& body, const ZoneTessellation& expected);
ZoneQuery binary_query(const ZoneTessellation& grid, std::span<const int> zones, std::size_t top_k);

struct SearchCandidate {
  std::int64_t player_id = 0;
  std::span<const double> presence;
  double r_bar = 0.0;
};

struct SearchHit {
  std::int64_t player_id = 0;
  double z = 0.0;
  double s = 0.0;
  double r_bar = 0.0;
};

struct SearchResult {
  std::vector<SearchHit> hits;  // z descending, player_id ascending on ties
  std::vector<double> query;
  std::size_t top_k = 0;
};

SearchResult search(const ZoneQuery& query, std::span<const SearchCandidate> candidates);

}  // namespace pitchrank
