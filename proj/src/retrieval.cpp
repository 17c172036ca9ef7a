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

#include "pitchrank/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pitchrank/error.hpp"

namespace pitchrank {
namespace {

int cell(double coordinate, int cells) {
  const auto c = static_cast<int>(std::floor(coordinate / 100.0 * cells));
  return std::clamp(c, 0, cells - 1);
}

}  // namespace

void ZoneTessellation::validate() const {
  if (rows < 1 || cols < 1 || rows > 1000 || cols > 1000) {
    throw Error("invalid_argument", "grid rows and cols must lie in [1, 1000]");
  }
}

int ZoneTessellation::zone_of(double x, double y) const {
  if (!(x >= 0.0 && x <= 100.0 && y >= 0.0 && y <= 100.0)) {
    throw ValidationError("position outside the field");
  }
  return cell(y, rows) * cols + cell(x, cols);
}

std::uint64_t PlayerZoneVector::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

PlayerZoneVector zone_vector_from_counts(std::int64_t player_id, std::vector<std::uint64_t> counts) {
  PlayerZoneVector v;
  v.player_id = player_id;
  v.counts = std::move(counts);
  const auto total = v.total();
  if (total == 0) throw Error("invalid_argument", "player has no positioned event");
  v.presence.resize(v.counts.size());
  for (std::size_t i = 0; i < v.counts.size(); ++i) {
    v.presence[i] = static_cast<double>(v.counts[i]) / static_cast<double>(total);
  }
  return v;
}

PlayerZoneVector build_player_zone_vector(std::int64_t player_id, std::span<const Event> events,
                                          const ZoneTessellation& grid) {
  grid.validate();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(grid.zones()), 0);
  for (const auto& e : events) {
    if (e.player_id != player_id) throw Error("contract_error", "event of another player");
    ++counts[static_cast<std::size_t>(grid.zone_of(e.position.x, e.position.y))];
  }
  return zone_vector_from_counts(player_id, std::move(counts));
}

double score_query(std::span<const double> presence, std::span<const double> query) {
  if (presence.size() != query.size()) {
    throw Error("invalid_argument", "query has " + std::to_string(query.size()) +
                                        " zones, player vector has " +
                                        std::to_string(presence.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < query.size(); ++i) s += presence[i] * query[i];
  return s;
}

ZoneQuery binary_query(const ZoneTessellation& grid, std::span<const int> zones, std::size_t top_k) {
  grid.validate();
  ZoneQuery q;
  q.grid = grid;
  q.top_k = top_k;
  q.weights.assign(static_cast<std::size_t>(grid.zones()), 0.0);
  for (int z : zones) {
    if (z < 0 || z >= grid.zones()) {
      throw Error("invalid_argument", "zone " + std::to_string(z) + " outside the grid");
    }
    q.weights[static_cast<std::size_t>(z)] = 1.0;
  }
  return q;
}

ZoneQuery parse_zone_query(const nlohmann::json& body, const ZoneTessellation& expected) {
  if (!body.is_object()) throw SchemaError("query", "must be an object");
  ZoneTessellation grid = expected;
  if (body.contains("grid")) {
    const auto& g = body.at("grid");
    if (!g.is_object() || !g.contains("rows") || !g.contains("cols") ||
        !g.at("rows").is_number_integer() || !g.at("cols").is_number_integer()) {
      throw SchemaError("grid", "must be {rows, cols} with integers");
    }
    grid.rows = g.at("rows").get<int>();
    grid.cols = g.at("cols").get<int>();
    if (!(grid == expected)) {
      throw SchemaError("grid", "expected " + std::to_string(expected.rows) + "x" +
                                    std::to_string(expected.cols));
    }
  }
  std::size_t top_k = 10;
  if (body.contains("top_k")) {
    const auto& k = body.at("top_k");
    if (!k.is_number_integer() || k.get<long long>() < 1) {
      throw SchemaError("top_k", "must be a positive integer");
    }
    top_k = k.get<std::size_t>();
  }
  const bool has_zones = body.contains("zones");
  const bool has_weights = body.contains("weights");
  if (has_zones == has_weights) throw SchemaError("query", "give exactly one of zones or weights");
  if (has_zones) {
    const auto& zs = body.at("zones");
    if (!zs.is_array()) throw SchemaError("zones", "must be an array of zone indices");
    std::vector<int> zones;
    for (const auto& z : zs) {
      if (!z.is_number_integer()) throw SchemaError("zones", "must be an array of zone indices");
      zones.push_back(z.get<int>());
    }
    return binary_query(grid, zones, top_k);
  }
  const auto& ws = body.at("weights");
  if (!ws.is_array() || ws.size() != static_cast<std::size_t>(grid.zones())) {
    throw SchemaError("weights", "must hold " + std::to_string(grid.zones()) + " numbers");
  }
  ZoneQuery q;
  q.grid = grid;
  q.top_k = top_k;
  for (const auto& w : ws) {
    if (!w.is_number()) throw SchemaError("weights", "must hold numbers");
    q.weights.push_back(w.get<double>());
  }
  return q;
}

SearchResult search(const ZoneQuery& query, std::span<const SearchCandidate> candidates) {
  if (query.top_k == 0) throw Error("invalid_argument", "top_k must be positive");
  bool positive = false;
  for (double w : query.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error("invalid_argument", "query weights must be finite and >= 0");
    positive = positive || w > 0.0;
  }
  if (!positive) throw Error("empty_query", "query selects no zone");

  SearchResult result;
  result.query = query.weights;
  result.top_k = query.top_k;
  result.hits.reserve(candidates.size());
  for (const auto& c : candidates) {
    const double s = score_query(c.presence, query.weights);
    result.hits.push_back({c.player_id, s * c.r_bar, s, c.r_bar});
  }
  const auto before = [](const SearchHit& a, const SearchHit& b) {
    if (a.z != b.z) return a.z > b.z;
    return a.player_id < b.player_id;
  };
  const auto keep = std::min(query.top_k, result.hits.size());
  std::partial_sort(result.hits.begin(), result.hits.begin() + static_cast<std::ptrdiff_t>(keep),
                    result.hits.end(), before);
  result.hits.resize(keep);
  return result;
}

}  // namespace pitchrank
