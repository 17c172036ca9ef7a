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

// Match, player and competition records plus the indexed event store.

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pitchrank/event.hpp"

namespace pitchrank {

enum class Side { home, away };

struct TeamResult {
  std::int64_t team_id = 0;
  Side side = Side::home;
  int score = 0;

  friend bool operator==(const TeamResult&, const TeamResult&) = default;
};

struct MatchRecord {
  std::int64_t match_id = 0;
  std::int64_t competition_id = 0;
  std::int64_t season_id = 0;
  // Kick-off timestamp as text ("2018-05-20 18:45:00"); empty when unknown.
  // Matches are ordered chronologically by (date, match_id).
  std::string date;
  TeamResult home;
  TeamResult away;

  // o_T: 1 for a victory of `team_id`, 0 for a draw or a defeat.
  int outcome(std::int64_t team_id) const;
  bool involves(std::int64_t team_id) const;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct PlayerRecord {
  std::int64_t player_id = 0;
  std::string name;
  bool is_goalkeeper = false;
  std::int64_t club_id = 0;

  friend bool operator==(const PlayerRecord&, const PlayerRecord&) = default;
};

struct CompetitionRecord {
  std::int64_t competition_id = 0;
  std::string name;
  std::string area;
  std::string type;

  friend bool operator==(const CompetitionRecord&, const CompetitionRecord&) = default;
};

struct LoadOptions {
  bool keep_goalkeepers = false;
  // Strict mode rejects events without a position instead of dropping them.
  bool strict = false;
};

struct LoadReport {
  std::size_t events_read = 0;
  std::size_t dropped_missing_position = 0;
  std::size_t skipped_unsupported = 0;
  std::size_t goalkeeper_events_removed = 0;
};

// Immutable, indexed collection of a corpus. Events are stored sorted by
// (match_id, player_id, period, event_sec, event_id) so that the events of
// one player in one match, and of one match, are contiguous.
class EventStore {
 public:
  EventStore() = default;

  // Validates referential integrity and builds the indexes. Throws
  // IngestError listing dangling player/match ids.
  static EventStore build(std::vector<Event> events, std::vector<MatchRecord> matches,
                          std::vector<PlayerRecord> players,
                          std::vector<CompetitionRecord> competitions = {},
                          const LoadOptions& options = {}, LoadReport* report = nullptr);

  std::span<const Event> events() const { return events_; }
  std::span<const Event> events_of_match(std::int64_t match_id) const;
  std::span<const Event> events_of(std::int64_t player_id, std::int64_t match_id) const;

  // Matches in chronological order.
  const std::vector<MatchRecord>& matches() const { return matches_; }
  const MatchRecord* find_match(std::int64_t match_id) const;
  const PlayerRecord* find_player(std::int64_t player_id) const;
  const std::map<std::int64_t, PlayerRecord>& players() const { return players_; }
  const std::map<std::int64_t, CompetitionRecord>& competitions() const { return competitions_; }

  // Players with at least one event in the match, with their team.
  std::vector<std::pair<std::int64_t, std::int64_t>> participants(std::int64_t match_id) const;
  // Goals scored by the player in the match (events carrying the goal tag).
  int goals(std::int64_t player_id, std::int64_t match_id) const;
  // Position of the match in the chronological order.
  std::size_t chrono_index(std::int64_t match_id) const;

  bool empty() const { return events_.empty() && matches_.empty(); }

  friend bool operator==(const EventStore& a, const EventStore& b) {
    return a.events_ == b.events_ && a.matches_ == b.matches_ && a.players_ == b.players_ &&
           a.competitions_ == b.competitions_;
  }

 private:
  std::vector<Event> events_;
  std::vector<MatchRecord> matches_;
  std::map<std::int64_t, PlayerRecord> players_;
  std::map<std::int64_t, CompetitionRecord> competitions_;
  std::map<std::int64_t, std::size_t> match_pos_;
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> match_slices_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::pair<std::size_t, std::size_t>> slices_;
};

MatchRecord parse_match(const nlohmann::json& record);
nlohmann::ordered_json match_to_json(const MatchRecord& match);
PlayerRecord parse_player(const nlohmann::json& record);
nlohmann::ordered_json player_to_json(const PlayerRecord& player);
CompetitionRecord parse_competition(const nlohmann::json& record);
nlohmann::ordered_json competition_to_json(const CompetitionRecord& competition);

// Reads a file holding either one JSON array of objects or one object per
// line. Malformed text raises ParseError with the byte offset in the stream.
std::vector<nlohmann::json> read_json_records(std::istream& in);

struct CorpusSources {
  std::istream* events = nullptr;
  std::istream* matches = nullptr;
  std::istream* players = nullptr;
  std::istream* competitions = nullptr;  // optional
};

EventStore load_corpus(const CorpusSources& sources, const LoadOptions& options = {},
                       LoadReport* report = nullptr);

struct CorpusPaths {
  std::filesystem::path events;
  std::filesystem::path matches;
  std::filesystem::path players;
  std::filesystem::path competitions;  // optional
};

EventStore load_corpus(const CorpusPaths& paths, const LoadOptions& options = {},
                       LoadReport* report = nullptr);

// Single-file persistence of an ingested store.
void save_store(const EventStore& store, std::ostream& out);
void save_store(const EventStore& store, const std::filesystem::path& path);
EventStore load_store(std::istream& in);
EventStore load_store(const std::filesystem::path& path);

}  // namespace pitchrank
