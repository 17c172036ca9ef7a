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

// Event records of the soccer-log format and their JSON encoding.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace pitchrank {

enum class EventType { pass, foul, shot, duel, free_kick, offside, touch };

enum class Subtype {
  // duel
  air_duel,
  ground_attacking_duel,
  ground_defending_duel,
  ground_loose_ball_duel,
  // foul
  normal_foul,
  hand_foul,
  late_card_foul,
  out_of_game_foul,
  protest,
  simulation,
  time_lost_foul,
  violent_foul,
  // free kick
  corner,
  normal_free_kick,
  free_kick_cross,
  free_kick_shot,
  goal_kick,
  penalty,
  throw_in,
  // touch ("others on the ball")
  acceleration,
  clearance,
  simple_touch,
  // pass
  cross,
  hand_pass,
  head_pass,
  high_pass,
  launch,
  simple_pass,
  smart_pass,
  // shot
  shot,
};

enum class Period { first_half, second_half, extra_first, extra_second, penalties };

// Tag identifiers of the soccer-log vocabulary. The vocabulary is open:
// unknown identifiers are carried through untouched.
namespace tag {
inline constexpr int goal = 101;
inline constexpr int own_goal = 102;
inline constexpr int opportunity = 201;
inline constexpr int assist = 301;
inline constexpr int key_pass = 302;
inline constexpr int feint = 1301;
inline constexpr int missed_ball = 1302;
inline constexpr int interception = 1401;
inline constexpr int clearance = 1501;
inline constexpr int red_card = 1701;
inline constexpr int yellow_card = 1702;
inline constexpr int second_yellow_card = 1703;
inline constexpr int accurate = 1801;
inline constexpr int not_accurate = 1802;
inline constexpr int counter_attack = 1901;
inline constexpr int dangerous_ball_lost = 2001;
inline constexpr int blocked = 2101;
}  // namespace tag

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

struct Event {
  std::int64_t event_id = 0;
  EventType type = EventType::pass;
  std::optional<Subtype> subtype;
  // Source subtype code, kept verbatim for round-tripping.
  std::optional<int> subtype_code;
  std::vector<int> tags;  // sorted, unique
  std::int64_t player_id = 0;
  std::int64_t team_id = 0;
  std::int64_t match_id = 0;
  Period period = Period::first_half;
  double event_sec = 0.0;
  Position position;
  std::optional<Position> end_position;

  bool has_tag(int id) const;

  friend bool operator==(const Event&, const Event&) = default;
};

// Match-absolute ordering: (period, event_sec, event_id).
bool chronological_less(const Event& a, const Event& b);

std::string_view to_string(EventType type);
std::string_view to_string(Subtype subtype);
std::string_view to_string(Period period);
EventType event_type_of(Subtype subtype);
// Default source code of a subtype (e.g. 85 for a simple pass).
int subtype_code_of(Subtype subtype);

// Case-insensitive lookups accepting the canonical names and common aliases
// ("Others on the ball" / "touch", "dribbles" for attacking duels, ...).
std::optional<EventType> parse_event_type(std::string_view name);
std::optional<Subtype> parse_subtype(EventType type, std::string_view name);
Period parse_period(std::string_view label);

// Parses one event object. Throws SchemaError for missing/mistyped fields,
// ValidationError for illegal values, MissingPositionError when no
// coordinates are present and UnsupportedEventError for event types the
// engine does not model.
Event parse_event(const nlohmann::json& record);
// Same, from text; malformed JSON raises ParseError with the byte offset.
Event parse_event(std::string_view text);

nlohmann::ordered_json event_to_json(const Event& event);
std::string serialize_event(const Event& event);

}  // namespace pitchrank
