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

#include "pitchrank/event.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <tuple>

#include "pitchrank/error.hpp"

namespace pitchrank {
namespace {

using nlohmann::json;

struct SubtypeInfo {
  Subtype subtype;
  EventType type;
  std::string_view name;
  int code;
  std::array<std::string_view, 3> aliases;
};

// Canonical names and codes follow the soccer-log provider's vocabulary.
constexpr std::array<SubtypeInfo, 30> kSubtypes = {{
    {Subtype::air_duel, EventType::duel, "Air duel", 10, {"air duel", "", ""}},
    {Subtype::ground_attacking_duel, EventType::duel, "Ground attacking duel", 11, {"dribbles", "dribble", ""}},
    {Subtype::ground_defending_duel, EventType::duel, "Ground defending duel", 12, {"tackles", "tackle", ""}},
    {Subtype::ground_loose_ball_duel, EventType::duel, "Ground loose ball duel", 13, {"ground loose ball", "", ""}},
    {Subtype::normal_foul, EventType::foul, "Foul", 20, {"normal foul", "", ""}},
    {Subtype::hand_foul, EventType::foul, "Hand foul", 21, {"", "", ""}},
    {Subtype::late_card_foul, EventType::foul, "Late card foul", 22, {"", "", ""}},
    {Subtype::out_of_game_foul, EventType::foul, "Out of game foul", 23, {"", "", ""}},
    {Subtype::protest, EventType::foul, "Protest", 24, {"protest foul", "", ""}},
    {Subtype::simulation, EventType::foul, "Simulation", 25, {"simulation foul", "", ""}},
    {Subtype::time_lost_foul, EventType::foul, "Time lost foul", 26, {"", "", ""}},
    {Subtype::violent_foul, EventType::foul, "Violent Foul", 27, {"", "", ""}},
    {Subtype::corner, EventType::free_kick, "Corner", 30, {"corner free kick", "", ""}},
    {Subtype::normal_free_kick, EventType::free_kick, "Free Kick", 31, {"simple kick", "normal free kick", ""}},
    {Subtype::free_kick_cross, EventType::free_kick, "Free kick cross", 32, {"cross free kick", "", ""}},
    {Subtype::free_kick_shot, EventType::free_kick, "Free kick shot", 33, {"shot", "shot free kick", ""}},
    {Subtype::goal_kick, EventType::free_kick, "Goal kick", 34, {"", "", ""}},
    {Subtype::penalty, EventType::free_kick, "Penalty", 35, {"penalty free kick", "", ""}},
    {Subtype::throw_in, EventType::free_kick, "Throw in", 36, {"throw in free kick", "", ""}},
    {Subtype::acceleration, EventType::touch, "Acceleration", 70, {"accelleration", "", ""}},
    {Subtype::clearance, EventType::touch, "Clearance", 71, {"", "", ""}},
    {Subtype::simple_touch, EventType::touch, "Touch", 72, {"simple touch", "", ""}},
    {Subtype::cross, EventType::pass, "Cross", 80, {"cross pass", "", ""}},
    {Subtype::hand_pass, EventType::pass, "Hand pass", 81, {"", "", ""}},
    {Subtype::head_pass, EventType::pass, "Head pass", 82, {"", "", ""}},
    {Subtype::high_pass, EventType::pass, "High pass", 83, {"", "", ""}},
    {Subtype::launch, EventType::pass, "Launch", 84, {"launch pass", "", ""}},
    {Subtype::simple_pass, EventType::pass, "Simple pass", 85, {"", "", ""}},
    {Subtype::smart_pass, EventType::pass, "Smart pass", 86, {"", "", ""}},
    {Subtype::shot, EventType::shot, "Shot", 100, {"", "", ""}},
}};

struct TypeInfo {
  EventType type;
  std::string_view name;
  std::array<std::string_view, 2> aliases;
};

constexpr std::array<TypeInfo, 7> kTypes = {{
    {EventType::pass, "Pass", {"", ""}},
    {EventType::foul, "Foul", {"", ""}},
    {EventType::shot, "Shot", {"", ""}},
    {EventType::duel, "Duel", {"", ""}},
    {EventType::free_kick, "Free Kick", {"free_kick", "freekick"}},
    {EventType::offside, "Offside", {"", ""}},
    {EventType::touch, "Others on the ball", {"touch", "others_on_the_ball"}},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

const SubtypeInfo& info(Subtype subtype) {
  return kSubtypes[static_cast<std::size_t>(subtype)];
}

const json& require(const json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end()) throw SchemaError(field, "missing required field");
  return *it;
}

std::int64_t require_int(const json& record, const char* field) {
  const auto& value = require(record, field);
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (std::isfinite(d) && d == std::floor(d)) return static_cast<std::int64_t>(d);
  }
  throw SchemaError(field, "expected an integer");
}

double read_coordinate(const json& point, const char* axis) {
  auto it = point.find(axis);
  if (it == point.end() || !it->is_number()) {
    throw SchemaError(std::string("positions.") + axis, "expected a number");
  }
  const double value = it->get<double>();
  if (!(value >= 0.0 && value <= 100.0)) {
    throw ValidationError(std::string("position ") + axis + "=" + it->dump() +
                          " outside [0, 100]");
  }
  return value;
}

json coordinate_json(double value) {
  if (value == std::floor(value) && std::abs(value) < 1e15) return static_cast<std::int64_t>(value);
  return value;
}

}  // namespace

bool Event::has_tag(int id) const { return std::binary_search(tags.begin(), tags.end(), id); }

bool chronological_less(const Event& a, const Event& b) {
  return std::tie(a.period, a.event_sec, a.event_id) < std::tie(b.period, b.event_sec, b.event_id);
}

std::string_view to_string(EventType type) { return kTypes[static_cast<std::size_t>(type)].name; }

std::string_view to_string(Subtype subtype) { return info(subtype).name; }

std::string_view to_string(Period period) {
  switch (period) {
    case Period::first_half: return "1H";
    case Period::second_half: return "2H";
    case Period::extra_first: return "E1";
    case Period::extra_second: return "E2";
    case Period::penalties: return "P";
  }
  return "1H";
}

EventType event_type_of(Subtype subtype) { return info(subtype).type; }

int subtype_code_of(Subtype subtype) { return info(subtype).code; }

std::optional<EventType> parse_event_type(std::string_view name) {
  for (const auto& t : kTypes) {
    if (iequals(name, t.name)) return t.type;
    for (auto alias : t.aliases) {
      if (!alias.empty() && iequals(name, alias)) return t.type;
    }
  }
  return std::nullopt;
}

std::optional<Subtype> parse_subtype(EventType type, std::string_view name) {
  for (const auto& s : kSubtypes) {
    if (s.type != type) continue;
    if (iequals(name, s.name)) return s.subtype;
    for (auto alias : s.aliases) {
      if (!alias.empty() && iequals(name, alias)) return s.subtype;
    }
  }
  return std::nullopt;
}

Period parse_period(std::string_view label) {
  if (label == "1H") return Period::first_half;
  if (label == "2H") return Period::second_half;
  if (label == "E1") return Period::extra_first;
  if (label == "E2") return Period::extra_second;
  if (label == "P") return Period::penalties;
  throw ValidationError("unknown match period '" + std::string(label) + "'");
}

Event parse_event(const json& record) {
  if (!record.is_object()) throw SchemaError("<record>", "expected a JSON object");

  Event event;
  event.event_id = require_int(record, "id");
  if (event.event_id < 0) throw ValidationError("event id must be non-negative");

  const auto& name = require(record, "eventName");
  if (!name.is_string()) throw SchemaError("eventName", "expected a string");
  const auto type = parse_event_type(name.get<std::string>());
  if (!type) throw UnsupportedEventError(name.get<std::string>());
  event.type = *type;

  if (auto it = record.find("subEventName"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError("subEventName", "expected a string");
    const auto sub = it->get<std::string>();
    if (!sub.empty()) {
      event.subtype = parse_subtype(event.type, sub);
      if (!event.subtype) {
        throw ValidationError("subtype '" + sub + "' is not legal for event type '" +
                              std::string(to_string(event.type)) + "'");
      }
    }
  }
  if (auto it = record.find("subEventId"); it != record.end() && !it->is_null()) {
    if (it->is_number_integer()) {
      event.subtype_code = it->get<int>();
    } else if (it->is_string()) {
      const auto text = it->get<std::string>();
      if (!text.empty()) {
        try {
          event.subtype_code = std::stoi(text);
        } catch (const std::exception&) {
          throw SchemaError("subEventId", "expected an integer");
        }
      }
    } else {
      throw SchemaError("subEventId", "expected an integer");
    }
  }

  const auto& sec = require(record, "eventSec");
  if (!sec.is_number()) throw SchemaError("eventSec", "expected a number");
  event.event_sec = sec.get<double>();
  if (!std::isfinite(event.event_sec) || event.event_sec < 0.0) {
    throw ValidationError("eventSec must be finite and non-negative");
  }

  event.player_id = require_int(record, "playerId");
  event.match_id = require_int(record, "matchId");
  event.team_id = require_int(record, "teamId");

  if (auto it = record.find("matchPeriod"); it != record.end()) {
    if (!it->is_string()) throw SchemaError("matchPeriod", "expected a string");
    event.period = parse_period(it->get<std::string>());
  }

  const auto& tags = require(record, "tags");
  if (!tags.is_array()) throw SchemaError("tags", "expected an array");
  for (const auto& t : tags) {
    if (!t.is_object() || !t.contains("id") || !t["id"].is_number_integer()) {
      throw SchemaError("tags.id", "expected objects with an integer 'id'");
    }
    event.tags.push_back(t["id"].get<int>());
  }
  std::sort(event.tags.begin(), event.tags.end());
  event.tags.erase(std::unique(event.tags.begin(), event.tags.end()), event.tags.end());

  const auto& positions = require(record, "positions");
  if (!positions.is_array()) throw SchemaError("positions", "expected an array");
  if (positions.empty()) {
    throw MissingPositionError("event " + std::to_string(event.event_id) + " has no position");
  }
  for (std::size_t i = 0; i < positions.size() && i < 2; ++i) {
    const auto& p = positions[i];
    if (!p.is_object()) throw SchemaError("positions", "expected objects with x and y");
    Position pos{read_coordinate(p, "x"), read_coordinate(p, "y")};
    if (i == 0) {
      event.position = pos;
    } else {
      event.end_position = pos;
    }
  }
  return event;
}

Event parse_event(std::string_view text) {
  json record;
  try {
    record = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed event record", e.byte);
  }
  return parse_event(record);
}

nlohmann::ordered_json event_to_json(const Event& event) {
  nlohmann::ordered_json out;
  out["id"] = event.event_id;
  out["eventName"] = std::string(to_string(event.type));
  out["eventSec"] = event.event_sec;
  out["playerId"] = event.player_id;
  out["matchId"] = event.match_id;
  out["teamId"] = event.team_id;
  auto positions = nlohmann::ordered_json::array();
  positions.push_back({{"x", coordinate_json(event.position.x)}, {"y", coordinate_json(event.position.y)}});
  if (event.end_position) {
    positions.push_back({{"x", coordinate_json(event.end_position->x)},
                         {"y", coordinate_json(event.end_position->y)}});
  }
  out["positions"] = std::move(positions);
  if (event.subtype_code) {
    out["subEventId"] = *event.subtype_code;
  } else {
    out["subEventId"] = "";
  }
  out["subEventName"] = event.subtype ? std::string(to_string(*event.subtype)) : std::string();
  auto tags = nlohmann::ordered_json::array();
  for (int t : event.tags) tags.push_back({{"id", t}});
  out["tags"] = std::move(tags);
  if (event.period != Period::first_half) out["matchPeriod"] = std::string(to_string(event.period));
  return out;
}

std::string serialize_event(const Event& event) { return event_to_json(event).dump(); }

}  // namespace pitchrank
