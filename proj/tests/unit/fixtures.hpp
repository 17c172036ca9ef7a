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

// Builders shared by the unit suites.

#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "pitchrank/event.hpp"
#include "pitchrank/store.hpp"

namespace pitchrank::testing {

inline Event make_event(std::int64_t id, Subtype subtype, std::initializer_list<int> tags,
                        std::int64_t player, std::int64_t team, std::int64_t match, double sec = 0.0,
                        double x = 50.0, double y = 50.0, Period period = Period::first_half) {
  Event e;
  e.event_id = id;
  e.type = event_type_of(subtype);
  e.subtype = subtype;
  e.subtype_code = subtype_code_of(subtype);
  e.tags = tags;
  std::sort(e.tags.begin(), e.tags.end());
  e.player_id = player;
  e.team_id = team;
  e.match_id = match;
  e.event_sec = sec;
  e.position = {x, y};
  e.period = period;
  return e;
}

inline MatchRecord make_match(std::int64_t id, std::int64_t home, std::int64_t away, int home_score,
                              int away_score, std::int64_t competition = 1,
                              std::string date = "2018-01-01 12:00:00") {
  MatchRecord m;
  m.match_id = id;
  m.competition_id = competition;
  m.season_id = 2018;
  m.date = std::move(date);
  m.home = {home, Side::home, home_score};
  m.away = {away, Side::away, away_score};
  return m;
}

inline PlayerRecord make_player(std::int64_t id, std::int64_t club, bool goalkeeper = false) {
  return {id, "P" + std::to_string(id), goalkeeper, club};
}

}  // namespace pitchrank::testing
