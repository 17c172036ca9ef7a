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

#include "pitchrank/store.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <tuple>

#include "pitchrank/error.hpp"

namespace pitchrank {
namespace {

using nlohmann::json;

std::int64_t require_id(const json& record, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    auto it = record.find(name);
    if (it == record.end()) continue;
    if (it->is_number_integer()) return it->get<std::int64_t>();
    if (it->is_string()) {
      try {
        return std::stoll(it->get<std::string>());
      } catch (const std::exception&) {
      }
    }
    throw SchemaError(name, "expected an integer");
  }
  throw SchemaError(*names.begin(), "missing required field");
}

std::int64_t optional_id(const json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) return 0;
  if (!it->is_number_integer()) throw SchemaError(name, "expected an integer");
  return it->get<std::int64_t>();
}

std::string optional_text(const json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_object() && it->contains("name") && (*it)["name"].is_string()) {
    return (*it)["name"].get<std::string>();
  }
  throw SchemaError(name, "expected a string");
}

TeamResult parse_team_result(const json& entry, std::int64_t fallback_id) {
  if (!entry.is_object()) throw SchemaError("teamsData", "expected team objects");
  TeamResult team;
  team.team_id = entry.contains("teamId") ? require_id(entry, {"teamId"}) : fallback_id;
  auto side = entry.find("side");
  if (side == entry.end() || !side->is_string()) throw SchemaError("teamsData.side", "missing side");
  if (*side == "home") {
    team.side = Side::home;
  } else if (*side == "away") {
    team.side = Side::away;
  } else {
    throw ValidationError("teamsData.side must be 'home' or 'away'");
  }
  auto score = entry.find("score");
  if (score == entry.end() || !score->is_number_integer()) {
    throw SchemaError("teamsData.score", "expected an integer");
  }
  team.score = score->get<int>();
  if (team.score < 0) throw ValidationError("teamsData.score must be non-negative");
  return team;
}

bool match_chrono_less(const MatchRecord& a, const MatchRecord& b) {
  return std::tie(a.date, a.match_id) < std::tie(b.date, b.match_id);
}

bool storage_less(const Event& a, const Event& b) {
  return std::tie(a.match_id, a.player_id, a.period, a.event_sec, a.event_id) <
         std::tie(b.match_id, b.player_id, b.period, b.event_sec, b.event_id);
}

}  // namespace

int MatchRecord::outcome(std::int64_t team_id) const {
  if (team_id == home.team_id) return home.score > away.score ? 1 : 0;
  if (team_id == away.team_id) return away.score > home.score ? 1 : 0;
  throw Error("not_found", "team " + std::to_string(team_id) + " did not play match " +
                               std::to_string(match_id));
}

bool MatchRecord::involves(std::int64_t team_id) const {
  return team_id == home.team_id || team_id == away.team_id;
}

MatchRecord parse_match(const json& record) {
  if (!record.is_object()) throw SchemaError("<record>", "expected a JSON object");
  MatchRecord match;
  match.match_id = require_id(record, {"matchId", "wyId"});
  match.competition_id = require_id(record, {"competitionId"});
  match.season_id = require_id(record, {"seasonId"});
  match.date = optional_text(record, "date");
  if (match.date.empty()) match.date = optional_text(record, "dateutc");

  auto teams = record.find("teamsData");
  if (teams == record.end()) throw SchemaError("teamsData", "missing required field");
  std::vector<TeamResult> results;
  if (teams->is_object()) {
    for (const auto& [key, entry] : teams->items()) {
      std::int64_t id = 0;
      try {
        id = std::stoll(key);
      } catch (const std::exception&) {
        throw SchemaError("teamsData", "keys must be team ids");
      }
      results.push_back(parse_team_result(entry, id));
    }
  } else if (teams->is_array()) {
    for (const auto& entry : *teams) results.push_back(parse_team_result(entry, 0));
  } else {
    throw SchemaError("teamsData", "expected an object or an array");
  }
  if (results.size() != 2 || results[0].side == results[1].side ||
      results[0].team_id == results[1].team_id) {
    throw ValidationError("match " + std::to_string(match.match_id) +
                          " must list exactly one home and one away team");
  }
  if (results[0].side == Side::away) std::swap(results[0], results[1]);
  match.home = results[0];
  match.away = results[1];
  return match;
}

nlohmann::ordered_json match_to_json(const MatchRecord& match) {
  nlohmann::ordered_json out;
  out["matchId"] = match.match_id;
  out["competitionId"] = match.competition_id;
  out["seasonId"] = match.season_id;
  if (!match.date.empty()) out["date"] = match.date;
  nlohmann::ordered_json teams = nlohmann::ordered_json::object();
  for (const auto* t : {&match.home, &match.away}) {
    teams[std::to_string(t->team_id)] = {{"teamId", t->team_id},
                                         {"side", t->side == Side::home ? "home" : "away"},
                                         {"score", t->score}};
  }
  out["teamsData"] = std::move(teams);
  return out;
}

PlayerRecord parse_player(const json& record) {
  if (!record.is_object()) throw SchemaError("<record>", "expected a JSON object");
  PlayerRecord player;
  player.player_id = require_id(record, {"playerId", "wyId"});
  player.name = optional_text(record, "shortName");
  player.club_id = optional_id(record, "currentTeamId");
  auto role = record.find("role");
  if (role != record.end() && !role->is_null()) {
    std::string label;
    if (role->is_string()) {
      label = role->get<std::string>();
    } else if (role->is_object()) {
      if (role->contains("code2") && (*role)["code2"].is_string()) {
        label = (*role)["code2"].get<std::string>();
      } else if (role->contains("name") && (*role)["name"].is_string()) {
        label = (*role)["name"].get<std::string>();
      }
    } else {
      throw SchemaError("role", "expected a string or an object");
    }
    player.is_goalkeeper = label == "GK" || label == "Goalkeeper" || label == "goalkeeper";
  }
  return player;
}

nlohmann::ordered_json player_to_json(const PlayerRecord& player) {
  nlohmann::ordered_json out;
  out["playerId"] = player.player_id;
  out["shortName"] = player.name;
  out["role"] = player.is_goalkeeper ? "Goalkeeper" : "Outfield";
  if (player.club_id != 0) out["currentTeamId"] = player.club_id;
  return out;
}

CompetitionRecord parse_competition(const json& record) {
  if (!record.is_object()) throw SchemaError("<record>", "expected a JSON object");
  CompetitionRecord competition;
  competition.competition_id = require_id(record, {"competitionId", "wyId"});
  competition.name = optional_text(record, "name");
  competition.area = optional_text(record, "area");
  competition.type = optional_text(record, "type");
  return competition;
}

nlohmann::ordered_json competition_to_json(const CompetitionRecord& competition) {
  return {{"competitionId", competition.competition_id},
          {"name", competition.name},
          {"area", competition.area},
          {"type", competition.type}};
}

std::vector<json> read_json_records(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<json> records;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return records;
  if (text[first] == '[') {
    json all;
    try {
      all = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError("malformed JSON array", e.byte);
    }
    for (auto& r : all) records.push_back(std::move(r));
    return records;
  }
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        records.push_back(json::parse(line));
      } catch (const json::parse_error& e) {
        throw ParseError("malformed JSON record", start + (e.byte > 0 ? e.byte - 1 : 0));
      }
    }
    start = end + 1;
  }
  return records;
}

EventStore EventStore::build(std::vector<Event> events, std::vector<MatchRecord> matches,
                             std::vector<PlayerRecord> players,
                             std::vector<CompetitionRecord> competitions,
                             const LoadOptions& options, LoadReport* report) {
  EventStore store;
  std::vector<std::int64_t> duplicates;
  for (auto& p : players) {
    if (!store.players_.emplace(p.player_id, p).second) duplicates.push_back(p.player_id);
  }
  if (!duplicates.empty()) throw IngestError("duplicate player ids", duplicates);
  for (auto& c : competitions) store.competitions_.emplace(c.competition_id, std::move(c));

  std::sort(matches.begin(), matches.end(), match_chrono_less);
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (!store.match_pos_.emplace(matches[i].match_id, i).second) {
      duplicates.push_back(matches[i].match_id);
    }
  }
  if (!duplicates.empty()) throw IngestError("duplicate match ids", duplicates);
  store.matches_ = std::move(matches);

  std::set<std::int64_t> dangling_players;
  std::set<std::int64_t> dangling_matches;
  std::vector<std::int64_t> foreign_team_events;
  for (const auto& e : events) {
    const auto pos = store.match_pos_.find(e.match_id);
    if (pos == store.match_pos_.end()) {
      dangling_matches.insert(e.match_id);
    } else if (!store.matches_[pos->second].involves(e.team_id)) {
      foreign_team_events.push_back(e.event_id);
    }
    if (!store.players_.contains(e.player_id)) dangling_players.insert(e.player_id);
  }
  if (!dangling_matches.empty()) {
    throw IngestError("events reference unknown matches",
                      {dangling_matches.begin(), dangling_matches.end()});
  }
  if (!dangling_players.empty()) {
    throw IngestError("events reference unknown players",
                      {dangling_players.begin(), dangling_players.end()});
  }
  if (!foreign_team_events.empty()) {
    throw IngestError("events reference a team that did not play the match", foreign_team_events);
  }

  if (!options.keep_goalkeepers) {
    const auto removed = std::erase_if(events, [&](const Event& e) {
      return store.players_.at(e.player_id).is_goalkeeper;
    });
    if (report) report->goalkeeper_events_removed += removed;
  }

  std::sort(events.begin(), events.end(), storage_less);
  {
    std::vector<std::int64_t> ids;
    ids.reserve(events.size());
    for (const auto& e : events) ids.push_back(e.event_id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i) {
      if (ids[i] == ids[i - 1]) duplicates.push_back(ids[i]);
    }
    std::sort(duplicates.begin(), duplicates.end());
    duplicates.erase(std::unique(duplicates.begin(), duplicates.end()), duplicates.end());
  }
  if (!duplicates.empty()) throw IngestError("duplicate event ids", duplicates);

  store.events_ = std::move(events);
  std::size_t i = 0;
  while (i < store.events_.size()) {
    std::size_t j = i;
    const auto match = store.events_[i].match_id;
    while (j < store.events_.size() && store.events_[j].match_id == match) ++j;
    store.match_slices_[match] = {i, j};
    std::size_t k = i;
    while (k < j) {
      std::size_t l = k;
      const auto player = store.events_[k].player_id;
      while (l < j && store.events_[l].player_id == player) ++l;
      store.slices_[{player, match}] = {k, l};
      k = l;
    }
    i = j;
  }
  return store;
}

std::span<const Event> EventStore::events_of_match(std::int64_t match_id) const {
  auto it = match_slices_.find(match_id);
  if (it == match_slices_.end()) return {};
  return std::span<const Event>(events_).subspan(it->second.first,
                                                 it->second.second - it->second.first);
}

std::span<const Event> EventStore::events_of(std::int64_t player_id, std::int64_t match_id) const {
  auto it = slices_.find({player_id, match_id});
  if (it == slices_.end()) return {};
  return std::span<const Event>(events_).subspan(it->second.first,
                                                 it->second.second - it->second.first);
}

const MatchRecord* EventStore::find_match(std::int64_t match_id) const {
  auto it = match_pos_.find(match_id);
  return it == match_pos_.end() ? nullptr : &matches_[it->second];
}

const PlayerRecord* EventStore::find_player(std::int64_t player_id) const {
  auto it = players_.find(player_id);
  return it == players_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::int64_t, std::int64_t>> EventStore::participants(
    std::int64_t match_id) const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  const auto events = events_of_match(match_id);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i == 0 || events[i].player_id != events[i - 1].player_id) {
      out.emplace_back(events[i].player_id, events[i].team_id);
    }
  }
  return out;
}

int EventStore::goals(std::int64_t player_id, std::int64_t match_id) const {
  int count = 0;
  for (const auto& e : events_of(player_id, match_id)) count += e.has_tag(tag::goal) ? 1 : 0;
  return count;
}

std::size_t EventStore::chrono_index(std::int64_t match_id) const {
  auto it = match_pos_.find(match_id);
  if (it == match_pos_.end()) {
    throw Error("not_found", "match " + std::to_string(match_id) + " not in store");
  }
  return it->second;
}

EventStore load_corpus(const CorpusSources& sources, const LoadOptions& options,
                       LoadReport* report) {
  if (!sources.events || !sources.matches || !sources.players) {
    throw Error("invalid_argument", "events, matches and players sources are required");
  }
  LoadReport local;
  LoadReport& rep = report ? *report : local;

  std::vector<Event> events;
  for (const auto& record : read_json_records(*sources.events)) {
    ++rep.events_read;
    try {
      events.push_back(parse_event(record));
    } catch (const MissingPositionError&) {
      if (options.strict) throw;
      ++rep.dropped_missing_position;
    } catch (const UnsupportedEventError&) {
      ++rep.skipped_unsupported;
    }
  }
  std::vector<MatchRecord> matches;
  for (const auto& record : read_json_records(*sources.matches)) {
    matches.push_back(parse_match(record));
  }
  std::vector<PlayerRecord> players;
  for (const auto& record : read_json_records(*sources.players)) {
    players.push_back(parse_player(record));
  }
  std::vector<CompetitionRecord> competitions;
  if (sources.competitions) {
    for (const auto& record : read_json_records(*sources.competitions)) {
      competitions.push_back(parse_competition(record));
    }
  }
  return EventStore::build(std::move(events), std::move(matches), std::move(players),
                           std::move(competitions), options, &rep);
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

EventStore load_corpus(const CorpusPaths& paths, const LoadOptions& options, LoadReport* report) {
  auto events = open_input(paths.events);
  auto matches = open_input(paths.matches);
  auto players = open_input(paths.players);
  std::ifstream competitions;
  CorpusSources sources{&events, &matches, &players, nullptr};
  if (!paths.competitions.empty()) {
    competitions = open_input(paths.competitions);
    sources.competitions = &competitions;
  }
  return load_corpus(sources, options, report);
}

void save_store(const EventStore& store, std::ostream& out) {
  // One JSON document; events keep their external encoding.
  out << "{\"format\":\"pitchrank-store\",\"version\":1,\n\"competitions\":[";
  bool first = true;
  for (const auto& [id, c] : store.competitions()) {
    out << (first ? "\n" : ",\n") << competition_to_json(c).dump();
    first = false;
  }
  out << "],\n\"players\":[";
  first = true;
  for (const auto& [id, p] : store.players()) {
    out << (first ? "\n" : ",\n") << player_to_json(p).dump();
    first = false;
  }
  out << "],\n\"matches\":[";
  first = true;
  for (const auto& m : store.matches()) {
    out << (first ? "\n" : ",\n") << match_to_json(m).dump();
    first = false;
  }
  out << "],\n\"events\":[";
  first = true;
  for (const auto& e : store.events()) {
    out << (first ? "\n" : ",\n") << serialize_event(e);
    first = false;
  }
  out << "]}\n";
}

void save_store(const EventStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  save_store(store, out);
}

EventStore load_store(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed store file", e.byte);
  }
  if (!doc.is_object() || doc.value("format", "") != "pitchrank-store") {
    throw ValidationError("not a pitchrank store file");
  }
  if (doc.value("version", 0) != 1) throw ValidationError("unsupported store version");
  std::vector<Event> events;
  for (const auto& r : doc.at("events")) events.push_back(parse_event(r));
  std::vector<MatchRecord> matches;
  for (const auto& r : doc.at("matches")) matches.push_back(parse_match(r));
  std::vector<PlayerRecord> players;
  for (const auto& r : doc.at("players")) {
    auto p = parse_player(r);
    players.push_back(std::move(p));
  }
  std::vector<CompetitionRecord> competitions;
  for (const auto& r : doc.at("competitions")) competitions.push_back(parse_competition(r));
  LoadOptions keep_all;
  keep_all.keep_goalkeepers = true;
  return EventStore::build(std::move(events), std::move(matches), std::move(players),
                           std::move(competitions), keep_all);
}

EventStore load_store(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_store(in);
}

}  // namespace pitchrank
