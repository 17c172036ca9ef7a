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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "pitchrank/corpus_stats.hpp"
#include "pitchrank/error.hpp"
#include "pitchrank/event.hpp"
#include "pitchrank/store.hpp"
#include "pitchrank/text_io.hpp"

namespace pitchrank {
namespace {

using testing::make_event;
using testing::make_match;
using testing::make_player;

constexpr const char* kPassRecord =
    R"({"id": 253668302, "eventName": "Pass", "eventSec": 2.41, "playerId": 3344, )"
    R"("matchId": 2576335, "teamId": 3161, "positions": [{"x": 49, "y": 50}], )"
    R"("subEventId": 85, "subEventName": "Simple pass", "tags": [{"id": 1801}]})";

TEST(ParseEvent, PassRecordMapsEveryField) {
  const Event e = parse_event(std::string_view(kPassRecord));
  EXPECT_EQ(e.event_id, 253668302);
  EXPECT_EQ(e.type, EventType::pass);
  ASSERT_TRUE(e.subtype);
  EXPECT_EQ(*e.subtype, Subtype::simple_pass);
  EXPECT_EQ(e.subtype_code, 85);
  EXPECT_EQ(e.tags, std::vector<int>{tag::accurate});
  EXPECT_EQ(e.player_id, 3344);
  EXPECT_EQ(e.match_id, 2576335);
  EXPECT_EQ(e.team_id, 3161);
  EXPECT_DOUBLE_EQ(e.event_sec, 2.41);
  EXPECT_EQ(e.position, (Position{49, 50}));
  EXPECT_FALSE(e.end_position);
  EXPECT_EQ(e.period, Period::first_half);
}

TEST(ParseEvent, SerializationReproducesTheRecord) {
  const auto original = nlohmann::json::parse(kPassRecord);
  const auto e = parse_event(original);
  EXPECT_EQ(nlohmann::json::parse(serialize_event(e)), original);
  EXPECT_EQ(parse_event(std::string_view(serialize_event(e))), e);
}

TEST(ParseEvent, OutOfRangePositionIsRejected) {
  auto j = nlohmann::json::parse(kPassRecord);
  j["positions"] = nlohmann::json::array({{{"x", 150}, {"y", 50}}});
  EXPECT_THROW(parse_event(j), ValidationError);
  j["positions"] = nlohmann::json::array({{{"x", 10}, {"y", -1}}});
  EXPECT_THROW(parse_event(j), ValidationError);
}

TEST(ParseEvent, AirDuelRoundTripsFieldByField) {
  auto j = nlohmann::json::parse(kPassRecord);
  j["eventName"] = "Duel";
  j["subEventName"] = "air duel";
  j["subEventId"] = 10;
  const auto e = parse_event(j);
  EXPECT_EQ(e.type, EventType::duel);
  EXPECT_EQ(e.subtype, Subtype::air_duel);
  EXPECT_EQ(e.tags, std::vector<int>{tag::accurate});
  EXPECT_EQ(parse_event(std::string_view(serialize_event(e))), e);
}

TEST(ParseEvent, MalformedTextReportsByteOffset) {
  try {
    parse_event(std::string_view(R"({"id": 1, "eventName": )"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), "parse_error");
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
}

TEST(ParseEvent, MissingFieldIsNamed) {
  for (const char* field : {"id", "eventName", "eventSec", "playerId", "matchId", "teamId", "tags",
                            "positions"}) {
    auto j = nlohmann::json::parse(kPassRecord);
    j.erase(field);
    try {
      parse_event(j);
      FAIL() << "expected SchemaError for " << field;
    } catch (const SchemaError& e) {
      EXPECT_EQ(e.field(), field);
    }
  }
}

TEST(ParseEvent, EmptyPositionsAndUnsupportedTypes) {
  auto j = nlohmann::json::parse(kPassRecord);
  j["positions"] = nlohmann::json::array();
  EXPECT_THROW(parse_event(j), MissingPositionError);
  j = nlohmann::json::parse(kPassRecord);
  j["eventName"] = "Goalkeeper leaving line";
  EXPECT_THROW(parse_event(j), UnsupportedEventError);
  j = nlohmann::json::parse(kPassRecord);
  j["subEventName"] = "Air duel";
  EXPECT_THROW(parse_event(j), ValidationError);
}

TEST(ParseEvent, UnknownTagsArePreserved) {
  auto j = nlohmann::json::parse(kPassRecord);
  j["tags"] = nlohmann::json::array({{{"id", 9999}}, {{"id", 1801}}});
  const auto e = parse_event(j);
  EXPECT_EQ(e.tags, (std::vector<int>{1801, 9999}));
  EXPECT_TRUE(e.has_tag(9999));
}

TEST(ParseEvent, SecondPositionBecomesEndPosition) {
  auto j = nlohmann::json::parse(kPassRecord);
  j["positions"] = nlohmann::json::array({{{"x", 49}, {"y", 50}}, {{"x", 60}, {"y", 40.5}}});
  j["matchPeriod"] = "2H";
  const auto e = parse_event(j);
  ASSERT_TRUE(e.end_position);
  EXPECT_EQ(*e.end_position, (Position{60, 40.5}));
  EXPECT_EQ(e.period, Period::second_half);
  EXPECT_EQ(parse_event(std::string_view(serialize_event(e))), e);
}

TEST(ParseEvent, RandomEventsRoundTrip) {
  std::mt19937_64 rng(11);
  const Subtype subtypes[] = {Subtype::air_duel,   Subtype::hand_foul, Subtype::corner,
                              Subtype::clearance,  Subtype::cross,     Subtype::smart_pass,
                              Subtype::shot,       Subtype::penalty,   Subtype::violent_foul};
  for (int i = 0; i < 200; ++i) {
    auto e = make_event(static_cast<std::int64_t>(rng() % 1000000), subtypes[rng() % 9],
                        {static_cast<int>(1801 + rng() % 2), 1901}, 10 + static_cast<int>(rng() % 5), 1,
                        7, static_cast<double>(rng() % 270000) / 100.0,
                        static_cast<double>(rng() % 10001) / 100.0, static_cast<double>(rng() % 101),
                        static_cast<Period>(rng() % 5));
    EXPECT_EQ(parse_event(std::string_view(serialize_event(e))), e);
  }
}

TEST(Chronology, OrdersByPeriodThenSecondThenId) {
  auto a = make_event(5, Subtype::simple_pass, {}, 1, 1, 1, 10.0);
  auto b = make_event(4, Subtype::simple_pass, {}, 1, 1, 1, 10.0);
  auto c = make_event(1, Subtype::simple_pass, {}, 1, 1, 1, 1.0, 50, 50, Period::second_half);
  EXPECT_TRUE(chronological_less(b, a));
  EXPECT_TRUE(chronological_less(a, c));
  EXPECT_FALSE(chronological_less(c, b));
}

struct TwoMatchCorpus {
  std::vector<Event> events;
  std::vector<MatchRecord> matches;
  std::vector<PlayerRecord> players;
};

// Two matches of ten events; players 1-2 play for team 10, 3-4 for team 20,
// player 9 is team 10's goalkeeper with five events in match 100.
TwoMatchCorpus two_matches(bool with_goalkeeper) {
  TwoMatchCorpus c;
  c.matches = {make_match(100, 10, 20, 1, 0, 1, "2018-01-01 12:00:00"),
               make_match(101, 20, 10, 2, 2, 1, "2018-01-08 12:00:00")};
  for (auto id : {1, 2}) c.players.push_back(make_player(id, 10));
  for (auto id : {3, 4}) c.players.push_back(make_player(id, 20));
  c.players.push_back(make_player(9, 10, true));
  std::int64_t id = 1;
  for (std::int64_t m : {100, 101}) {
    for (int i = 0; i < 10; ++i) {
      const std::int64_t player = 1 + i % 4;
      c.events.push_back(make_event(id++, Subtype::simple_pass, {tag::accurate}, player,
                                    player <= 2 ? 10 : 20, m, 2.0 * i));
    }
  }
  if (with_goalkeeper) {
    for (int i = 0; i < 5; ++i) {
      c.events.push_back(make_event(id++, Subtype::simple_pass, {tag::accurate}, 9, 10, 100, 1.0 + i));
    }
  }
  return c;
}

TEST(EventStore, EmptyInputsGiveAnEmptyStore) {
  const auto store = EventStore::build({}, {}, {});
  EXPECT_TRUE(store.empty());
  EXPECT_EQ(store.events().size(), 0u);
  EXPECT_EQ(store.matches().size(), 0u);
  EXPECT_THROW(corpus_stats(store), Error);
}

TEST(EventStore, IndexesMatchesAndPlayerSlices) {
  auto c = two_matches(false);
  const auto store = EventStore::build(c.events, c.matches, c.players);
  EXPECT_EQ(store.events().size(), 20u);
  EXPECT_EQ(store.events_of_match(100).size(), 10u);
  EXPECT_EQ(store.events_of_match(101).size(), 10u);
  EXPECT_EQ(store.events_of(1, 100).size(), 3u);
  EXPECT_EQ(store.events_of(4, 101).size(), 2u);
  EXPECT_TRUE(store.events_of(1, 999).empty());
  EXPECT_EQ(store.participants(100).size(), 4u);
  EXPECT_EQ(store.matches().front().match_id, 100);
  EXPECT_EQ(store.chrono_index(101), 1u);
  EXPECT_EQ(store.find_match(101)->outcome(10), 0);
  EXPECT_EQ(store.find_match(100)->outcome(10), 1);
  EXPECT_EQ(store.find_match(100)->outcome(20), 0);
}

TEST(EventStore, GoalkeeperEventsAreExcludedByDefault) {
  auto c = two_matches(true);
  LoadReport report;
  const auto store = EventStore::build(c.events, c.matches, c.players, {}, {}, &report);
  EXPECT_EQ(report.goalkeeper_events_removed, 5u);
  EXPECT_TRUE(store.events_of(9, 100).empty());
  LoadOptions keep;
  keep.keep_goalkeepers = true;
  const auto kept = EventStore::build(c.events, c.matches, c.players, {}, keep);
  EXPECT_EQ(kept.events_of(9, 100).size(), 5u);
}

TEST(EventStore, DanglingReferencesListTheIds) {
  auto c = two_matches(false);
  c.events.push_back(make_event(900, Subtype::simple_pass, {}, 77, 10, 100));
  try {
    EventStore::build(c.events, c.matches, c.players);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_EQ(e.ids(), std::vector<std::int64_t>{77});
    EXPECT_NE(std::string(e.what()).find("77"), std::string::npos);
  }
  c.events.push_back(make_event(901, Subtype::simple_pass, {}, 1, 10, 555));
  try {
    EventStore::build(c.events, c.matches, c.players);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_EQ(e.ids(), std::vector<std::int64_t>{555});
  }
}

TEST(EventStore, DuplicateEventIdsAreRejected) {
  auto c = two_matches(false);
  c.events.push_back(c.events.front());
  EXPECT_THROW(EventStore::build(c.events, c.matches, c.players), IngestError);
}

TEST(EventStore, IngestionIsOrderIndependent) {
  auto c = two_matches(true);
  const auto reference = EventStore::build(c.events, c.matches, c.players);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(c.events.begin(), c.events.end(), rng);
    std::shuffle(c.matches.begin(), c.matches.end(), rng);
    std::shuffle(c.players.begin(), c.players.end(), rng);
    EXPECT_TRUE(EventStore::build(c.events, c.matches, c.players) == reference);
  }
}

TEST(EventStore, GoalsCountGoalTags) {
  auto c = two_matches(false);
  c.events.push_back(make_event(700, Subtype::shot, {tag::goal, tag::accurate}, 1, 10, 100, 80.0));
  const auto store = EventStore::build(c.events, c.matches, c.players);
  EXPECT_EQ(store.goals(1, 100), 1);
  EXPECT_EQ(store.goals(2, 100), 0);
}

TEST(LoadCorpus, ReadsArraysAndLinesAndHandlesMissingPositions) {
  auto c = two_matches(false);
  std::ostringstream events, matches, players;
  for (const auto& e : c.events) events << serialize_event(e) << "\n";
  events << R"({"id": 999, "eventName": "Free Kick", "subEventName": "Corner", "eventSec": 1.0, )"
            R"("playerId": 1, "matchId": 100, "teamId": 10, "positions": [], "tags": []})"
         << "\n";
  events << R"({"id": 998, "eventName": "Interruption", "subEventName": "Ball out of the field", )"
            R"("eventSec": 1.0, "playerId": 1, "matchId": 100, "teamId": 10, )"
            R"("positions": [{"x": 0, "y": 0}], "tags": []})"
         << "\n";
  nlohmann::ordered_json ms = nlohmann::ordered_json::array();
  for (const auto& m : c.matches) ms.push_back(match_to_json(m));
  matches << ms.dump();
  nlohmann::ordered_json ps = nlohmann::ordered_json::array();
  for (const auto& p : c.players) ps.push_back(player_to_json(p));
  players << ps.dump();

  std::istringstream ev(events.str()), ma(matches.str()), pl(players.str());
  LoadReport report;
  const auto store = load_corpus(CorpusSources{&ev, &ma, &pl, nullptr}, {}, &report);
  EXPECT_EQ(store.events().size(), 20u);
  EXPECT_EQ(report.dropped_missing_position, 1u);
  EXPECT_EQ(report.skipped_unsupported, 1u);
  EXPECT_EQ(store, EventStore::build(c.events, c.matches, c.players));

  std::istringstream ev2(events.str()), ma2(matches.str()), pl2(players.str());
  LoadOptions strict;
  strict.strict = true;
  EXPECT_THROW(load_corpus(CorpusSources{&ev2, &ma2, &pl2, nullptr}, strict), MissingPositionError);
}

TEST(LoadCorpus, MalformedFileReportsOffset) {
  std::istringstream in("[{\"id\": 1}, {\"id\": ]");
  EXPECT_THROW(read_json_records(in), ParseError);
}

TEST(LoadCorpus, ProviderStyleRecordsAreAccepted) {
  const auto m = parse_match(nlohmann::json::parse(
      R"({"wyId": 5, "competitionId": 3, "seasonId": 9, "dateutc": "2018-06-14 15:00:00",
          "teamsData": {"16521": {"teamId": 16521, "side": "home", "score": 5},
                        "14358": {"teamId": 14358, "side": "away", "score": 0}}})"));
  EXPECT_EQ(m.match_id, 5);
  EXPECT_EQ(m.home.team_id, 16521);
  EXPECT_EQ(m.outcome(16521), 1);
  const auto p = parse_player(nlohmann::json::parse(
      R"({"wyId": 8, "shortName": "A. Keeper", "currentTeamId": 4, "role": {"code2": "GK", "name": "Goalkeeper"}})"));
  EXPECT_TRUE(p.is_goalkeeper);
  EXPECT_EQ(p.name, "A. Keeper");
  EXPECT_THROW(parse_match(nlohmann::json::parse(R"({"matchId": 1, "teamsData": {}})")), Error);
}

TEST(StoreFile, SaveLoadRoundTrip) {
  auto c = two_matches(true);
  LoadOptions keep;
  keep.keep_goalkeepers = true;
  const auto store = EventStore::build(c.events, c.matches, c.players,
                                       {{1, "League", "Area", "club"}}, keep);
  std::stringstream buf;
  save_store(store, buf);
  EXPECT_EQ(load_store(buf), store);
}

TEST(CorpusStats, TwoMatchesOfTenEvents) {
  auto c = two_matches(false);
  const auto stats = corpus_stats(EventStore::build(c.events, c.matches, c.players));
  EXPECT_EQ(stats.events, 20u);
  EXPECT_EQ(stats.matches, 2u);
  EXPECT_DOUBLE_EQ(stats.events_per_match.mean, 10.0);
  EXPECT_DOUBLE_EQ(stats.events_per_match.stddev, 0.0);
  EXPECT_DOUBLE_EQ(stats.inter_event_time.mean, 2.0);
  EXPECT_DOUBLE_EQ(stats.type_frequency[static_cast<int>(EventType::pass)], 1.0);
}

TEST(CorpusStats, InterEventTimesFromHandEnumeration) {
  std::vector<Event> events = {make_event(1, Subtype::simple_pass, {}, 1, 10, 100, 0.0),
                               make_event(2, Subtype::air_duel, {}, 3, 20, 100, 2.0),
                               make_event(3, Subtype::shot, {}, 1, 10, 100, 4.0)};
  const auto store = EventStore::build(events, {make_match(100, 10, 20, 0, 0)},
                                       {make_player(1, 10), make_player(3, 20)});
  const auto stats = corpus_stats(store);
  EXPECT_EQ(stats.inter_event_time.count, 2u);
  EXPECT_DOUBLE_EQ(stats.inter_event_time.mean, 2.0);
  EXPECT_DOUBLE_EQ(stats.inter_event_time.stddev, 0.0);
}

TEST(CorpusStats, TypeFrequenciesSumToOne) {
  std::mt19937_64 rng(5);
  const Subtype subtypes[] = {Subtype::air_duel, Subtype::hand_foul, Subtype::corner,
                              Subtype::clearance, Subtype::cross, Subtype::shot};
  std::vector<Event> events;
  for (int i = 0; i < 997; ++i) {
    events.push_back(make_event(i + 1, subtypes[rng() % 6], {}, 1 + static_cast<int>(rng() % 2), 10,
                                100, static_cast<double>(rng() % 2700)));
  }
  const auto stats = corpus_stats(EventStore::build(
      events, {make_match(100, 10, 20, 0, 0)}, {make_player(1, 10), make_player(2, 10)}));
  double sum = 0.0;
  for (double f : stats.type_frequency) sum += f;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(TextIo, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    EXPECT_EQ(parse_double(format_double(v), "v"), v);
  }
  EXPECT_THROW(parse_double("1.5x", "v"), Error);
  EXPECT_THROW(parse_int("12a", "v"), Error);
}

TEST(TextIo, HashAndHex) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(parse_hex64(hex64(0x0123456789abcdefULL)), 0x0123456789abcdefULL);
}

TEST(TextIo, KvReaderChecksHeader) {
  std::istringstream bad("other-format 1\nkey 1\n");
  EXPECT_THROW(KvReader(bad, "pitchrank-weights", 1), ValidationError);
  std::istringstream good("pitchrank-weights 1\n# comment\n\nscope all\n");
  KvReader reader(good, "pitchrank-weights", 1);
  EXPECT_EQ(reader.expect("scope").fields.at(0), "all");
  EXPECT_FALSE(reader.next());
}

}  // namespace
}  // namespace pitchrank
