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

#include "pitchrank/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "pitchrank/error.hpp"
#include "pitchrank/features.hpp"
#include "pitchrank/learning.hpp"

namespace pitchrank {
namespace {

double base_rate(const FeatureDescriptor& d) {
  if (d.tag == tag::red_card || d.tag == tag::second_yellow_card) return 0.15;
  switch (d.type) {
    case EventType::pass: return 3.0;
    case EventType::duel: return 2.0;
    case EventType::touch: return 1.0;
    case EventType::shot: return 1.0;
    case EventType::free_kick: return 0.5;
    case EventType::foul: return 0.35;
    case EventType::offside: return 0.3;
  }
  return 1.0;
}

std::string match_date(int index) {
  using namespace std::chrono;
  const sys_days day = sys_days{year{2018} / January / 6} + days{index / 4};
  const year_month_day ymd{day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:00:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                12 + 2 * (index % 4));
  return buf;
}

double clip_coordinate(double v) { return std::clamp(std::round(v), 0.0, 100.0); }

struct Squad {
  std::int64_t team_id = 0;
  std::int64_t competition_id = 0;
  std::vector<std::int64_t> players;  // players[0] is the goalkeeper
};

}  // namespace

EventStore SyntheticCorpus::store(const LoadOptions& options) const {
  return EventStore::build(events, matches, players, competitions, options);
}

std::vector<Point> planted_role_centers() {
  std::vector<Point> out;
  for (double y : {20.0, 50.0, 80.0}) {
    for (double x : {25.0, 50.0, 75.0}) {
      if (x == 50.0 && y == 50.0) continue;
      out.push_back({x, y});
    }
  }
  return out;
}

SyntheticCorpus generate_corpus(const SyntheticConfig& config) {
  if (config.competitions < 1 || config.teams_per_competition < 2 || config.players_per_team < 2 ||
      config.matches < 1 || !(config.events_per_player > 0.0) || !(config.style_shape > 0.0) ||
      !(config.win_quantile > 0.0 && config.win_quantile < 1.0)) {
    throw Error("invalid_argument", "synthetic corpus configuration out of range");
  }
  const auto& catalog = default_catalog();
  const auto shot_accurate = catalog.find(EventType::shot, Subtype::shot, tag::accurate);
  if (!shot_accurate) throw Error("contract_error", "catalog lacks accurate shots");

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SyntheticCorpus corpus;
  corpus.role_centers = planted_role_centers();
  const int roles = static_cast<int>(corpus.role_centers.size());

  // Distinct planted weights spread over [-1, 1].
  const auto n = catalog.size();
  corpus.planted_weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    corpus.planted_weights[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  std::shuffle(corpus.planted_weights.begin(), corpus.planted_weights.end(), rng);

  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = base_rate(catalog[i]);

  std::vector<Squad> squads;
  std::int64_t next_player = 10001;
  for (int c = 0; c < config.competitions; ++c) {
    const std::int64_t comp_id = 100 + c;
    corpus.competitions.push_back({comp_id, "Synthetic League " + std::to_string(c + 1), "Synthland",
                                   "club"});
    for (int t = 0; t < config.teams_per_competition; ++t) {
      Squad squad;
      squad.team_id = 1000 + c * 100 + t;
      squad.competition_id = comp_id;
      for (int p = 0; p < config.players_per_team; ++p) {
        const std::int64_t id = next_player++;
        squad.players.push_back(id);
        PlayerRecord record;
        record.player_id = id;
        record.name = "Player " + std::to_string(id);
        record.is_goalkeeper = p == 0;
        record.club_id = squad.team_id;
        corpus.players.push_back(record);
        corpus.strength[id] = gauss(rng);
        corpus.home_role[id] = p == 0 ? -1 : (p - 1) % roles;
      }
      squads.push_back(std::move(squad));
    }
  }

  std::gamma_distribution<double> style(config.style_shape, 1.0 / config.style_shape);
  std::normal_distribution<double> spread(0.0, config.position_spread);
  std::normal_distribution<double> jitter(0.0, 3.0);
  std::poisson_distribution<int> event_count(config.events_per_player);
  std::int64_t next_event = 100000001;

  for (int m = 0; m < config.matches; ++m) {
    const int comp = m % config.competitions;
    const int first_team = comp * config.teams_per_competition;
    int a = static_cast<int>(rng() % static_cast<std::uint64_t>(config.teams_per_competition));
    int b = static_cast<int>(rng() % static_cast<std::uint64_t>(config.teams_per_competition - 1));
    if (b >= a) ++b;
    const Squad& home = squads[static_cast<std::size_t>(first_team + a)];
    const Squad& away = squads[static_cast<std::size_t>(first_team + b)];

    MatchRecord match;
    match.match_id = 2500000 + m;
    match.competition_id = home.competition_id;
    match.season_id = 2018;
    match.date = match_date(m);
    match.home = {home.team_id, Side::home, 0};
    match.away = {away.team_id, Side::away, 0};
    corpus.matches.push_back(match);

    for (const Squad* squad : {&home, &away}) {
      std::vector<double> multiplier(n);
      for (auto& v : multiplier) v = style(rng);
      std::vector<double> rates(n);
      for (std::size_t pi = 0; pi < squad->players.size(); ++pi) {
        const auto player = squad->players[pi];
        const bool goalkeeper = pi == 0;
        Point center{8.0, 50.0};
        if (!goalkeeper) {
          int role = corpus.home_role[player];
          if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < config.role_switch) {
            role = (role + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(roles - 1))) % roles;
          }
          center = corpus.role_centers[static_cast<std::size_t>(role)];
          center.x += jitter(rng);
          center.y += jitter(rng);
        }
        const double q = corpus.strength[player];
        for (std::size_t i = 0; i < n; ++i) {
          const double sign = corpus.planted_weights[i] > 0 ? 1.0 : -1.0;
          rates[i] = base[i] * multiplier[i] * std::exp(config.quality_effect * q * sign);
        }
        std::discrete_distribution<std::size_t> pick(rates.begin(), rates.end());
        int count = std::max(1, event_count(rng));
        if (goalkeeper) count = std::max(1, count / 3);
        // Two accurate shots per team leave room for the goals added below.
        const int forced = (pi == 1 || pi == 2) ? 1 : 0;
        for (int e = 0; e < count + forced; ++e) {
          std::size_t f = e < forced ? *shot_accurate : pick(rng);
          if (goalkeeper) {
            f = *catalog.find(EventType::pass, Subtype::simple_pass,
                              e % 5 == 0 ? tag::not_accurate : tag::accurate);
          }
          const auto& d = catalog[f];
          Event ev;
          ev.event_id = next_event++;
          ev.type = d.type;
          ev.subtype = d.subtype;
          ev.subtype_code = subtype_code_of(d.subtype);
          ev.tags = {d.tag};
          ev.player_id = player;
          ev.team_id = squad->team_id;
          ev.match_id = match.match_id;
          const double t = std::uniform_real_distribution<double>(0.0, 5400.0)(rng);
          ev.period = t < 2700.0 ? Period::first_half : Period::second_half;
          ev.event_sec = std::round((t < 2700.0 ? t : t - 2700.0) * 1000.0) / 1000.0;
          ev.position = {clip_coordinate(center.x + spread(rng)), clip_coordinate(center.y + spread(rng))};
          corpus.events.push_back(std::move(ev));
        }
      }
    }
  }

  // Outcomes from the planted model applied to normalized team vectors.
  const auto store = corpus.store();
  const auto vectors = extract_all(store, catalog);
  const auto teams = aggregate_teams(store, vectors);
  const auto set = build_training_set(store, teams, catalog);
  std::normal_distribution<double> noise(0.0, config.outcome_noise > 0 ? config.outcome_noise : 1.0);
  std::map<std::pair<std::int64_t, std::int64_t>, double> score;
  std::vector<double> all;
  for (const auto& ex : set.examples) {
    double s = std::inner_product(ex.features.begin(), ex.features.end(),
                                  corpus.planted_weights.begin(), 0.0);
    if (config.outcome_noise > 0) s += noise(rng);
    score[{ex.match_id, ex.team_id}] = s;
    all.push_back(s);
  }
  std::sort(all.begin(), all.end());
  const double tau = all[static_cast<std::size_t>(config.win_quantile * static_cast<double>(all.size() - 1))];

  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Event*>> accurate_shots;
  for (auto& ev : corpus.events) {
    if (ev.type == EventType::shot && ev.has_tag(tag::accurate) &&
        corpus.home_role[ev.player_id] >= 0) {
      accurate_shots[{ev.match_id, ev.team_id}].push_back(&ev);
    }
  }
  auto add_goals = [&](std::int64_t match_id, std::int64_t team_id, int goals) {
    auto& shots = accurate_shots[{match_id, team_id}];
    goals = std::min<int>(goals, static_cast<int>(shots.size()));
    std::shuffle(shots.begin(), shots.end(), rng);
    for (int g = 0; g < goals; ++g) {
      auto& tags = shots[static_cast<std::size_t>(g)]->tags;
      tags.push_back(tag::goal);
      std::sort(tags.begin(), tags.end());
    }
    return goals;
  };
  for (auto& match : corpus.matches) {
    const double sh = score[{match.match_id, match.home.team_id}];
    const double sa = score[{match.match_id, match.away.team_id}];
    const bool home_wins = sh > tau && (sa <= tau || sh > sa);
    const bool away_wins = sa > tau && (sh <= tau || sa > sh);
    const int low = static_cast<int>(rng() % 2);
    if (home_wins || away_wins) {
      auto& winner = home_wins ? match.home : match.away;
      auto& loser = home_wins ? match.away : match.home;
      loser.score = add_goals(match.match_id, loser.team_id, low);
      winner.score = add_goals(match.match_id, winner.team_id, loser.score + 1);
      if (winner.score <= loser.score) {
        throw Error("contract_error", "synthetic winner lacks accurate shots");
      }
    } else {
      const int g = std::min({low, static_cast<int>(accurate_shots[{match.match_id, match.home.team_id}].size()),
                              static_cast<int>(accurate_shots[{match.match_id, match.away.team_id}].size())});
      match.home.score = add_goals(match.match_id, match.home.team_id, g);
      match.away.score = add_goals(match.match_id, match.away.team_id, g);
    }
  }
  return corpus;
}

void write_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const nlohmann::ordered_json& doc) {
    std::ofstream out(dir / name);
    if (!out) throw Error("io_error", "cannot write " + (dir / name).string());
    out << doc.dump() << '\n';
  };
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& e : corpus.events) events.push_back(event_to_json(e));
  write("events.json", events);
  nlohmann::ordered_json matches = nlohmann::ordered_json::array();
  for (const auto& m : corpus.matches) matches.push_back(match_to_json(m));
  write("matches.json", matches);
  nlohmann::ordered_json players = nlohmann::ordered_json::array();
  for (const auto& p : corpus.players) players.push_back(player_to_json(p));
  write("players.json", players);
  nlohmann::ordered_json competitions = nlohmann::ordered_json::array();
  for (const auto& c : corpus.competitions) competitions.push_back(competition_to_json(c));
  write("competitions.json", competitions);
}

}  // namespace pitchrank
