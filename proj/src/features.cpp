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

#include "pitchrank/features.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "pitchrank/error.hpp"
#include "pitchrank/text_io.hpp"

namespace pitchrank {
namespace {

std::uint64_t pack(EventType type, Subtype subtype, int tag) {
  return (static_cast<std::uint64_t>(type) << 48) | (static_cast<std::uint64_t>(subtype) << 32) |
         static_cast<std::uint32_t>(tag);
}

struct Group {
  EventType type;
  const char* type_name;
  Subtype subtype;
  const char* subtype_name;
  std::vector<std::pair<int, const char*>> tags;
};

}  // namespace

FeatureCatalog::FeatureCatalog(std::vector<FeatureDescriptor> descriptors)
    : descriptors_(std::move(descriptors)) {
  std::string canonical;
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    const auto& d = descriptors_[i];
    if (d.tag == tag::goal) throw ValidationError("the goal tag cannot be a feature");
    if (!lookup_.emplace(pack(d.type, d.subtype, d.tag), i).second) {
      throw ValidationError("duplicate feature descriptor '" + d.name + "'");
    }
    canonical += d.name + '\t' + std::to_string(static_cast<int>(d.type)) + '\t' +
                 std::to_string(static_cast<int>(d.subtype)) + '\t' + std::to_string(d.tag) + '\n';
  }
  hash_ = fnv1a64(canonical);
}

std::optional<std::size_t> FeatureCatalog::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    if (descriptors_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> FeatureCatalog::find(EventType type, Subtype subtype, int tag) const {
  auto it = lookup_.find(pack(type, subtype, tag));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

FeatureCatalog build_feature_catalog() {
  using T = EventType;
  using S = Subtype;
  const std::pair<int, const char*> accurate{tag::accurate, "accurate"};
  const std::pair<int, const char*> not_accurate{tag::not_accurate, "not accurate"};
  const std::pair<int, const char*> red{tag::red_card, "red card"};
  const std::pair<int, const char*> second_yellow{tag::second_yellow_card, "second yellow card"};
  const std::pair<int, const char*> yellow{tag::yellow_card, "yellow card"};
  const std::pair<int, const char*> assist{tag::assist, "assist"};
  const std::pair<int, const char*> key_pass{tag::key_pass, "key pass"};

  // Order and names as in the published feature list.
  const std::vector<Group> groups = {
      {T::duel, "duel", S::air_duel, "air duel", {accurate, not_accurate}},
      {T::duel, "duel", S::ground_attacking_duel, "ground attacking duel", {accurate, not_accurate}},
      {T::duel, "duel", S::ground_defending_duel, "ground defending duel", {accurate, not_accurate}},
      {T::duel, "duel", S::ground_loose_ball_duel, "ground loose ball duel", {accurate, not_accurate}},
      {T::foul, "foul", S::hand_foul, "hand foul", {red, second_yellow, yellow}},
      {T::foul, "foul", S::late_card_foul, "late card foul", {yellow}},
      {T::foul, "foul", S::normal_foul, "normal foul", {red, second_yellow, yellow}},
      {T::foul, "foul", S::out_of_game_foul, "out of game foul", {red, second_yellow, yellow}},
      {T::foul, "foul", S::protest, "protest foul", {red, second_yellow, yellow}},
      {T::foul, "foul", S::simulation, "simulation foul", {second_yellow, yellow}},
      {T::foul, "foul", S::violent_foul, "violent foul", {red, second_yellow, yellow}},
      {T::free_kick, "free kick", S::corner, "corner free kick", {accurate, not_accurate}},
      {T::free_kick, "free kick", S::free_kick_cross, "cross free kick", {accurate, not_accurate}},
      {T::free_kick, "free kick", S::normal_free_kick, "normal free kick", {accurate, not_accurate}},
      {T::free_kick, "free kick", S::penalty, "penalty free kick", {not_accurate}},
      {T::free_kick, "free kick", S::free_kick_shot, "shot free kick", {accurate, not_accurate}},
      {T::free_kick, "free kick", S::throw_in, "throw in free kick", {accurate, not_accurate}},
      {T::touch, "others on the ball", S::acceleration, "accelleration", {accurate, not_accurate}},
      {T::touch, "others on the ball", S::clearance, "clearance", {accurate, not_accurate}},
      {T::touch,
       "others on the ball",
       S::simple_touch,
       "touch",
       {assist,
        {tag::counter_attack, "counter attack"},
        {tag::dangerous_ball_lost, "dangerous ball lost"},
        {tag::feint, "feint"},
        {tag::interception, "interception"},
        {tag::missed_ball, "missed ball"},
        {tag::opportunity, "opportunity"}}},
      {T::pass, "pass", S::cross, "cross pass", {accurate, assist, key_pass, not_accurate}},
      {T::pass, "pass", S::hand_pass, "hand pass", {accurate, not_accurate}},
      {T::pass, "pass", S::head_pass, "head pass", {accurate, assist, key_pass, not_accurate}},
      {T::pass, "pass", S::high_pass, "high pass", {accurate, assist, key_pass, not_accurate}},
      {T::pass, "pass", S::launch, "launch pass", {accurate, assist, key_pass, not_accurate}},
      {T::pass, "pass", S::simple_pass, "simple pass", {accurate, assist, key_pass, not_accurate}},
      {T::pass, "pass", S::smart_pass, "smart pass", {accurate, assist, key_pass, not_accurate}},
      {T::shot, "shot", S::shot, "shot", {accurate, not_accurate}},
  };

  std::vector<FeatureDescriptor> descriptors;
  for (const auto& g : groups) {
    for (const auto& [id, label] : g.tags) {
      descriptors.push_back({g.type, g.subtype, id,
                             std::string(g.type_name) + "-" + g.subtype_name + "-" + label});
    }
  }
  return FeatureCatalog(std::move(descriptors));
}

const FeatureCatalog& default_catalog() {
  static const FeatureCatalog catalog = build_feature_catalog();
  return catalog;
}

PerformanceVector extract_raw_performance(std::span<const Event> events,
                                          const FeatureCatalog& catalog) {
  PerformanceVector v;
  v.values.assign(catalog.size(), 0.0);
  if (events.empty()) return v;
  v.player_id = events.front().player_id;
  v.match_id = events.front().match_id;
  v.team_id = events.front().team_id;
  for (const auto& e : events) {
    if (e.player_id != v.player_id || e.match_id != v.match_id) {
      throw Error("contract_error", "event slice mixes players or matches");
    }
    if (e.has_tag(tag::goal)) ++v.goals_scored;
    if (!e.subtype) continue;
    for (int t : e.tags) {
      if (auto i = catalog.find(e.type, *e.subtype, t)) v.values[*i] += 1.0;
    }
  }
  return v;
}

std::vector<PerformanceVector> extract_all(const EventStore& store, const FeatureCatalog& catalog) {
  std::vector<PerformanceVector> out;
  for (const auto& match : store.matches()) {
    for (const auto& [player, team] : store.participants(match.match_id)) {
      out.push_back(extract_raw_performance(store.events_of(player, match.match_id), catalog));
    }
  }
  return out;
}

namespace {

template <typename Vectors>
NormalizationParams fit_min_max(const Vectors& corpus, const FeatureCatalog& catalog) {
  if (corpus.empty()) throw Error("empty_corpus", "cannot fit normalization on an empty corpus");
  NormalizationParams params;
  params.catalog_hash = catalog.hash();
  params.min.assign(catalog.size(), 0.0);
  params.max.assign(catalog.size(), 0.0);
  bool first = true;
  for (const auto& v : corpus) {
    if (v.values.size() != catalog.size()) {
      throw Error("catalog_mismatch", "vector length does not match the catalog");
    }
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      if (first) {
        params.min[i] = params.max[i] = v.values[i];
      } else {
        params.min[i] = std::min(params.min[i], v.values[i]);
        params.max[i] = std::max(params.max[i], v.values[i]);
      }
    }
    first = false;
  }
  return params;
}

}  // namespace

NormalizationParams fit_normalization(std::span<const PerformanceVector> corpus,
                                      const FeatureCatalog& catalog) {
  auto params = fit_min_max(corpus, catalog);
  for (const auto& v : corpus) params.max_goals = std::max(params.max_goals, v.goals_scored);
  return params;
}

NormalizationParams fit_normalization(std::span<const TeamPerformance> corpus,
                                      const FeatureCatalog& catalog) {
  return fit_min_max(corpus, catalog);
}

std::vector<double> apply_normalization(std::span<const double> raw,
                                        const NormalizationParams& params) {
  if (raw.size() != params.min.size()) {
    throw Error("catalog_mismatch", "vector length does not match the normalization parameters");
  }
  std::vector<double> out(raw.size(), 0.0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double range = params.max[i] - params.min[i];
    if (range <= 0.0) continue;
    out[i] = std::clamp((raw[i] - params.min[i]) / range, 0.0, 1.0);
  }
  return out;
}

PerformanceVector apply_normalization(const PerformanceVector& raw,
                                      const NormalizationParams& params) {
  PerformanceVector out = raw;
  out.values = apply_normalization(raw.values, params);
  return out;
}

TeamPerformance aggregate_team(std::span<const PerformanceVector> roster, int outcome) {
  if (roster.empty()) throw Error("invalid_argument", "cannot aggregate an empty roster");
  TeamPerformance team;
  team.team_id = roster.front().team_id;
  team.match_id = roster.front().match_id;
  team.outcome = outcome;
  team.values.assign(roster.front().values.size(), 0.0);
  for (const auto& v : roster) {
    if (v.match_id != team.match_id || v.team_id != team.team_id) {
      throw Error("contract_error", "roster mixes matches or teams");
    }
    if (v.values.size() != team.values.size()) {
      throw Error("catalog_mismatch", "roster vectors differ in length");
    }
    for (std::size_t i = 0; i < v.values.size(); ++i) team.values[i] += v.values[i];
    team.roster.push_back(v.player_id);
  }
  return team;
}

std::vector<TeamPerformance> aggregate_teams(const EventStore& store,
                                             std::span<const PerformanceVector> vectors) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<PerformanceVector>> groups;
  for (const auto& v : vectors) groups[{v.match_id, v.team_id}].push_back(v);
  std::vector<TeamPerformance> out;
  out.reserve(groups.size());
  for (const auto& [key, roster] : groups) {
    const auto* match = store.find_match(key.first);
    if (!match) {
      throw Error("not_found", "match " + std::to_string(key.first) + " not in store");
    }
    out.push_back(aggregate_team(roster, match->outcome(key.second)));
  }
  return out;
}

void write_normalization(const NormalizationParams& params, const FeatureCatalog& catalog,
                         std::ostream& out) {
  out << "pitchrank-normalization 1\n";
  out << "catalog_hash " << hex64(params.catalog_hash) << "\n";
  out << "features " << params.min.size() << "\n";
  out << "max_goals " << params.max_goals << "\n";
  for (std::size_t i = 0; i < params.min.size(); ++i) {
    out << "feature " << i << " " << format_double(params.min[i]) << " "
        << format_double(params.max[i]) << " " << catalog[i].name << "\n";
  }
}

NormalizationParams read_normalization(std::istream& in, const FeatureCatalog& catalog) {
  KvReader reader(in, "pitchrank-normalization", 1);
  NormalizationParams params;
  params.catalog_hash = parse_hex64(reader.expect("catalog_hash").fields.at(0));
  if (params.catalog_hash != catalog.hash()) {
    throw Error("catalog_mismatch", "normalization file was fitted on a different catalog");
  }
  const auto n = parse_int(reader.expect("features").fields.at(0), "features");
  params.max_goals = static_cast<int>(parse_int(reader.expect("max_goals").fields.at(0), "max_goals"));
  for (std::int64_t i = 0; i < n; ++i) {
    const auto record = reader.expect("feature");
    if (record.fields.size() < 3 || parse_int(record.fields[0], "feature index") != i) {
      throw ValidationError("malformed feature line " + std::to_string(record.line));
    }
    params.min.push_back(parse_double(record.fields[1], "min"));
    params.max.push_back(parse_double(record.fields[2], "max"));
    if (params.min.back() > params.max.back()) {
      throw ValidationError("feature " + std::to_string(i) + " has min > max");
    }
  }
  return params;
}

void write_vectors(std::span<const PerformanceVector> vectors, const FeatureCatalog& catalog,
                   std::ostream& out) {
  out << "player_id\tmatch_id\tteam_id\tgoals";
  for (const auto& d : catalog.descriptors()) out << '\t' << d.name;
  out << '\n';
  for (const auto& v : vectors) {
    out << v.player_id << '\t' << v.match_id << '\t' << v.team_id << '\t' << v.goals_scored;
    for (double x : v.values) out << '\t' << format_double(x);
    out << '\n';
  }
}

std::vector<PerformanceVector> read_vectors(std::istream& in, const FeatureCatalog& catalog) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("vectors file is empty");
  const auto header = split(trim(line), '\t');
  if (header.size() != catalog.size() + 4) {
    throw Error("catalog_mismatch", "vectors file has " + std::to_string(header.size() - 4) +
                                        " feature columns, catalog has " +
                                        std::to_string(catalog.size()));
  }
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (header[i + 4] != catalog[i].name) {
      throw Error("catalog_mismatch", "column '" + header[i + 4] + "' does not match feature '" +
                                          catalog[i].name + "'");
    }
  }
  std::vector<PerformanceVector> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), '\t');
    if (cells.size() != header.size()) throw ValidationError("vectors row has wrong column count");
    PerformanceVector v;
    v.player_id = parse_int(cells[0], "player_id");
    v.match_id = parse_int(cells[1], "match_id");
    v.team_id = parse_int(cells[2], "team_id");
    v.goals_scored = static_cast<int>(parse_int(cells[3], "goals"));
    for (std::size_t i = 4; i < cells.size(); ++i) v.values.push_back(parse_double(cells[i], "value"));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace pitchrank
