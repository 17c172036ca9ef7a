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

#include "pitchrank/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pitchrank/error.hpp"
#include "pitchrank/text_io.hpp"

namespace pitchrank {
namespace {

template <class F>
auto in_stage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.what());
  }
}

void add_zone_counts(PlayerProfile& profile, std::span<const Event> events,
                     const ZoneTessellation& grid) {
  if (profile.zone_counts.empty()) profile.zone_counts.assign(static_cast<std::size_t>(grid.zones()), 0);
  for (const auto& e : events) {
    ++profile.zone_counts[static_cast<std::size_t>(grid.zone_of(e.position.x, e.position.y))];
  }
  std::uint64_t total = 0;
  for (auto c : profile.zone_counts) total += c;
  profile.presence.assign(profile.zone_counts.size(), 0.0);
  if (total == 0) return;
  for (std::size_t i = 0; i < profile.zone_counts.size(); ++i) {
    profile.presence[i] = static_cast<double>(profile.zone_counts[i]) / static_cast<double>(total);
  }
}

std::string read_section(KvReader& reader) {
  std::string text;
  while (auto record = reader.next()) {
    if (record->raw == "@end") return text;
    text += record->raw;
    text += '\n';
  }
  throw ValidationError("bundle section is not terminated");
}

}  // namespace

RatingConfig ModelBundle::rating_config() const {
  RatingConfig config = RatingConfig::from_weights(weights, alpha, beta);
  config.min_matches = min_matches;
  config.x_pct = x_pct;
  config.validate();
  return config;
}

std::uint64_t ModelBundle::digest() const {
  std::ostringstream out;
  write_bundle(*this, out);
  return fnv1a64(out.str());
}

void write_bundle(const ModelBundle& bundle, std::ostream& out) {
  const auto& catalog = default_catalog();
  out << "pitchrank-bundle " << ModelBundle::kVersion << "\n";
  out << "config_digest " << hex64(bundle.config_digest) << "\n";
  out << "catalog_hash " << hex64(catalog.hash()) << "\n";
  out << "alpha " << format_double(bundle.alpha) << "\n";
  out << "beta " << format_double(bundle.beta) << "\n";
  out << "delta_s " << format_double(bundle.delta_s) << "\n";
  out << "x_pct " << format_double(bundle.x_pct) << "\n";
  out << "min_matches " << bundle.min_matches << "\n";
  out << "min_events_for_role " << bundle.min_events_for_role << "\n";
  out << "max_goals " << bundle.max_goals << "\n";
  out << "grid " << bundle.grid.rows << " " << bundle.grid.cols << "\n";
  out << "holdout " << format_double(bundle.holdout.auc) << " " << format_double(bundle.holdout.f1)
      << " " << format_double(bundle.holdout.accuracy) << " " << bundle.holdout.examples << "\n";
  out << "@section normalization\n";
  write_normalization(bundle.normalization, catalog, out);
  out << "@end\n@section weights\n";
  write_weights(bundle.weights, catalog, out);
  out << "@end\n@section roles\n";
  write_role_model(bundle.roles, bundle.delta_s, out);
  out << "@end\n";
}

void write_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path.string());
  write_bundle(bundle, out);
}

ModelBundle read_bundle(std::istream& in) {
  const auto& catalog = default_catalog();
  KvReader reader(in, "pitchrank-bundle", ModelBundle::kVersion);
  ModelBundle b;
  auto one = [&](const char* key) { return reader.expect(key).fields.at(0); };
  b.config_digest = parse_hex64(one("config_digest"));
  if (parse_hex64(one("catalog_hash")) != catalog.hash()) {
    throw Error("catalog_mismatch", "bundle was built with another feature catalog");
  }
  b.alpha = parse_double(one("alpha"), "alpha");
  b.beta = parse_double(one("beta"), "beta");
  b.delta_s = parse_double(one("delta_s"), "delta_s");
  b.x_pct = parse_double(one("x_pct"), "x_pct");
  b.min_matches = static_cast<std::size_t>(parse_int(one("min_matches"), "min_matches"));
  b.min_events_for_role =
      static_cast<std::size_t>(parse_int(one("min_events_for_role"), "min_events_for_role"));
  b.max_goals = static_cast<int>(parse_int(one("max_goals"), "max_goals"));
  const auto grid = reader.expect("grid").fields;
  if (grid.size() != 2) throw ValidationError("grid needs rows and cols");
  b.grid.rows = static_cast<int>(parse_int(grid[0], "rows"));
  b.grid.cols = static_cast<int>(parse_int(grid[1], "cols"));
  b.grid.validate();
  const auto holdout = reader.expect("holdout").fields;
  if (holdout.size() != 4) throw ValidationError("holdout needs auc f1 accuracy examples");
  b.holdout.auc = parse_double(holdout[0], "auc");
  b.holdout.f1 = parse_double(holdout[1], "f1");
  b.holdout.accuracy = parse_double(holdout[2], "accuracy");
  b.holdout.examples = static_cast<std::size_t>(parse_int(holdout[3], "examples"));

  bool have_norm = false, have_weights = false, have_roles = false;
  while (auto record = reader.next()) {
    if (record->key != "@section" || record->fields.size() != 1) {
      throw ValidationError("line " + std::to_string(record->line) + ": expected a section");
    }
    std::istringstream section(read_section(reader));
    const auto& name = record->fields[0];
    if (name == "normalization") {
      b.normalization = read_normalization(section, catalog);
      have_norm = true;
    } else if (name == "weights") {
      b.weights = read_weights(section, catalog);
      have_weights = true;
    } else if (name == "roles") {
      b.roles = read_role_model(section);
      have_roles = true;
    } else {
      throw ValidationError("unknown bundle section '" + name + "'");
    }
  }
  if (!have_norm || !have_weights || !have_roles) throw ValidationError("bundle is missing a section");
  if (b.normalization.catalog_hash != catalog.hash() || b.weights.catalog_hash != catalog.hash()) {
    throw Error("catalog_mismatch", "bundle parts disagree on the feature catalog");
  }
  return b;
}

ModelBundle read_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path.string());
  return read_bundle(in);
}

std::vector<CenterOfPerformance> compute_centers(const EventStore& store, std::size_t min_events) {
  std::vector<CenterOfPerformance> out;
  for (const auto& match : store.matches()) {
    for (const auto& [player, team] : store.participants(match.match_id)) {
      const auto events = store.events_of(player, match.match_id);
      if (events.size() >= min_events) out.push_back(compute_center(events));
    }
  }
  return out;
}

ModelBundle run_learning_phase(const EventStore& store, const PipelineConfig& config) {
  config.validate();
  const auto& catalog = default_catalog();
  ModelBundle bundle;
  bundle.config_digest = config.digest();
  bundle.alpha = config.alpha;
  bundle.beta = config.beta;
  bundle.delta_s = config.delta_s;
  bundle.x_pct = config.x_pct;
  bundle.min_matches = config.min_matches;
  bundle.min_events_for_role = config.min_events_for_role;
  bundle.grid = {config.grid_rows, config.grid_cols};

  const auto vectors = in_stage("features", [&] {
    auto v = extract_all(store, catalog);
    if (v.empty()) throw Error("empty_corpus", "no player performances in the store");
    bundle.normalization = fit_normalization(v, catalog);
    return v;
  });
  bundle.max_goals = config.max_goals_cap ? *config.max_goals_cap
                                          : std::max(1, bundle.normalization.max_goals);

  in_stage("training", [&] {
    const auto teams = aggregate_teams(store, vectors);
    const auto set = build_training_set(store, teams, catalog);
    TrainConfig tc;
    tc.cost_grid = config.cost_grid;
    tc.folds = config.folds;
    tc.holdout = config.holdout;
    tc.seed = config.seed;
    auto trained = train_weights(set.examples, tc, catalog.hash());
    bundle.weights = std::move(trained.weights);
    bundle.holdout = trained.report.holdout;
    return 0;
  });

  in_stage("roles", [&] {
    const auto centers = compute_centers(store, config.min_events_for_role);
    std::vector<Point> points;
    points.reserve(centers.size());
    for (const auto& c : centers) points.push_back(c.center);
    RoleFitConfig rc;
    rc.k_min = config.k_min;
    rc.k_max = config.k_max;
    rc.restarts = config.restarts;
    rc.seed = config.seed;
    bundle.roles = fit_roles(points, rc);
    return 0;
  });
  return bundle;
}

std::vector<MatchRating> rate_match(const EventStore& store, const ModelBundle& bundle,
                                    std::int64_t match_id) {
  if (!store.find_match(match_id)) {
    throw Error("not_found", "match " + std::to_string(match_id) + " is not in the store");
  }
  const auto& catalog = default_catalog();
  const auto config = bundle.rating_config();
  std::vector<MatchRating> out;
  for (const auto& [player, team] : store.participants(match_id)) {
    const auto events = store.events_of(player, match_id);
    const auto raw = extract_raw_performance(events, catalog);
    const auto normalized = apply_normalization(raw.values, bundle.normalization);
    MatchRating m;
    m.player_id = player;
    m.match_id = match_id;
    m.team_id = team;
    m.goals = raw.goals_scored;
    m.r = rate_performance(normalized, bundle.weights, config);
    m.norm_goals = std::min(static_cast<double>(m.goals) / bundle.max_goals, 1.0);
    m.r_star = adjusted_rating(m.r, m.goals, bundle.max_goals, bundle.alpha);
    if (events.size() >= bundle.min_events_for_role) {
      m.role = soft_assign(compute_center(events).center, bundle.roles, bundle.delta_s);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MatchRating> Snapshot::ratings() const {
  std::vector<MatchRating> out;
  for (const auto& [player, s] : series) out.insert(out.end(), s.matches.begin(), s.matches.end());
  return out;
}

std::vector<SearchCandidate> Snapshot::candidates(std::size_t min_matches) const {
  std::vector<SearchCandidate> out;
  for (const auto& [player, s] : series) {
    if (s.empty() || s.size() < min_matches) continue;
    const auto it = profiles.find(player);
    if (it == profiles.end() || it->second.presence.empty()) continue;
    out.push_back({player, it->second.presence, s.r_bar()});
  }
  return out;
}

std::map<std::int64_t, std::size_t> Snapshot::overall_positions(const RatingConfig& config) const {
  std::map<std::int64_t, std::size_t> out;
  const auto ranking = overall_ranking(series, config);
  for (std::size_t i = 0; i < ranking.size(); ++i) out[ranking[i].player_id] = i + 1;
  return out;
}

Snapshot build_snapshot(const EventStore& store, const ModelBundle& bundle) {
  const auto config = bundle.rating_config();
  Snapshot snap;
  for (const auto& match : store.matches()) {
    const std::pair position{match.date, match.match_id};
    for (auto& m : rate_match(store, bundle, match.match_id)) {
      auto& profile = snap.profiles[m.player_id];
      if (profile.name.empty()) {
        const auto* p = store.find_player(m.player_id);
        profile.name = p ? p->name : std::to_string(m.player_id);
      }
      add_zone_counts(profile, store.events_of(m.player_id, m.match_id), bundle.grid);
      profile.order.push_back(position);
      auto& s = snap.series[m.player_id];
      s.player_id = m.player_id;
      s.matches.push_back(std::move(m));
    }
    snap.processed.insert(match.match_id);
  }
  for (auto& [player, s] : snap.series) replay_series(s, config.beta);
  snap.rankings = build_role_rankings(snap.series, bundle.roles.k, config);
  snap.updates = snap.processed.size();
  return snap;
}

Snapshot run_online_update(const EventStore& store, const ModelBundle& bundle,
                           const Snapshot& previous, std::int64_t match_id) {
  if (!store.find_match(match_id)) {
    throw Error("not_found", "match " + std::to_string(match_id) + " is not in the store");
  }
  if (previous.processed.contains(match_id)) {
    throw Error("duplicate", "match " + std::to_string(match_id) + " was already processed");
  }
  const auto config = bundle.rating_config();
  Snapshot snap = previous;
  if (snap.rankings.size() != static_cast<std::size_t>(bundle.roles.k)) {
    snap.rankings = build_role_rankings(snap.series, bundle.roles.k, config);
  }
  const std::pair position{store.find_match(match_id)->date, match_id};
  std::set<int> affected;
  for (auto& m : rate_match(store, bundle, match_id)) {
    const auto player = m.player_id;
    auto& s = snap.series[player];
    s.player_id = player;
    for (int role : eligible_roles(s, config)) affected.insert(role);

    auto& profile = snap.profiles[player];
    if (profile.name.empty()) {
      const auto* p = store.find_player(player);
      profile.name = p ? p->name : std::to_string(player);
    }
    add_zone_counts(profile, store.events_of(player, match_id), bundle.grid);
    const auto at = static_cast<std::size_t>(
        std::lower_bound(profile.order.begin(), profile.order.end(), position) - profile.order.begin());
    profile.order.insert(profile.order.begin() + static_cast<std::ptrdiff_t>(at), position);
    s.matches.insert(s.matches.begin() + static_cast<std::ptrdiff_t>(at), std::move(m));
    replay_series(s, config.beta, at);

    for (int role : eligible_roles(s, config)) affected.insert(role);
  }
  for (int role : affected) {
    snap.rankings[static_cast<std::size_t>(role)] = build_role_ranking(snap.series, role, config);
  }
  snap.processed.insert(match_id);
  ++snap.updates;
  return snap;
}

void write_ratings(const Snapshot& snapshot, std::ostream& out) {
  out << "player_id\tmatch_id\tr\tr_star\trole\thybrids\tr_bar\n";
  for (const auto& [player, s] : snapshot.series) {
    for (const auto& m : s.matches) {
      out << m.player_id << '\t' << m.match_id << '\t' << format_double(m.r) << '\t'
          << format_double(m.r_star) << '\t' << (m.role ? m.role->primary : -1) << '\t';
      if (!m.role || m.role->hybrids.empty()) {
        out << '-';
      } else {
        for (std::size_t i = 0; i < m.role->hybrids.size(); ++i) {
          out << (i ? "," : "") << m.role->hybrids[i];
        }
      }
      out << '\t' << format_double(m.r_bar) << '\n';
    }
  }
}

void write_ranking(const RoleRanking& ranking, const Snapshot& snapshot, std::ostream& out) {
  out << "position\tplayer_id\tname\tr_bar\tmatches\n";
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    const auto it = snapshot.profiles.find(e.player_id);
    out << i + 1 << '\t' << e.player_id << '\t'
        << (it != snapshot.profiles.end() ? it->second.name : std::string()) << '\t'
        << format_double(e.r_bar) << '\t' << e.matches << '\n';
  }
}

}  // namespace pitchrank
