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

// Synthetic soccer-log corpus with a planted outcome model, planted role
// centers and planted player strengths. Drives the demo and the recovery
// tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "pitchrank/roles.hpp"
#include "pitchrank/store.hpp"

namespace pitchrank {

struct SyntheticConfig {
  std::uint64_t seed = 2024;
  int competitions = 2;
  int teams_per_competition = 10;
  int players_per_team = 14;  // the first of each squad is a goalkeeper
  int matches = 200;          // spread evenly over the competitions
  double events_per_player = 25.0;
  // Gamma shape of the per-team, per-match feature multipliers.
  double style_shape = 3.0;
  double role_switch = 0.1;
  double position_spread = 12.0;
  // Log-rate shift per unit of player strength on signed features.
  double quality_effect = 0.35;
  // Standard deviation of noise added to the planted team score.
  double outcome_noise = 0.0;
  // Quantile of planted team scores above which a team can win.
  double win_quantile = 0.6;
};

struct SyntheticCorpus {
  std::vector<Event> events;
  std::vector<MatchRecord> matches;
  std::vector<PlayerRecord> players;
  std::vector<CompetitionRecord> competitions;
  // Planted weights over the default feature catalog.
  std::vector<double> planted_weights;
  std::vector<Point> role_centers;
  std::map<std::int64_t, int> home_role;
  std::map<std::int64_t, double> strength;

  EventStore store(const LoadOptions& options = {}) const;
};

// Eight role centers on a 3x3 grid without its middle cell.
std::vector<Point> planted_role_centers();

SyntheticCorpus generate_corpus(const SyntheticConfig& config);

// Writes events.json, matches.json, players.json and competitions.json.
void write_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace pitchrank
