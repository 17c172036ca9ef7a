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

#include "pitchrank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pitchrank/error.hpp"
#include "pitchrank/numeric.hpp"
#include "pitchrank/text_io.hpp"

namespace pitchrank {
namespace {

bool ranks_before(const RankEntry& a, const RankEntry& b) {
  if (a.r_bar != b.r_bar) return a.r_bar > b.r_bar;
  return a.player_id < b.player_id;
}

ExpertLabel parse_label(std::string_view text, std::size_t line) {
  if (text == "first") return ExpertLabel::first;
  if (text == "second") return ExpertLabel::second;
  if (text == "equal") return ExpertLabel::equal;
  throw ValidationError("line " + std::to_string(line) + ": unknown expert label '" + std::string(text) +
                       "'");
}

const char* label_name(ExpertLabel label) {
  switch (label) {
    case ExpertLabel::first: return "first";
    case ExpertLabel::second: return "second";
    case ExpertLabel::equal: return "equal";
  }
  return "equal";
}

}  // namespace

std::optional<std::size_t> RoleRanking::position_of(std::int64_t player_id) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].player_id == player_id) return i + 1;
  }
  return std::nullopt;
}

std::vector<RoleAssignment> role_history(const RatingSeries& series) {
  std::vector<RoleAssignment> out;
  for (const auto& m : series.matches) {
    if (m.role) out.push_back(*m.role);
  }
  return out;
}

std::set<int> eligible_roles(const RatingSeries& series, const RatingConfig& config) {
  if (series.size() < config.min_matches) return {};
  const auto history = role_history(series);
  return assign_player_roles(history, config.x_pct);
}

RoleRanking build_role_ranking(const SeriesMap& series, int role, const RatingConfig& config) {
  RoleRanking ranking;
  ranking.role = role;
  ranking.x_pct = config.x_pct;
  ranking.min_matches = config.min_matches;
  for (const auto& [player, s] : series) {
    if (s.empty() || !eligible_roles(s, config).contains(role)) continue;
    ranking.entries.push_back({player, s.r_bar(), s.size()});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(), ranks_before);
  return ranking;
}

std::vector<RoleRanking> build_role_rankings(const SeriesMap& series, int k,
                                             const RatingConfig& config) {
  std::vector<RoleRanking> out(static_cast<std::size_t>(k));
  for (int role = 0; role < k; ++role) {
    auto& r = out[static_cast<std::size_t>(role)];
    r.role = role;
    r.x_pct = config.x_pct;
    r.min_matches = config.min_matches;
  }
  for (const auto& [player, s] : series) {
    if (s.empty()) continue;
    for (int role : eligible_roles(s, config)) {
      if (role < 0 || role >= k) throw Error("invalid_argument", "role index out of range");
      out[static_cast<std::size_t>(role)].entries.push_back({player, s.r_bar(), s.size()});
    }
  }
  for (auto& r : out) std::sort(r.entries.begin(), r.entries.end(), ranks_before);
  return out;
}

std::vector<RankEntry> overall_ranking(const SeriesMap& series, const RatingConfig& config) {
  std::vector<RankEntry> out;
  for (const auto& [player, s] : series) {
    if (!s.empty() && s.size() >= config.min_matches) out.push_back({player, s.r_bar(), s.size()});
  }
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

VersatilityScore versatility(std::span<const RoleAssignment> history, int k,
                             std::int64_t player_id) {
  if (k < 2) throw Error("invalid_argument", "versatility needs k >= 2");
  if (history.empty()) throw Error("invalid_argument", "player has no role history");
  VersatilityScore score;
  score.player_id = player_id;
  score.frequencies.assign(static_cast<std::size_t>(k), 0.0);
  for (const auto& a : history) {
    const auto roles = a.roles();
    const double share = 1.0 / static_cast<double>(roles.size());
    for (int r : roles) {
      if (r < 0 || r >= k) throw Error("invalid_argument", "role index out of range");
      score.frequencies[static_cast<std::size_t>(r)] += share;
    }
  }
  double entropy = 0.0;
  for (auto& p : score.frequencies) {
    p /= static_cast<double>(history.size());
    if (p > 0.0) entropy -= p * std::log(p);
  }
  score.value = std::clamp(entropy / std::log(static_cast<double>(k)), 0.0, 1.0);
  return score;
}

RatingStats rating_stats(std::span<const MatchRating> ratings) {
  if (ratings.size() < 2) throw Error("invalid_argument", "rating statistics need at least two ratings");
  RatingStats stats;
  stats.count = ratings.size();
  std::vector<double> all;
  all.reserve(ratings.size());
  std::map<std::int64_t, std::vector<double>> by_player;
  for (const auto& m : ratings) {
    all.push_back(m.r);
    by_player[m.player_id].push_back(m.r);
  }
  stats.mean = mean(all);
  stats.stddev = stddev(all);
  stats.excellence_threshold = stats.mean + 2.0 * stats.stddev;
  stats.band_low = stats.mean - 2.0 * stats.stddev;
  stats.band_high = stats.excellence_threshold;
  for (double r : all) {
    if (r > stats.excellence_threshold) ++stats.excellent;
    if (r >= stats.band_low && r <= stats.band_high) ++stats.within_band;
  }
  std::vector<double> means, stds;
  for (const auto& [player, rs] : by_player) {
    PlayerRatingSummary summary;
    summary.matches = rs.size();
    summary.mean = mean(rs);
    summary.stddev = stddev(rs);
    summary.excellent = static_cast<std::size_t>(std::count_if(
        rs.begin(), rs.end(), [&](double r) { return r > stats.excellence_threshold; }));
    means.push_back(summary.mean);
    stds.push_back(summary.stddev);
    stats.players.emplace(player, summary);
  }
  if (means.size() >= 2) stats.mean_std_correlation = pearson(means, stds);
  return stats;
}

std::vector<AlphaCorrelation> alpha_sweep_correlation(const SeriesMap& series,
                                                      std::span<const double> alphas,
                                                      const RatingConfig& config) {
  std::vector<AlphaCorrelation> out;
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("invalid_argument", "alpha must lie in [0, 1]");
    AlphaCorrelation row;
    row.alpha = alpha;
    std::vector<double> plain, adjusted;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> roles;
    for (const auto& [player, s] : series) {
      if (s.empty() || s.size() < config.min_matches) continue;
      std::optional<double> running;
      for (const auto& m : s.matches) {
        running = ewma_update(running, alpha * m.norm_goals + (1.0 - alpha) * m.r, config.beta);
      }
      plain.push_back(s.r_bar());
      adjusted.push_back(*running);
      for (int role : eligible_roles(s, config)) {
        roles[role].first.push_back(s.r_bar());
        roles[role].second.push_back(*running);
      }
    }
    if (plain.size() >= 2) row.overall = pearson(plain, adjusted);
    for (const auto& [role, xs] : roles) {
      row.per_role[role] = xs.first.size() >= 2 ? pearson(xs.first, xs.second) : std::nullopt;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ExpertPair> read_expert_pairs(std::istream& in) {
  std::vector<ExpertPair> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 5) {
      throw ValidationError("line " + std::to_string(number) + ": expected 5 fields, got " +
                           std::to_string(fields.size()));
    }
    ExpertPair pair;
    pair.first = parse_int(fields[0], "player_a");
    pair.second = parse_int(fields[1], "player_b");
    for (std::size_t i = 0; i < 3; ++i) pair.labels[i] = parse_label(fields[i + 2], number);
    out.push_back(pair);
  }
  return out;
}

void write_expert_pairs(std::span<const ExpertPair> pairs, std::ostream& out) {
  for (const auto& p : pairs) {
    out << p.first << '\t' << p.second;
    for (auto l : p.labels) out << '\t' << label_name(l);
    out << '\n';
  }
}

std::optional<double> ConcordanceBucket::rate() const {
  if (evaluated == 0) return std::nullopt;
  return static_cast<double>(agreed) / static_cast<double>(evaluated);
}

ConcordanceReport concordance(std::span<const ExpertPair> pairs,
                              const std::map<std::int64_t, std::size_t>& positions) {
  ConcordanceReport report;
  report.buckets[0].min_distance = 1;
  report.buckets[0].max_distance = 10;
  report.buckets[1].min_distance = 11;
  report.buckets[1].max_distance = 20;
  report.buckets[2].min_distance = 21;

  for (const auto& p : pairs) {
    int first = 0, second = 0, equal = 0;
    for (auto l : p.labels) {
      if (l == ExpertLabel::first) ++first;
      else if (l == ExpertLabel::second) ++second;
      else ++equal;
    }
    if (equal == 3 || (first == 1 && second == 1 && equal == 1)) {
      ++report.discarded;
      continue;
    }
    const auto a = positions.find(p.first);
    const auto b = positions.find(p.second);
    if (a == positions.end() || b == positions.end() || p.first == p.second) {
      ++report.skipped;
      report.warnings.push_back("pair " + std::to_string(p.first) + " " + std::to_string(p.second) +
                                " skipped: player not ranked");
      continue;
    }
    const bool engine_first = a->second < b->second;
    // A majority of "equal" never agrees with the engine, which always prefers one player.
    const bool agreed = (first >= 2 && engine_first) || (second >= 2 && !engine_first);
    ++report.evaluated;
    if (agreed) ++report.agreed;
    if (first == 3 || second == 3) {
      ++report.unanimous;
      if (agreed) ++report.unanimous_agreed;
    }
    const std::size_t distance =
        a->second > b->second ? a->second - b->second : b->second - a->second;
    auto& bucket = distance <= 10 ? report.buckets[0] : distance <= 20 ? report.buckets[1] : report.buckets[2];
    ++bucket.evaluated;
    if (agreed) ++bucket.agreed;
  }
  if (report.evaluated == 0) throw Error("undefined", "no expert pair could be evaluated");
  report.c_maj = static_cast<double>(report.agreed) / static_cast<double>(report.evaluated);
  if (report.unanimous > 0) {
    report.c_una = static_cast<double>(report.unanimous_agreed) / static_cast<double>(report.unanimous);
  }
  return report;
}

}  // namespace pitchrank
