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

#include "pitchrank/corpus_stats.hpp"

#include <algorithm>

#include "pitchrank/error.hpp"
#include "pitchrank/numeric.hpp"

namespace pitchrank {
namespace {

Distribution describe(const std::vector<double>& values) {
  Distribution d;
  d.count = values.size();
  if (values.empty()) return d;
  d.mean = mean(values);
  d.stddev = stddev(values);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  d.min = *lo;
  d.max = *hi;
  return d;
}

}  // namespace

CorpusStats corpus_stats(const EventStore& store) {
  if (store.events().empty()) throw Error("empty_corpus", "corpus has no events");

  CorpusStats stats;
  stats.events = store.events().size();
  std::vector<double> per_match;
  std::vector<double> per_player_match;
  std::vector<double> gaps;
  std::array<std::size_t, 7> type_counts{};

  for (const auto& match : store.matches()) {
    const auto events = store.events_of_match(match.match_id);
    if (events.empty()) continue;
    per_match.push_back(static_cast<double>(events.size()));
    for (const auto& [player, team] : store.participants(match.match_id)) {
      per_player_match.push_back(static_cast<double>(store.events_of(player, match.match_id).size()));
    }
    std::vector<const Event*> timeline;
    timeline.reserve(events.size());
    for (const auto& e : events) {
      timeline.push_back(&e);
      ++type_counts[static_cast<std::size_t>(e.type)];
    }
    std::sort(timeline.begin(), timeline.end(),
              [](const Event* a, const Event* b) { return chronological_less(*a, *b); });
    for (std::size_t i = 1; i < timeline.size(); ++i) {
      if (timeline[i]->period == timeline[i - 1]->period) {
        gaps.push_back(timeline[i]->event_sec - timeline[i - 1]->event_sec);
      }
    }
  }

  stats.matches = per_match.size();
  stats.player_matches = per_player_match.size();
  stats.events_per_match = describe(per_match);
  stats.events_per_player_match = describe(per_player_match);
  stats.inter_event_time = describe(gaps);
  for (std::size_t t = 0; t < type_counts.size(); ++t) {
    stats.type_frequency[t] = static_cast<double>(type_counts[t]) / static_cast<double>(stats.events);
  }
  return stats;
}

}  // namespace pitchrank
