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

#pragma once

#include <array>
#include <cstddef>

#include "pitchrank/event.hpp"
#include "pitchrank/store.hpp"

namespace pitchrank {

struct Distribution {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
};

struct CorpusStats {
  std::size_t events = 0;
  std::size_t matches = 0;
  std::size_t player_matches = 0;
  Distribution events_per_match;
  Distribution events_per_player_match;
  // Seconds between consecutive events of a match within the same period.
  Distribution inter_event_time;
  // Indexed by EventType; sums to 1.
  std::array<double, 7> type_frequency{};
};

// Throws Error("empty_corpus") when the store has no events.
CorpusStats corpus_stats(const EventStore& store);

}  // namespace pitchrank
