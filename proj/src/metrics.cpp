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

#include "pitchrank/metrics.hpp"

#include "pitchrank/error.hpp"
#include "pitchrank/numeric.hpp"

namespace pitchrank {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("invalid_argument", "scores and labels differ");
  const auto ranks = average_ranks(scores);
  double positives = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      positives += 1.0;
      rank_sum += ranks[i];
    } else if (labels[i] != 0) {
      throw Error("invalid_argument", "labels must be 0 or 1");
    }
  }
  const double negatives = static_cast<double>(labels.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw Error("undefined", "AUC is undefined with a single class");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

BinaryCounts confusion(std::span<const double> scores, std::span<const int> labels,
                       double threshold) {
  if (scores.size() != labels.size()) throw Error("invalid_argument", "scores and labels differ");
  BinaryCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] > threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++c.tp;
    if (predicted && !actual) ++c.fp;
    if (!predicted && !actual) ++c.tn;
    if (!predicted && actual) ++c.fn;
  }
  return c;
}

double f1_score(const BinaryCounts& c) {
  if (c.tp == 0) return 0.0;
  return 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
}

double accuracy(const BinaryCounts& c) {
  const auto total = c.tp + c.fp + c.tn + c.fn;
  if (total == 0) return 0.0;
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

}  // namespace pitchrank
