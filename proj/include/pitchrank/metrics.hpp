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

#include <span>

namespace pitchrank {

// Area under the ROC curve from the Mann-Whitney rank statistic; tied
// scores contribute one half. Labels are 1 (positive) and 0 (negative).
// Throws Error("undefined") when only one class is present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct BinaryCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Predicts positive when score > threshold.
BinaryCounts confusion(std::span<const double> scores, std::span<const int> labels,
                       double threshold = 0.0);
// 0 when there are no true positives.
double f1_score(const BinaryCounts& counts);
double accuracy(const BinaryCounts& counts);

}  // namespace pitchrank
