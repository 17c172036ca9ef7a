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

// L2-regularized hinge-loss linear classifier trained by dual coordinate
// descent.
//
// Objective (per-example mean loss, so duplicating the data leaves the
// optimum unchanged):
//
//   min_{w,b}  1/2 (|w|^2 + b^2) + C/n * sum_i max(0, 1 - y_i (w.x_i + b))
//
// The intercept is learned as the weight of a constant feature of value
// `bias_scale`, as in LIBLINEAR. The dual box is 0 <= alpha_i <= C/n.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pitchrank {

struct SvmOptions {
  double cost = 1.0;
  // Stop once the spread of projected gradients over an epoch drops below this.
  double tolerance = 1e-4;
  int max_epochs = 2000;
  // Accept an unconverged solution when gap / max(1, primal) is at most this.
  double max_relative_gap = 1e-2;
  double bias_scale = 1.0;
  std::uint64_t seed = 1;
};

struct SvmModel {
  std::vector<double> weights;
  double intercept = 0.0;
  int epochs = 0;
  bool converged = false;
  double primal = 0.0;
  double dual = 0.0;

  double duality_gap() const { return primal - dual; }
  double decision(std::span<const double> x) const;
};

// `labels` are +1 / -1. Throws ConvergenceError when the epoch budget runs
// out with a relative duality gap above `max_relative_gap`.
SvmModel train_linear_svm(std::span<const std::span<const double>> rows,
                          std::span<const int> labels, const SvmOptions& options);

}  // namespace pitchrank
