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

// Pipeline configuration: a flat `key = value` file. Unknown keys and
// out-of-range values are rejected.

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pitchrank {

struct PipelineConfig {
  double alpha = 0.0;
  double beta = 0.1;
  double delta_s = 0.1;
  double x_pct = 40.0;
  int k_min = 2;
  int k_max = 20;
  int restarts = 10;
  std::uint64_t seed = 42;
  std::vector<double> cost_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
  int folds = 5;
  double holdout = 0.2;
  int grid_rows = 10;
  int grid_cols = 10;
  std::size_t min_matches = 10;
  std::size_t min_events_for_role = 3;
  // Fixed cap for goal normalization; empty = corpus maximum.
  std::optional<int> max_goals_cap;
  bool keep_goalkeepers = false;
  bool strict = false;
  std::string store_path;
  std::string bundle_path;

  void validate() const;
  // Sets one key from its text value; throws on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  // Canonical text of every tunable that affects the model, hashed.
  std::uint64_t digest() const;
  void write(std::ostream& out) const;
};

PipelineConfig read_config(std::istream& in);
PipelineConfig read_config(const std::filesystem::path& path);

}  // namespace pitchrank
