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

#include "pitchrank/config.hpp"

#include <fstream>
#include <sstream>

#include "pitchrank/error.hpp"
#include "pitchrank/text_io.hpp"

namespace pitchrank {
namespace {

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw SchemaError(key, "expected true or false, got '" + value + "'");
}

void require(bool ok, const char* key, const char* range) {
  if (!ok) throw SchemaError(key, std::string("must be ") + range);
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
  auto number = [&] { return parse_double(value, key); };
  auto integer = [&] { return parse_int(value, key); };
  if (key == "alpha") alpha = number();
  else if (key == "beta") beta = number();
  else if (key == "delta_s") delta_s = number();
  else if (key == "x_pct") x_pct = number();
  else if (key == "k_min") k_min = static_cast<int>(integer());
  else if (key == "k_max") k_max = static_cast<int>(integer());
  else if (key == "restarts") restarts = static_cast<int>(integer());
  else if (key == "seed") {
    const auto v = integer();
    if (v < 0) throw SchemaError(key, "must be non-negative");
    seed = static_cast<std::uint64_t>(v);
  } else if (key == "cost_grid") {
    cost_grid.clear();
    for (const auto& part : split(value, ',')) cost_grid.push_back(parse_double(trim(part), key));
  } else if (key == "folds") folds = static_cast<int>(integer());
  else if (key == "holdout") holdout = number();
  else if (key == "grid_rows") grid_rows = static_cast<int>(integer());
  else if (key == "grid_cols") grid_cols = static_cast<int>(integer());
  else if (key == "min_matches") {
    const auto v = integer();
    if (v < 0) throw SchemaError(key, "must be non-negative");
    min_matches = static_cast<std::size_t>(v);
  } else if (key == "min_events_for_role") {
    const auto v = integer();
    if (v < 1) throw SchemaError(key, "must be at least 1");
    min_events_for_role = static_cast<std::size_t>(v);
  } else if (key == "max_goals_cap") {
    if (value == "auto") max_goals_cap.reset();
    else max_goals_cap = static_cast<int>(integer());
  } else if (key == "keep_goalkeepers") keep_goalkeepers = parse_bool(value, key);
  else if (key == "strict") strict = parse_bool(value, key);
  else if (key == "store_path") store_path = value;
  else if (key == "bundle_path") bundle_path = value;
  else throw SchemaError(key, "unknown configuration key");
}

void PipelineConfig::validate() const {
  require(alpha >= 0.0 && alpha <= 1.0, "alpha", "in [0, 1]");
  require(beta >= 0.0 && beta <= 1.0, "beta", "in [0, 1]");
  require(delta_s >= 0.0, "delta_s", ">= 0");
  require(x_pct >= 0.0 && x_pct <= 100.0, "x_pct", "in [0, 100]");
  require(k_min >= 2 && k_max >= k_min, "k_min", "at least 2 and not above k_max");
  require(restarts >= 1, "restarts", ">= 1");
  require(!cost_grid.empty(), "cost_grid", "a non-empty list of positive numbers");
  for (double c : cost_grid) require(c > 0.0, "cost_grid", "a non-empty list of positive numbers");
  require(folds >= 2, "folds", ">= 2");
  require(holdout > 0.0 && holdout < 1.0, "holdout", "in (0, 1)");
  require(grid_rows >= 1 && grid_rows <= 1000, "grid_rows", "in [1, 1000]");
  require(grid_cols >= 1 && grid_cols <= 1000, "grid_cols", "in [1, 1000]");
  require(!max_goals_cap || *max_goals_cap >= 1, "max_goals_cap", ">= 1 or auto");
}

std::uint64_t PipelineConfig::digest() const {
  std::ostringstream text;
  text << "alpha " << format_double(alpha) << "\nbeta " << format_double(beta) << "\ndelta_s "
       << format_double(delta_s) << "\nx_pct " << format_double(x_pct) << "\nk " << k_min << ' '
       << k_max << "\nrestarts " << restarts << "\nseed " << seed << "\ncost_grid";
  for (double c : cost_grid) text << ' ' << format_double(c);
  text << "\nfolds " << folds << "\nholdout " << format_double(holdout) << "\ngrid " << grid_rows
       << ' ' << grid_cols << "\nmin_matches " << min_matches << "\nmin_events_for_role "
       << min_events_for_role << "\nmax_goals_cap " << (max_goals_cap ? *max_goals_cap : 0)
       << "\nkeep_goalkeepers " << keep_goalkeepers << "\nstrict " << strict << '\n';
  return fnv1a64(text.str());
}

void PipelineConfig::write(std::ostream& out) const {
  out << "alpha = " << format_double(alpha) << "\nbeta = " << format_double(beta)
      << "\ndelta_s = " << format_double(delta_s) << "\nx_pct = " << format_double(x_pct)
      << "\nk_min = " << k_min << "\nk_max = " << k_max << "\nrestarts = " << restarts
      << "\nseed = " << seed << "\ncost_grid = ";
  for (std::size_t i = 0; i < cost_grid.size(); ++i) {
    out << (i ? "," : "") << format_double(cost_grid[i]);
  }
  out << "\nfolds = " << folds << "\nholdout = " << format_double(holdout)
      << "\ngrid_rows = " << grid_rows << "\ngrid_cols = " << grid_cols
      << "\nmin_matches = " << min_matches << "\nmin_events_for_role = " << min_events_for_role
      << "\nmax_goals_cap = " << (max_goals_cap ? std::to_string(*max_goals_cap) : "auto")
      << "\nkeep_goalkeepers = " << (keep_goalkeepers ? "true" : "false")
      << "\nstrict = " << (strict ? "true" : "false") << '\n';
  if (!store_path.empty()) out << "store_path = " << store_path << '\n';
  if (!bundle_path.empty()) out << "bundle_path = " << bundle_path << '\n';
}

PipelineConfig read_config(std::istream& in) {
  PipelineConfig config;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(number) + ": expected key = value");
    }
    config.set(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
  }
  config.validate();
  return config;
}

PipelineConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path.string());
  return read_config(in);
}

}  // namespace pitchrank
