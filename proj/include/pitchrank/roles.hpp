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

// Role detection: centers of performance, k-means role model with
// silhouette-based selection of k, and soft (hybrid-aware) assignment.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "pitchrank/event.hpp"

namespace pitchrank {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

struct CenterOfPerformance {
  std::int64_t player_id = 0;
  std::int64_t match_id = 0;
  Point center;
  std::size_t event_count = 0;
};

// Mean position of one player's events in one match.
CenterOfPerformance compute_center(std::span<const Event> events);

struct KMeansResult {
  std::vector<Point> centroids;
  std::vector<int> labels;
  double inertia = 0.0;  // sum of squared distances to the assigned centroid
  int iterations = 0;
};

struct KMeansOptions {
  int max_iterations = 300;
  double tolerance = 1e-6;  // max centroid shift
};

// Lloyd iterations from a k-means++ seeding drawn from `rng`.
KMeansResult kmeans(std::span<const Point> points, int k, std::mt19937_64& rng,
                    const KMeansOptions& options = {});

// Mean silhouette with Euclidean distances; members of singleton clusters
// score 0. Throws when fewer than two clusters are present or all clusters
// are singletons.
double silhouette_score(std::span<const Point> points, std::span<const int> labels);

struct RoleFitConfig {
  int k_min = 2;
  int k_max = 20;
  int restarts = 10;
  std::uint64_t seed = 7;
  KMeansOptions kmeans;
  // Points used to score each k of the sweep (0 = all).
  std::size_t silhouette_sample = 5000;
  // Fitting points retained per cluster for soft assignment.
  std::size_t sample_cap = 10000;
};

struct RoleModel {
  int k = 0;
  std::vector<Point> centroids;
  // Silhouette of the retained fitting sample under the selected k.
  double silhouette = 0.0;
  std::uint64_t seed = 0;
  std::map<int, double> sweep;  // k -> silhouette
  // Retained fitting points of each cluster.
  std::vector<std::vector<Point>> samples;

  int nearest(const Point& p) const;
  std::uint64_t sample_digest() const;
};

RoleModel fit_roles(std::span<const Point> centers, const RoleFitConfig& config);

struct RoleAssignment {
  int primary = -1;
  std::vector<int> hybrids;           // sorted, never contains `primary`
  std::vector<double> silhouettes;    // per cluster; 0 at `primary`
  double delta = 0.0;

  // Primary plus hybrid roles.
  std::vector<int> roles() const;
};

// Primary role is the nearest centroid; every other cluster j whose
// k-silhouette s_j = (d_j - d_i) / max(d_i, d_j) is at most `delta` is
// added as a hybrid role, where d_z is the mean distance to the retained
// points of cluster z.
RoleAssignment soft_assign(const Point& center, const RoleModel& model, double delta);

// Roles held in at least `x_pct` percent of the given matches, counting
// hybrid roles of a match toward every role they name.
std::set<int> assign_player_roles(std::span<const RoleAssignment> matches, double x_pct = 40.0);

void write_role_model(const RoleModel& model, double delta, std::ostream& out);
RoleModel read_role_model(std::istream& in, double* delta = nullptr);

}  // namespace pitchrank
