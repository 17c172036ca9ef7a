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

#include "pitchrank/roles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pitchrank/error.hpp"
#include "pitchrank/text_io.hpp"

namespace pitchrank {
namespace {

double squared(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Uniform double in [0, 1) built from the raw engine output.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> seeded_subsample(std::size_t n, std::size_t cap, std::uint64_t seed) {
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), 0);
  if (cap == 0 || n <= cap) return index;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cap; ++i) std::swap(index[i], index[i + rng() % (n - i)]);
  index.resize(cap);
  std::sort(index.begin(), index.end());
  return index;
}

std::vector<Point> seed_plus_plus(std::span<const Point> points, int k, std::mt19937_64& rng) {
  std::vector<Point> centroids;
  centroids.push_back(points[rng() % points.size()]);
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared(points[i], centroids[0]);
  while (static_cast<int>(centroids.size()) < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = unit(rng) * total;
      for (pick = 0; pick + 1 < points.size(); ++pick) {
        target -= d2[pick];
        if (target < 0.0) break;
      }
    } else {
      pick = rng() % points.size();
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], squared(points[i], centroids.back()));
    }
  }
  return centroids;
}

}  // namespace

double distance(const Point& a, const Point& b) { return std::sqrt(squared(a, b)); }

CenterOfPerformance compute_center(std::span<const Event> events) {
  if (events.empty()) throw Error("invalid_argument", "no events: the player has no center");
  CenterOfPerformance c;
  c.player_id = events.front().player_id;
  c.match_id = events.front().match_id;
  double sx = 0.0, sy = 0.0;
  for (const auto& e : events) {
    if (e.player_id != c.player_id || e.match_id != c.match_id) {
      throw Error("contract_error", "event slice mixes players or matches");
    }
    sx += e.position.x;
    sy += e.position.y;
  }
  c.event_count = events.size();
  c.center = {sx / static_cast<double>(events.size()), sy / static_cast<double>(events.size())};
  return c;
}

KMeansResult kmeans(std::span<const Point> points, int k, std::mt19937_64& rng,
                    const KMeansOptions& options) {
  if (k < 1 || static_cast<std::size_t>(k) > points.size()) {
    throw Error("invalid_argument", "k must be in [1, number of points]");
  }
  KMeansResult result;
  result.centroids = seed_plus_plus(points, k, rng);
  result.labels.assign(points.size(), 0);
  const auto n = points.size();

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = squared(points[i], result.centroids[static_cast<std::size_t>(c)]);
        if (d < best) {
          best = d;
          result.labels[i] = c;
        }
      }
    }
    std::vector<Point> sums(static_cast<std::size_t>(k));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(result.labels[i]);
      sums[c].x += points[i].x;
      sums[c].y += points[i].y;
      ++counts[c];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < sums.size(); ++c) {
      Point next;
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d =
              squared(points[i], result.centroids[static_cast<std::size_t>(result.labels[i])]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        next = points[far];
      } else {
        next = {sums[c].x / static_cast<double>(counts[c]), sums[c].y / static_cast<double>(counts[c])};
      }
      shift = std::max(shift, distance(next, result.centroids[c]));
      result.centroids[c] = next;
    }
    if (shift < options.tolerance) break;
  }

  result.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double d = squared(points[i], result.centroids[static_cast<std::size_t>(c)]);
      if (d < best) {
        best = d;
        result.labels[i] = c;
      }
    }
    result.inertia += best;
  }
  return result;
}

double silhouette_score(std::span<const Point> points, std::span<const int> labels) {
  if (points.size() != labels.size()) throw Error("invalid_argument", "labels do not match points");
  if (points.empty()) throw Error("undefined", "silhouette of an empty set");
  const int k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) {
    if (l < 0) throw Error("invalid_argument", "negative cluster label");
    ++sizes[static_cast<std::size_t>(l)];
  }
  const auto populated = std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; });
  if (populated < 2) throw Error("undefined", "silhouette needs at least two clusters");
  if (std::all_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s <= 1; })) {
    throw Error("undefined", "silhouette is undefined when every cluster is a singleton");
  }

  double total = 0.0;
  std::vector<double> sums(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) sums[static_cast<std::size_t>(labels[j])] += distance(points[i], points[j]);
    }
    const auto own = static_cast<std::size_t>(labels[i]);
    if (sizes[own] <= 1) continue;
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sums.size(); ++c) {
      if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(points.size());
}

int RoleModel::nearest(const Point& p) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::uint64_t RoleModel::sample_digest() const {
  std::uint64_t h = fnv1a64("");
  for (std::size_t c = 0; c < samples.size(); ++c) {
    for (const auto& p : samples[c]) {
      h = fnv1a64(std::to_string(c) + ' ' + format_double(p.x) + ' ' + format_double(p.y) + '\n', h);
    }
  }
  return h;
}

RoleModel fit_roles(std::span<const Point> centers, const RoleFitConfig& config) {
  if (config.k_min < 2 || config.k_max < config.k_min) {
    throw Error("invalid_argument", "k range must satisfy 2 <= k_min <= k_max");
  }
  if (config.restarts < 1) throw Error("invalid_argument", "restarts must be positive");
  {
    std::vector<std::pair<double, double>> distinct;
    distinct.reserve(centers.size());
    for (const auto& p : centers) distinct.emplace_back(p.x, p.y);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < static_cast<std::size_t>(config.k_max)) {
      throw Error("invalid_argument", "need at least k_max distinct centers, got " +
                                          std::to_string(distinct.size()));
    }
  }

  const auto score_index = seeded_subsample(centers.size(), config.silhouette_sample, config.seed);
  std::vector<Point> score_points;
  for (std::size_t i : score_index) score_points.push_back(centers[i]);

  RoleModel model;
  model.seed = config.seed;
  KMeansResult chosen;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int k = config.k_min; k <= config.k_max; ++k) {
    std::mt19937_64 rng(config.seed * 1000003ULL + static_cast<std::uint64_t>(k));
    KMeansResult best;
    for (int r = 0; r < config.restarts; ++r) {
      auto run = kmeans(centers, k, rng, config.kmeans);
      if (r == 0 || run.inertia < best.inertia) best = std::move(run);
    }
    std::vector<int> score_labels;
    for (std::size_t i : score_index) score_labels.push_back(best.labels[i]);
    const double ss = silhouette_score(score_points, score_labels);
    model.sweep[k] = ss;
    if (ss > best_score) {
      best_score = ss;
      chosen = std::move(best);
    }
  }

  model.k = static_cast<int>(chosen.centroids.size());
  model.centroids = chosen.centroids;
  model.samples.assign(static_cast<std::size_t>(model.k), {});
  std::vector<std::vector<Point>> members(static_cast<std::size_t>(model.k));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    members[static_cast<std::size_t>(chosen.labels[i])].push_back(centers[i]);
  }
  std::vector<Point> kept;
  std::vector<int> kept_labels;
  for (std::size_t c = 0; c < members.size(); ++c) {
    for (std::size_t i : seeded_subsample(members[c].size(), config.sample_cap, config.seed + c)) {
      model.samples[c].push_back(members[c][i]);
      kept.push_back(members[c][i]);
      kept_labels.push_back(static_cast<int>(c));
    }
  }
  model.silhouette = silhouette_score(kept, kept_labels);
  return model;
}

std::vector<int> RoleAssignment::roles() const {
  std::vector<int> out = hybrids;
  out.insert(std::lower_bound(out.begin(), out.end(), primary), primary);
  return out;
}

RoleAssignment soft_assign(const Point& center, const RoleModel& model, double delta) {
  if (!(delta >= 0.0)) throw Error("invalid_argument", "delta must be non-negative");
  if (model.k < 1 || model.samples.size() != static_cast<std::size_t>(model.k)) {
    throw Error("invalid_argument", "role model is not fitted");
  }
  RoleAssignment a;
  a.delta = delta;
  a.primary = model.nearest(center);
  std::vector<double> mean_d(static_cast<std::size_t>(model.k), 0.0);
  for (std::size_t c = 0; c < mean_d.size(); ++c) {
    const auto& pts = model.samples[c];
    if (pts.empty()) throw Error("invalid_argument", "role model has an empty cluster sample");
    double acc = 0.0;
    for (const auto& p : pts) acc += distance(center, p);
    mean_d[c] = acc / static_cast<double>(pts.size());
  }
  const double di = mean_d[static_cast<std::size_t>(a.primary)];
  a.silhouettes.assign(mean_d.size(), 0.0);
  for (std::size_t c = 0; c < mean_d.size(); ++c) {
    if (static_cast<int>(c) == a.primary) continue;
    const double denom = std::max(di, mean_d[c]);
    a.silhouettes[c] = denom > 0.0 ? (mean_d[c] - di) / denom : 0.0;
    if (a.silhouettes[c] <= delta) a.hybrids.push_back(static_cast<int>(c));
  }
  return a;
}

std::set<int> assign_player_roles(std::span<const RoleAssignment> matches, double x_pct) {
  std::set<int> out;
  if (matches.empty()) return out;
  std::map<int, std::size_t> counts;
  for (const auto& a : matches) {
    for (int r : a.roles()) ++counts[r];
  }
  const double total = static_cast<double>(matches.size());
  for (const auto& [role, count] : counts) {
    if (static_cast<double>(count) * 100.0 >= x_pct * total) out.insert(role);
  }
  return out;
}

void write_role_model(const RoleModel& model, double delta, std::ostream& out) {
  out << "pitchrank-roles 1\n";
  out << "k " << model.k << "\n";
  out << "silhouette " << format_double(model.silhouette) << "\n";
  out << "delta_s " << format_double(delta) << "\n";
  out << "seed " << model.seed << "\n";
  for (const auto& [k, ss] : model.sweep) out << "sweep " << k << " " << format_double(ss) << "\n";
  for (std::size_t c = 0; c < model.centroids.size(); ++c) {
    out << "centroid " << c << " " << format_double(model.centroids[c].x) << " "
        << format_double(model.centroids[c].y) << "\n";
  }
  out << "sample_digest " << hex64(model.sample_digest()) << "\n";
  for (std::size_t c = 0; c < model.samples.size(); ++c) {
    for (const auto& p : model.samples[c]) {
      out << "sample " << c << " " << format_double(p.x) << " " << format_double(p.y) << "\n";
    }
  }
  out << "end\n";
}

RoleModel read_role_model(std::istream& in, double* delta) {
  KvReader reader(in, "pitchrank-roles", 1);
  RoleModel model;
  model.k = static_cast<int>(parse_int(reader.expect("k").fields.at(0), "k"));
  if (model.k < 1) throw ValidationError("role model k must be positive");
  model.silhouette = parse_double(reader.expect("silhouette").fields.at(0), "silhouette");
  const double d = parse_double(reader.expect("delta_s").fields.at(0), "delta_s");
  if (delta) *delta = d;
  model.seed = static_cast<std::uint64_t>(parse_int(reader.expect("seed").fields.at(0), "seed"));
  model.samples.assign(static_cast<std::size_t>(model.k), {});
  std::uint64_t digest = 0;
  while (auto record = reader.next()) {
    const auto& f = record->fields;
    if (record->key == "end") break;
    if (record->key == "sweep" && f.size() == 2) {
      model.sweep[static_cast<int>(parse_int(f[0], "k"))] = parse_double(f[1], "silhouette");
    } else if (record->key == "centroid" && f.size() == 3) {
      model.centroids.push_back({parse_double(f[1], "x"), parse_double(f[2], "y")});
    } else if (record->key == "sample_digest" && f.size() == 1) {
      digest = parse_hex64(f[0]);
    } else if (record->key == "sample" && f.size() == 3) {
      const auto c = parse_int(f[0], "cluster");
      if (c < 0 || c >= model.k) throw ValidationError("sample cluster out of range");
      model.samples[static_cast<std::size_t>(c)].push_back(
          {parse_double(f[1], "x"), parse_double(f[2], "y")});
    } else {
      throw ValidationError("unexpected line " + std::to_string(record->line) + " in role model");
    }
  }
  if (model.centroids.size() != static_cast<std::size_t>(model.k)) {
    throw ValidationError("role model lists the wrong number of centroids");
  }
  if (digest != model.sample_digest()) throw ValidationError("role model sample digest mismatch");
  return model;
}

}  // namespace pitchrank
