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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "pitchrank/error.hpp"
#include "pitchrank/numeric.hpp"
#include "pitchrank/ranking.hpp"
#include "pitchrank/rating.hpp"
#include "pitchrank/retrieval.hpp"
#include "pitchrank/roles.hpp"

namespace pitchrank {
namespace {

using testing::make_event;

// ---- centers ----

TEST(ComputeCenter, MeanOfPositions) {
  std::vector<Event> events = {make_event(1, Subtype::simple_pass, {}, 1, 1, 1, 0, 0, 0),
                               make_event(2, Subtype::simple_pass, {}, 1, 1, 1, 1, 100, 100)};
  EXPECT_EQ(compute_center(events).center, (Point{50, 50}));
  EXPECT_EQ(compute_center(std::span(events).first(1)).center, (Point{0, 0}));
  std::vector<Event> one = {make_event(1, Subtype::simple_pass, {}, 1, 1, 1, 0, 49, 50)};
  EXPECT_EQ(compute_center(one).center, (Point{49, 50}));
  EXPECT_THROW(compute_center({}), Error);
}

TEST(ComputeCenter, MatchesMeanOracleAndIsTranslationEquivariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(10.0, 80.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Event> events;
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < 7; ++i) {
      events.push_back(make_event(i + 1, Subtype::simple_pass, {}, 1, 1, 1, i, u(rng), u(rng)));
      sx += events.back().position.x;
      sy += events.back().position.y;
    }
    const auto c = compute_center(events).center;
    EXPECT_NEAR(c.x, sx / 7.0, 1e-12);
    EXPECT_NEAR(c.y, sy / 7.0, 1e-12);
    const double dx = 5.5, dy = -3.25;
    for (auto& e : events) e.position = {e.position.x + dx, e.position.y + dy};
    const auto shifted = compute_center(events).center;
    EXPECT_NEAR(shifted.x, c.x + dx, 1e-9);
    EXPECT_NEAR(shifted.y, c.y + dy, 1e-9);
  }
}

// ---- silhouette ----

double silhouette_oracle(const std::vector<Point>& pts, const std::vector<int>& labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::map<int, std::pair<double, int>> by_cluster;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      auto& slot = by_cluster[labels[j]];
      slot.first += std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
      slot.second += 1;
    }
    if (!by_cluster.contains(labels[i])) continue;  // singleton
    const double a = by_cluster[labels[i]].first / by_cluster[labels[i]].second;
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [c, s] : by_cluster) {
      if (c != labels[i]) b = std::min(b, s.first / s.second);
    }
    if (std::max(a, b) > 0.0) total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(pts.size());
}

TEST(Silhouette, SeparatedPairsScoreNearOne) {
  const std::vector<Point> pts = {{0, 0}, {0, 1}, {100, 100}, {100, 99}};
  EXPECT_GT(silhouette_score(pts, std::vector<int>{0, 0, 1, 1}), 0.95);
}

TEST(Silhouette, IdenticalPointsScoreZero) {
  const std::vector<Point> pts(6, Point{3, 3});
  EXPECT_EQ(silhouette_score(pts, std::vector<int>{0, 0, 0, 1, 1, 1}), 0.0);
}

TEST(Silhouette, DegenerateLabelingsAreUndefined) {
  const std::vector<Point> pts = {{0, 0}, {1, 1}, {2, 2}};
  try {
    silhouette_score(pts, std::vector<int>{0, 1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "undefined");
  }
  EXPECT_THROW(silhouette_score(pts, std::vector<int>{0, 0, 0}), Error);
}

TEST(Silhouette, TenPointHandCase) {
  const std::vector<Point> pts = {{1, 1}, {2, 1}, {1, 3}, {10, 10}, {11, 12},
                                  {9, 11}, {30, 5}, {31, 6}, {29, 4}, {5, 5}};
  const std::vector<int> labels = {0, 0, 0, 1, 1, 1, 2, 2, 2, 0};
  EXPECT_NEAR(silhouette_score(pts, labels), silhouette_oracle(pts, labels), 1e-10);
}

TEST(Silhouette, RandomInstancesMatchOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng() % 28;
    const int k = 2 + static_cast<int>(rng() % 4);
    std::vector<Point> pts;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({u(rng), u(rng)});
      labels.push_back(i < 2 ? static_cast<int>(i) : static_cast<int>(rng() % k));
    }
    labels.push_back(labels[0]);
    pts.push_back({u(rng), u(rng)});
    EXPECT_NEAR(silhouette_score(pts, labels), silhouette_oracle(pts, labels), 1e-10);
  }
}

// ---- role fitting ----

std::vector<Point> blobs(const std::vector<Point>& centers, std::size_t per_blob, double spread,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  std::vector<Point> out;
  for (std::size_t i = 0; i < per_blob; ++i) {
    for (const auto& c : centers) out.push_back({c.x + g(rng), c.y + g(rng)});
  }
  return out;
}

const std::vector<Point> kEightCenters = {{20, 15}, {50, 15}, {80, 15}, {20, 50},
                                          {80, 50}, {20, 85}, {50, 85}, {80, 85}};

TEST(FitRoles, RecoversEightBlobs) {
  const auto pts = blobs(kEightCenters, 60, 3.0, 1);
  RoleFitConfig config;
  config.k_max = 12;
  config.restarts = 4;
  const auto model = fit_roles(pts, config);
  EXPECT_EQ(model.k, 8);
  EXPECT_GT(model.silhouette, 0.6);
  EXPECT_EQ(model.sweep.size(), 11u);
  EXPECT_EQ(model.samples.size(), 8u);
  std::size_t retained = 0;
  for (const auto& s : model.samples) retained += s.size();
  EXPECT_EQ(retained, pts.size());
  for (const auto& c : kEightCenters) {
    const auto& got = model.centroids[static_cast<std::size_t>(model.nearest(c))];
    EXPECT_LT(distance(got, c), 1.5);
  }
  // The stored silhouette recomputes from the retained fitting points.
  std::vector<Point> flat;
  std::vector<int> labels;
  for (std::size_t c = 0; c < model.samples.size(); ++c) {
    for (const auto& p : model.samples[c]) {
      flat.push_back(p);
      labels.push_back(static_cast<int>(c));
    }
  }
  EXPECT_NEAR(silhouette_score(flat, labels), model.silhouette, 1e-12);
}

TEST(FitRoles, RecoversTwoBlobsAndIsDeterministic) {
  const auto pts = blobs({{20, 50}, {80, 50}}, 100, 4.0, 2);
  RoleFitConfig config;
  config.k_max = 8;
  config.restarts = 3;
  const auto a = fit_roles(pts, config);
  const auto b = fit_roles(pts, config);
  EXPECT_EQ(a.k, 2);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.sweep, b.sweep);
}

TEST(FitRoles, TooFewDistinctCentersIsAnError) {
  std::vector<Point> pts(50, Point{10, 10});
  pts.push_back({20, 20});
  RoleFitConfig config;
  config.k_max = 5;
  EXPECT_THROW(fit_roles(pts, config), Error);
}

TEST(KMeans, EveryPointIsAssignedToItsNearestCentroid) {
  const auto pts = blobs(kEightCenters, 20, 6.0, 3);
  std::mt19937_64 rng(5);
  const auto result = kmeans(pts, 8, rng);
  ASSERT_EQ(result.labels.size(), pts.size());
  double inertia = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& c = result.centroids[static_cast<std::size_t>(result.labels[i])];
    for (const auto& other : result.centroids) EXPECT_LE(distance(pts[i], c), distance(pts[i], other) + 1e-9);
    inertia += std::pow(distance(pts[i], c), 2);
  }
  EXPECT_NEAR(inertia, result.inertia, 1e-6);
}

// ---- soft assignment ----

RoleModel two_cluster_model() {
  // Mirror-image clusters about x = 50, interleaved so per-cluster sums run in the same order.
  RoleModel model;
  model.k = 2;
  model.centroids = {{30, 50}, {70, 50}};
  model.samples.resize(2);
  for (double dx : {-2.0, 0.0, 2.0}) {
    for (double dy : {-2.0, 0.0, 2.0}) {
      model.samples[0].push_back({30 + dx, 50 + dy});
      model.samples[1].push_back({70 - dx, 50 + dy});
    }
  }
  return model;
}

TEST(SoftAssign, CenterOnAnIsolatedCentroidHasNoHybrid) {
  const auto model = two_cluster_model();
  const auto a = soft_assign({30, 50}, model, 0.1);
  EXPECT_EQ(a.primary, 0);
  EXPECT_TRUE(a.hybrids.empty());
  EXPECT_EQ(a.roles(), std::vector<int>{0});
  EXPECT_GT(a.silhouettes[1], 0.9);
}

TEST(SoftAssign, EquidistantCenterIsHybrid) {
  const auto model = two_cluster_model();
  const auto a = soft_assign({50, 50}, model, 0.1);
  EXPECT_EQ(a.primary, 0);
  EXPECT_NEAR(a.silhouettes[1], 0.0, 1e-12);
  EXPECT_EQ(a.hybrids, std::vector<int>{1});
  EXPECT_EQ(a.roles(), (std::vector<int>{0, 1}));
  EXPECT_EQ(soft_assign({50, 50}, model, 0.0).hybrids, std::vector<int>{1});
  EXPECT_THROW(soft_assign({50, 50}, model, -0.1), Error);
}

TEST(SoftAssign, SilhouetteMatchesHandComputation) {
  const auto model = two_cluster_model();
  const Point c{40, 50};
  double d0 = 0.0, d1 = 0.0;
  for (const auto& p : model.samples[0]) d0 += std::hypot(c.x - p.x, c.y - p.y);
  for (const auto& p : model.samples[1]) d1 += std::hypot(c.x - p.x, c.y - p.y);
  d0 /= 9.0;
  d1 /= 9.0;
  EXPECT_NEAR(soft_assign(c, model, 0.1).silhouettes[1], (d1 - d0) / std::max(d0, d1), 1e-12);
}

TEST(SoftAssign, HybridFractionIsMonotoneInDelta) {
  const auto pts = blobs(kEightCenters, 40, 8.0, 9);
  RoleFitConfig config;
  config.k_min = 8;
  config.k_max = 8;
  config.restarts = 2;
  const auto model = fit_roles(pts, config);
  std::size_t previous = 0;
  double max_s = 0.0, min_positive = 1.0;
  std::size_t non_positive = 0;
  for (const auto& p : pts) {
    const auto a = soft_assign(p, model, 0.0);
    EXPECT_EQ(a.primary, model.nearest(p));
    EXPECT_EQ(std::find(a.hybrids.begin(), a.hybrids.end(), a.primary), a.hybrids.end());
    double lowest = 1.0;
    for (int c = 0; c < model.k; ++c) {
      if (c != a.primary) lowest = std::min(lowest, a.silhouettes[static_cast<std::size_t>(c)]);
    }
    max_s = std::max(max_s, lowest);
    if (lowest > 0.0) min_positive = std::min(min_positive, lowest);
    else ++non_positive;
  }
  for (double delta = 0.0; delta <= 1.0; delta += 0.05) {
    std::size_t hybrid = 0;
    for (const auto& p : pts) hybrid += soft_assign(p, model, delta).hybrids.empty() ? 0 : 1;
    EXPECT_GE(hybrid, previous);
    previous = hybrid;
  }
  std::size_t none = 0, all = 0;
  for (const auto& p : pts) {
    none += soft_assign(p, model, min_positive / 2.0).hybrids.empty() ? 0 : 1;
    all += soft_assign(p, model, max_s).hybrids.empty() ? 0 : 1;
  }
  // Points sitting closer on average to another cluster stay hybrid at any delta.
  EXPECT_EQ(none, non_positive);
  EXPECT_EQ(all, pts.size());
}

RoleAssignment role(int primary, std::vector<int> hybrids = {}) {
  RoleAssignment a;
  a.primary = primary;
  a.hybrids = std::move(hybrids);
  return a;
}

TEST(AssignPlayerRoles, ThresholdExamples) {
  std::vector<RoleAssignment> ten(10, role(3));
  EXPECT_EQ(assign_player_roles(ten, 40), std::set<int>{3});
  std::vector<RoleAssignment> split;
  for (int i = 0; i < 5; ++i) split.push_back(role(1));
  for (int i = 0; i < 5; ++i) split.push_back(role(2));
  EXPECT_EQ(assign_player_roles(split, 40), (std::set<int>{1, 2}));
  std::vector<RoleAssignment> skew;
  for (int i = 0; i < 3; ++i) skew.push_back(role(1));
  for (int i = 0; i < 7; ++i) skew.push_back(role(2));
  EXPECT_EQ(assign_player_roles(skew, 40), std::set<int>{2});
  // Hybrid matches count towards every role they carry.
  skew[3].hybrids = {1};
  EXPECT_EQ(assign_player_roles(skew, 40), (std::set<int>{1, 2}));
}

TEST(RoleModelFile, RoundTripAndDigestCheck) {
  const auto pts = blobs({{20, 50}, {80, 50}}, 30, 4.0, 2);
  RoleFitConfig config;
  config.k_max = 4;
  config.restarts = 2;
  const auto model = fit_roles(pts, config);
  std::stringstream buf;
  write_role_model(model, 0.1, buf);
  const std::string text = buf.str();
  double delta = 0;
  const auto back = read_role_model(buf, &delta);
  EXPECT_EQ(delta, 0.1);
  EXPECT_EQ(back.k, model.k);
  EXPECT_EQ(back.centroids, model.centroids);
  EXPECT_EQ(back.samples, model.samples);
  EXPECT_EQ(back.sweep, model.sweep);
  EXPECT_EQ(back.silhouette, model.silhouette);
  EXPECT_EQ(back.sample_digest(), model.sample_digest());

  auto tampered = text;
  const auto pos = tampered.find("\nsample ");
  ASSERT_NE(pos, std::string::npos);
  tampered.insert(pos + 1, "sample 0 1 1\n");
  std::istringstream in(tampered);
  EXPECT_THROW(read_role_model(in), Error);
}

// ---- rating ----

WeightVector weights_of(std::vector<double> w) {
  WeightVector out;
  out.weights = std::move(w);
  return out;
}

TEST(RatePerformance, AffineBoundsExamples) {
  const auto w = weights_of({0.5, -0.25, 1.0, -0.75});
  const auto cfg = RatingConfig::from_weights(w);
  EXPECT_EQ(cfg.lower, -1.0);
  EXPECT_EQ(cfg.upper, 1.5);
  EXPECT_DOUBLE_EQ(rate_performance(std::vector<double>{0, 0, 0, 0}, w, cfg), 1.0 / 2.5);
  EXPECT_DOUBLE_EQ(rate_performance(std::vector<double>{1, 0, 1, 0}, w, cfg), 1.0);
  EXPECT_DOUBLE_EQ(rate_performance(std::vector<double>{0, 1, 0, 1}, w, cfg), 0.0);
  try {
    rate_performance(std::vector<double>{0, 0}, w, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "catalog_mismatch");
  }
  EXPECT_THROW(RatingConfig::from_weights(weights_of({0, 0})), Error);
}

TEST(RatePerformance, MatchesDirectArithmeticAndStaysInRange) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(76), x(76);
    for (auto& v : w) v = g(rng);
    for (auto& v : x) v = u(rng);
    double lo = 0.0, hi = 0.0, s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      (w[i] < 0 ? lo : hi) += w[i];
      s += w[i] * x[i];
    }
    const auto wv = weights_of(w);
    const double r = rate_performance(x, wv, RatingConfig::from_weights(wv));
    EXPECT_NEAR(r, (s - lo) / (hi - lo), 1e-12);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(RatePerformance, MonotoneInEachFeature) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(20);
  for (auto& v : w) v = g(rng);
  const auto wv = weights_of(w);
  const auto cfg = RatingConfig::from_weights(wv);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(20);
    for (auto& v : x) v = u(rng) * 0.9;
    const std::size_t i = rng() % 20;
    auto y = x;
    y[i] += 0.1;
    const double before = rate_performance(x, wv, cfg), after = rate_performance(y, wv, cfg);
    if (w[i] > 0) EXPECT_GE(after, before);
    else EXPECT_LE(after, before);
  }
}

TEST(RatePerformance, PositiveScalingKeepsOrder) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(10);
  for (auto& v : w) v = g(rng);
  auto scaled = w;
  for (auto& v : scaled) v *= 3.7;
  const auto a = weights_of(w), b = weights_of(scaled);
  const auto ca = RatingConfig::from_weights(a), cb = RatingConfig::from_weights(b);
  std::vector<double> ra, rb;
  for (int p = 0; p < 50; ++p) {
    std::vector<double> x(10);
    for (auto& v : x) v = u(rng);
    ra.push_back(rate_performance(x, a, ca));
    rb.push_back(rate_performance(x, b, cb));
  }
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_NEAR(ra[i], rb[i], 1e-12);
  EXPECT_EQ(average_ranks(ra), average_ranks(rb));
}

TEST(AdjustedRating, Examples) {
  EXPECT_EQ(adjusted_rating(0.37, 2, 4, 0.0), 0.37);
  EXPECT_EQ(adjusted_rating(0.37, 2, 4, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(adjusted_rating(0.4, 1, 5, 0.5), 0.3);
  EXPECT_THROW(adjusted_rating(0.4, 1, 5, 1.5), Error);
  EXPECT_THROW(adjusted_rating(0.4, 1, 5, -0.1), Error);
  EXPECT_THROW(adjusted_rating(0.4, 1, 0, 0.5), Error);
}

TEST(AdjustedRating, IsAConvexCombination) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double r = u(rng), alpha = u(rng);
    const int goals = static_cast<int>(rng() % 5);
    const double ng = goals / 4.0;
    const double v = adjusted_rating(r, goals, 4, alpha);
    EXPECT_GE(v, std::min(r, ng) - 1e-15);
    EXPECT_LE(v, std::max(r, ng) + 1e-15);
  }
}

TEST(Ewma, Examples) {
  EXPECT_EQ(ewma_update(0.2, 0.7, 1.0), 0.7);
  EXPECT_EQ(ewma_update(std::nullopt, 0.4, 0.5), 0.4);
  EXPECT_DOUBLE_EQ(ewma_update(0.4, 0.8, 0.5), 0.6);
  std::optional<double> r;
  for (int g = 0; g < 30; ++g) {
    r = ewma_update(r, 0.5, 0.1);
    EXPECT_DOUBLE_EQ(*r, 0.5);
  }
  EXPECT_THROW(ewma_update(0.4, 0.8, 1.1), Error);
  EXPECT_THROW(ewma_update(0.4, 1.2, 0.5), Error);
}

TEST(Ewma, BoundedAndContractsTowardNewValue) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double beta = u(rng);
    std::optional<double> r;
    for (int g = 0; g < 20; ++g) {
      const double x = u(rng);
      const double prev = r.value_or(x);
      r = ewma_update(r, x, beta);
      EXPECT_GE(*r, 0.0);
      EXPECT_LE(*r, 1.0);
      EXPECT_LE(std::abs(*r - x), std::abs(prev - x) + 1e-15);
    }
    const double prev = *r, x = u(rng);
    EXPECT_LE(std::abs(ewma_update(prev, x, 0.9) - x), std::abs(ewma_update(prev, x, 0.3) - x) + 1e-15);
  }
}

// ---- series, rankings, versatility ----

RatingSeries series_of(std::int64_t player, const std::vector<double>& rs,
                       const std::vector<RoleAssignment>& roles, double beta = 0.1,
                       const std::vector<double>& norm_goals = {}) {
  RatingSeries s;
  s.player_id = player;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    MatchRating m;
    m.player_id = player;
    m.match_id = static_cast<std::int64_t>(i + 1);
    m.r = rs[i];
    m.norm_goals = norm_goals.empty() ? 0.0 : norm_goals[i];
    m.r_star = m.r;
    m.role = roles[i % roles.size()];
    append_rating(s, m, beta);
  }
  return s;
}

RatingConfig ranking_config(std::size_t min_matches = 1) {
  RatingConfig cfg;
  cfg.lower = -1;
  cfg.upper = 1;
  cfg.min_matches = min_matches;
  return cfg;
}

TEST(Series, ReplayReproducesAppend) {
  auto s = series_of(1, {0.4, 0.8, 0.2, 0.6}, {role(0)}, 0.5);
  EXPECT_DOUBLE_EQ(s.matches[1].r_bar, 0.6);
  const double expected = s.r_bar();
  for (auto& m : s.matches) m.r_bar = -1.0;
  replay_series(s, 0.5);
  EXPECT_DOUBLE_EQ(s.r_bar(), expected);
  EXPECT_THROW(RatingSeries{}.r_bar(), Error);
}

TEST(RoleRankings, OrderAndTieRule) {
  SeriesMap series;
  series[3] = series_of(3, {0.3}, {role(0)}, 1.0);
  series[1] = series_of(1, {0.5}, {role(0)}, 1.0);
  series[2] = series_of(2, {0.4}, {role(0)}, 1.0);
  series[7] = series_of(7, {0.4}, {role(0)}, 1.0);
  const auto ranking = build_role_ranking(series, 0, ranking_config());
  std::vector<std::int64_t> ids;
  for (const auto& e : ranking.entries) ids.push_back(e.player_id);
  EXPECT_EQ(ids, (std::vector<std::int64_t>{1, 2, 7, 3}));
  EXPECT_EQ(ranking.position_of(7), 3u);
  EXPECT_FALSE(ranking.position_of(99));
}

TEST(RoleRankings, EligibilityFollowsRoleShareAndMinMatches) {
  SeriesMap series;
  series[1] = series_of(1, std::vector<double>(10, 0.5), {role(0), role(1)});
  series[2] = series_of(2, std::vector<double>(10, 0.6), {role(0), role(0), role(0), role(2, {1})});
  series[3] = series_of(3, std::vector<double>(4, 0.9), {role(1)});
  const auto rankings = build_role_rankings(series, 3, ranking_config(5));
  ASSERT_EQ(rankings.size(), 3u);
  EXPECT_EQ(rankings[0].entries.size(), 2u);
  EXPECT_EQ(rankings[1].entries.size(), 1u);  // player 3 is below min_matches
  EXPECT_EQ(rankings[2].entries.size(), 0u);  // player 2 holds role 2 in 3 of 10 matches
  EXPECT_EQ(rankings[0].entries[0].player_id, 2);
  for (const auto& r : rankings) {
    EXPECT_EQ(r.entries.size(), build_role_ranking(series, r.role, ranking_config(5)).entries.size());
    for (std::size_t i = 1; i < r.entries.size(); ++i) EXPECT_GE(r.entries[i - 1].r_bar, r.entries[i].r_bar);
  }
  EXPECT_EQ(overall_ranking(series, ranking_config(5)).size(), 2u);
}

TEST(Versatility, SingleRoleAndUniform) {
  std::vector<RoleAssignment> one(12, role(4));
  EXPECT_EQ(versatility(one, 8).value, 0.0);
  std::vector<RoleAssignment> uniform;
  for (int r = 0; r < 8; ++r) uniform.push_back(role(r));
  EXPECT_NEAR(versatility(uniform, 8).value, 1.0, 1e-9);
  EXPECT_THROW(versatility({}, 8), Error);
}

TEST(Versatility, HybridMatchesSplitEqually) {
  const std::vector<RoleAssignment> history = {role(0), role(1, {2})};
  const auto v = versatility(history, 4);
  EXPECT_EQ(v.frequencies, (std::vector<double>{0.5, 0.25, 0.25, 0.0}));
  const double h = -(0.5 * std::log(0.5) + 2 * 0.25 * std::log(0.25));
  EXPECT_NEAR(v.value, h / std::log(4.0), 1e-12);
}

TEST(Versatility, StaysInUnitInterval) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RoleAssignment> history;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      auto a = role(static_cast<int>(rng() % 8));
      if (rng() % 4 == 0) a.hybrids = {(a.primary + 1) % 8};
      std::sort(a.hybrids.begin(), a.hybrids.end());
      history.push_back(a);
    }
    const auto v = versatility(history, 8);
    EXPECT_GE(v.value, 0.0);
    EXPECT_LE(v.value, 1.0);
    EXPECT_NEAR(std::accumulate(v.frequencies.begin(), v.frequencies.end(), 0.0), 1.0, 1e-12);
  }
}

// ---- rating statistics ----

std::vector<MatchRating> ratings_from(const std::vector<double>& rs) {
  std::vector<MatchRating> out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    MatchRating m;
    m.player_id = static_cast<std::int64_t>(i % 7);
    m.match_id = static_cast<std::int64_t>(i);
    m.r = rs[i];
    out.push_back(m);
  }
  return out;
}

TEST(RatingStats, ConstantRatings) {
  const auto stats = rating_stats(ratings_from(std::vector<double>(20, 0.4)));
  EXPECT_EQ(stats.stddev, 0.0);
  EXPECT_EQ(stats.excellent, 0u);
  EXPECT_EQ(stats.within_band, 20u);
  EXPECT_THROW(rating_stats(ratings_from({0.4})), Error);
}

TEST(RatingStats, PlantedOutlierIsTheOnlyExcellentPerformance) {
  std::vector<double> rs;
  for (int i = 0; i < 1000; ++i) rs.push_back(i % 2 ? 0.4 : 0.6);
  rs.push_back(0.5 + 3 * 0.1);
  const auto stats = rating_stats(ratings_from(rs));
  const double mu = mean(rs), sigma = stddev(rs);
  EXPECT_NEAR(stats.mean, mu, 1e-15);
  EXPECT_NEAR(stats.stddev, sigma, 1e-15);
  EXPECT_DOUBLE_EQ(stats.excellence_threshold, mu + 2 * sigma);
  EXPECT_EQ(stats.excellent, 1u);
  EXPECT_EQ(stats.within_band, 1000u);
  std::size_t per_player = 0;
  for (const auto& [id, s] : stats.players) per_player += s.excellent;
  EXPECT_EQ(per_player, 1u);
  ASSERT_TRUE(stats.mean_std_correlation);
}

// ---- alpha sweep ----

TEST(AlphaSweep, ZeroAlphaCorrelatesPerfectlyAndOneMatchesOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SeriesMap series;
  std::vector<double> r_bar, goals_bar;
  const double beta = 0.2;
  for (std::int64_t p = 1; p <= 60; ++p) {
    const double level = u(rng);
    std::vector<double> rs, gs;
    for (int m = 0; m < 12; ++m) {
      rs.push_back(std::clamp(level + 0.1 * (u(rng) - 0.5), 0.0, 1.0));
      gs.push_back(rng() % 5 == 0 ? 0.25 * static_cast<double>(1 + rng() % 4) : 0.0);
    }
    series[p] = series_of(p, rs, {role(static_cast<int>(p % 2))}, beta, gs);
    r_bar.push_back(series[p].r_bar());
    std::optional<double> g;
    for (double x : gs) g = ewma_update(g, x, beta);
    goals_bar.push_back(*g);
  }
  auto cfg = ranking_config(10);
  cfg.beta = beta;
  const std::vector<double> alphas = {0.0, 0.5, 1.0};
  const auto sweep = alpha_sweep_correlation(series, alphas, cfg);
  ASSERT_EQ(sweep.size(), 3u);
  EXPECT_NEAR(*sweep[0].overall, 1.0, 1e-12);
  EXPECT_NEAR(*sweep[2].overall, *pearson(r_bar, goals_bar), 1e-12);
  EXPECT_GT(*sweep[0].overall, *sweep[1].overall);
  EXPECT_GT(*sweep[1].overall, *sweep[2].overall);
  EXPECT_EQ(sweep[0].per_role.size(), 2u);
  const std::vector<double> bad = {1.5};
  EXPECT_THROW(alpha_sweep_correlation(series, bad, cfg), Error);
}

// ---- concordance ----

ExpertPair pair_of(std::int64_t a, std::int64_t b, ExpertLabel l1, ExpertLabel l2, ExpertLabel l3) {
  return {a, b, {l1, l2, l3}};
}

constexpr auto F = ExpertLabel::first;
constexpr auto S = ExpertLabel::second;
constexpr auto E = ExpertLabel::equal;

TEST(Concordance, HandTally) {
  const std::map<std::int64_t, std::size_t> positions = {{1, 1}, {2, 2}, {3, 5}, {4, 15}, {5, 40}};
  const std::vector<ExpertPair> pairs = {
      pair_of(1, 2, F, F, F),   // unanimous, engine agrees, distance 1
      pair_of(2, 1, F, F, E),   // majority for the lower-ranked player
      pair_of(3, 4, S, S, F),   // majority for the lower-ranked player, distance 10
      pair_of(5, 1, S, S, S),   // unanimous, engine agrees, distance 39
      pair_of(4, 2, E, E, S),   // majority "equal" counts against the engine, distance 13
      pair_of(1, 3, E, E, E),   // discarded
      pair_of(1, 99, F, F, F),  // unranked
      pair_of(2, 3, F, S, E),   // discarded
  };
  const auto report = concordance(pairs, positions);
  EXPECT_EQ(report.evaluated, 5u);
  EXPECT_EQ(report.agreed, 2u);
  EXPECT_DOUBLE_EQ(report.c_maj, 0.4);
  EXPECT_EQ(report.unanimous, 2u);
  ASSERT_TRUE(report.c_una);
  EXPECT_DOUBLE_EQ(*report.c_una, 1.0);
  EXPECT_EQ(report.discarded, 2u);
  EXPECT_EQ(report.skipped, 1u);
  EXPECT_EQ(report.warnings.size(), 1u);
  EXPECT_EQ(report.buckets[0].evaluated, 3u);
  EXPECT_EQ(report.buckets[0].agreed, 1u);
  EXPECT_EQ(report.buckets[1].evaluated, 1u);
  EXPECT_EQ(report.buckets[1].agreed, 0u);
  EXPECT_EQ(report.buckets[2].evaluated, 1u);
  EXPECT_EQ(report.buckets[2].agreed, 1u);
  std::size_t bucketed = 0;
  for (const auto& b : report.buckets) bucketed += b.evaluated;
  EXPECT_EQ(bucketed, report.evaluated);
}

TEST(Concordance, ExpertsFollowingTheRankingGiveFullAgreement) {
  std::map<std::int64_t, std::size_t> positions;
  for (std::int64_t p = 1; p <= 30; ++p) positions[p] = static_cast<std::size_t>(p);
  std::vector<ExpertPair> pairs;
  for (std::int64_t a = 1; a <= 30; a += 3) {
    for (std::int64_t b = 2; b <= 30; b += 4) {
      if (a == b) continue;
      const auto better = a < b ? F : S;
      pairs.push_back(pair_of(a, b, better, better, better));
    }
  }
  const auto report = concordance(pairs, positions);
  EXPECT_EQ(report.c_maj, 1.0);
  EXPECT_EQ(report.c_una, 1.0);
}

TEST(Concordance, RandomEngineSitsNearHalf) {
  std::mt19937_64 rng(13);
  std::map<std::int64_t, std::size_t> positions;
  std::vector<std::size_t> order(400);
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::int64_t p = 0; p < 400; ++p) positions[p] = order[static_cast<std::size_t>(p)];
  std::vector<ExpertPair> pairs;
  for (int i = 0; i < 8000; ++i) {
    const auto a = static_cast<std::int64_t>(rng() % 400);
    auto b = static_cast<std::int64_t>(rng() % 400);
    if (a == b) b = (b + 1) % 400;
    const auto l = rng() % 2 ? F : S;
    pairs.push_back(pair_of(a, b, l, l, rng() % 2 ? l : E));
  }
  EXPECT_NEAR(concordance(pairs, positions).c_maj, 0.5, 0.03);
}

TEST(Concordance, InvariantToOrderAndSwaps) {
  std::mt19937_64 rng(14);
  std::map<std::int64_t, std::size_t> positions;
  for (std::int64_t p = 0; p < 50; ++p) positions[p] = static_cast<std::size_t>(p + 1);
  const ExpertLabel labels[] = {F, S, E};
  std::vector<ExpertPair> pairs;
  for (int i = 0; i < 200; ++i) {
    const auto a = static_cast<std::int64_t>(rng() % 50);
    const auto b = static_cast<std::int64_t>((a + 1 + static_cast<std::int64_t>(rng() % 49)) % 50);
    pairs.push_back(pair_of(a, b, labels[rng() % 3], labels[rng() % 3], labels[rng() % 3]));
  }
  const auto base = concordance(pairs, positions);
  auto swapped = pairs;
  for (auto& p : swapped) {
    if (rng() % 2) continue;
    std::swap(p.first, p.second);
    for (auto& l : p.labels) l = l == F ? S : (l == S ? F : E);
  }
  std::shuffle(swapped.begin(), swapped.end(), rng);
  const auto other = concordance(swapped, positions);
  EXPECT_EQ(other.c_maj, base.c_maj);
  EXPECT_EQ(other.c_una, base.c_una);
  EXPECT_EQ(other.discarded, base.discarded);
}

TEST(Concordance, NothingEvaluableIsUndefined) {
  const std::vector<ExpertPair> pairs = {pair_of(1, 2, E, E, E)};
  try {
    concordance(pairs, {{1, 1}, {2, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "undefined");
  }
}

TEST(ExpertPairsFile, RoundTripAndValidation) {
  const std::vector<ExpertPair> pairs = {pair_of(1, 2, F, S, E), pair_of(9, 4, S, S, S)};
  std::stringstream buf;
  buf << "# player_a player_b labels\n";
  write_expert_pairs(pairs, buf);
  const auto back = read_expert_pairs(buf);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].labels, pairs[0].labels);
  EXPECT_EQ(back[1].first, 9);
  std::istringstream bad("1 2 first first\n");
  EXPECT_THROW(read_expert_pairs(bad), ValidationError);
  std::istringstream unknown("1 2 first first maybe\n");
  EXPECT_THROW(read_expert_pairs(unknown), ValidationError);
}

// ---- retrieval ----

std::vector<Event> events_at(const std::vector<Point>& pts, std::int64_t player = 1) {
  std::vector<Event> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.push_back(make_event(static_cast<std::int64_t>(i + 1), Subtype::simple_pass, {}, player, 1, 1,
                             static_cast<double>(i), pts[i].x, pts[i].y));
  }
  return out;
}

TEST(Tessellation, ZoneIndexingAndEdges) {
  const ZoneTessellation grid;
  EXPECT_EQ(grid.zones(), 100);
  EXPECT_EQ(grid.zone_of(5, 5), 0);
  EXPECT_EQ(grid.zone_of(15, 5), 1);
  EXPECT_EQ(grid.zone_of(5, 15), 10);
  EXPECT_EQ(grid.zone_of(10, 10), 11);
  EXPECT_EQ(grid.zone_of(100, 100), 99);
  EXPECT_EQ(grid.zone_of(0, 100), 90);
  EXPECT_THROW((ZoneTessellation{0, 3}.validate()), Error);
}

TEST(ZoneVector, OneHotAndSplitCounts) {
  const ZoneTessellation grid;
  const auto v = build_player_zone_vector(1, events_at({{5, 5}, {5, 5}, {1, 9}}), grid);
  EXPECT_EQ(v.presence[0], 1.0);
  EXPECT_EQ(v.total(), 3u);
  const auto w = build_player_zone_vector(1, events_at({{5, 5}, {5, 5}, {5, 5}, {95, 95}}), grid);
  EXPECT_EQ(w.presence[0], 0.75);
  EXPECT_EQ(w.presence[99], 0.25);
  const auto edge = build_player_zone_vector(1, events_at({{100, 100}}), grid);
  EXPECT_EQ(edge.presence[99], 1.0);
  EXPECT_THROW(build_player_zone_vector(1, {}, grid), Error);
}

TEST(ZoneVector, PresenceSumsToOne) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < 1 + rng() % 60; ++i) pts.push_back({u(rng), u(rng)});
    const auto v = build_player_zone_vector(1, events_at(pts), {});
    EXPECT_NEAR(std::accumulate(v.presence.begin(), v.presence.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(ScoreQuery, ExamplesAndLinearity) {
  const auto v = build_player_zone_vector(1, events_at({{5, 5}, {55, 55}, {95, 95}, {95, 95}}), {});
  EXPECT_DOUBLE_EQ(score_query(v.presence, std::vector<double>(100, 1.0)), 1.0);
  EXPECT_EQ(score_query(v.presence, std::vector<double>(100, 0.0)), 0.0);
  EXPECT_THROW(score_query(v.presence, std::vector<double>(99, 1.0)), Error);
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> q1(100), q2(100), sum(100);
  for (std::size_t i = 0; i < 100; ++i) {
    q1[i] = u(rng);
    q2[i] = u(rng);
    sum[i] = q1[i] + q2[i];
  }
  EXPECT_NEAR(score_query(v.presence, sum), score_query(v.presence, q1) + score_query(v.presence, q2), 1e-12);
}

TEST(ScoreQuery, BinaryQueriesAreMonotoneInSupport) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Point> pts;
  for (int i = 0; i < 80; ++i) pts.push_back({u(rng), u(rng)});
  const auto v = build_player_zone_vector(1, events_at(pts), {});
  std::vector<double> q(100, 0.0);
  double previous = 0.0;
  std::vector<int> zones(100);
  std::iota(zones.begin(), zones.end(), 0);
  std::shuffle(zones.begin(), zones.end(), rng);
  for (int z : zones) {
    q[static_cast<std::size_t>(z)] = 1.0;
    const double s = score_query(v.presence, q);
    EXPECT_GE(s, previous);
    EXPECT_LE(s, 1.0 + 1e-12);
    previous = s;
  }
}

struct Population {
  std::vector<PlayerZoneVector> vectors;
  std::vector<SearchCandidate> candidates;
};

Population population(std::size_t n, std::uint64_t seed, const ZoneTessellation& grid = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 100.0), r(0.0, 1.0);
  Population pop;
  std::vector<double> rbar;
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<Point> pts;
    const double cx = u(rng), cy = u(rng);
    for (int i = 0; i < 40; ++i) {
      pts.push_back({std::clamp(cx + (u(rng) - 50) / 4, 0.0, 100.0),
                     std::clamp(cy + (u(rng) - 50) / 4, 0.0, 100.0)});
    }
    pop.vectors.push_back(build_player_zone_vector(static_cast<std::int64_t>(p + 1),
                                                  events_at(pts, static_cast<std::int64_t>(p + 1)), grid));
    rbar.push_back(r(rng));
  }
  for (std::size_t p = 0; p < n; ++p) {
    pop.candidates.push_back({pop.vectors[p].player_id, pop.vectors[p].presence, rbar[p]});
  }
  return pop;
}

TEST(Search, MatchesScoreAllThenSortOracle) {
  const auto pop = population(50, 18);
  std::vector<int> zones = {7, 8, 9, 17, 18, 19, 27, 28, 29, 55};
  for (std::size_t k = 1; k <= 50; ++k) {
    const auto result = search(binary_query({}, zones, k), pop.candidates);
    std::vector<SearchHit> oracle;
    for (const auto& c : pop.candidates) {
      double s = 0.0;
      for (int z : zones) s += c.presence[static_cast<std::size_t>(z)];
      oracle.push_back({c.player_id, s * c.r_bar, s, c.r_bar});
    }
    std::sort(oracle.begin(), oracle.end(), [](const SearchHit& a, const SearchHit& b) {
      return a.z != b.z ? a.z > b.z : a.player_id < b.player_id;
    });
    ASSERT_EQ(result.hits.size(), k);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_EQ(result.hits[i].player_id, oracle[i].player_id);
      EXPECT_NEAR(result.hits[i].z, oracle[i].z, 1e-12);
    }
  }
  const auto all = search(binary_query({}, zones, 50), pop.candidates);
  std::set<std::int64_t> ids;
  for (const auto& h : all.hits) ids.insert(h.player_id);
  EXPECT_EQ(ids.size(), 50u);
}

TEST(Search, ZeroPresencePlayerRanksLast) {
  const ZoneTessellation grid;
  const auto a = build_player_zone_vector(1, events_at({{5, 5}}), grid);
  const auto b = build_player_zone_vector(2, events_at({{95, 95}}, 2), grid);
  const std::vector<SearchCandidate> candidates = {{1, a.presence, 0.9}, {2, b.presence, 0.1}};
  const auto result = search(binary_query(grid, std::vector<int>{99}, 10), candidates);
  ASSERT_EQ(result.hits.size(), 2u);
  EXPECT_EQ(result.hits[0].player_id, 2);
  EXPECT_EQ(result.hits[1].z, 0.0);
}

TEST(Search, RejectsEmptyAndNegativeQueries) {
  const auto pop = population(5, 19);
  ZoneQuery q;
  q.weights.assign(100, 0.0);
  try {
    search(q, pop.candidates);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "empty_query");
  }
  q.weights[3] = -1.0;
  q.weights[4] = 1.0;
  EXPECT_THROW(search(q, pop.candidates), Error);
}

TEST(Search, OrderingSurvivesGridRefinement) {
  const ZoneTessellation coarse{5, 5}, fine{10, 10};
  const auto pop_coarse = population(40, 20, coarse);
  const auto pop_fine = population(40, 20, fine);
  const std::vector<int> coarse_zones = {0, 6, 12, 24};
  std::vector<int> fine_zones;
  for (int z : coarse_zones) {
    const int row = z / 5, col = z % 5;
    for (int dr = 0; dr < 2; ++dr) {
      for (int dc = 0; dc < 2; ++dc) fine_zones.push_back((2 * row + dr) * 10 + 2 * col + dc);
    }
  }
  const auto a = search(binary_query(coarse, coarse_zones, 40), pop_coarse.candidates);
  const auto b = search(binary_query(fine, fine_zones, 40), pop_fine.candidates);
  for (std::size_t i = 0; i < a.hits.size(); ++i) {
    EXPECT_EQ(a.hits[i].player_id, b.hits[i].player_id);
    EXPECT_NEAR(a.hits[i].s, b.hits[i].s, 1e-12);
  }
}

TEST(ZoneQueryJson, ParsesZonesAndWeights) {
  const ZoneTessellation grid;
  const auto q = parse_zone_query(nlohmann::json::parse(R"({"zones": [3, 4], "top_k": 5})"), grid);
  EXPECT_EQ(q.top_k, 5u);
  EXPECT_EQ(q.weights[3], 1.0);
  EXPECT_EQ(std::accumulate(q.weights.begin(), q.weights.end(), 0.0), 2.0);
  nlohmann::json body;
  body["weights"] = std::vector<double>(100, 0.5);
  body["grid"] = {{"rows", 10}, {"cols", 10}};
  EXPECT_EQ(parse_zone_query(body, grid).weights[42], 0.5);
  for (const char* bad : {R"({"zones": [1], "weights": [1]})", R"({})", R"({"zones": "1"})",
                          R"({"zones": [1], "top_k": 0})", R"({"weights": [1, 2]})",
                          R"({"zones": [1], "grid": {"rows": 5, "cols": 5}})", R"([1, 2])"}) {
    EXPECT_THROW(parse_zone_query(nlohmann::json::parse(bad), grid), SchemaError) << bad;
  }
  EXPECT_THROW(parse_zone_query(nlohmann::json::parse(R"({"zones": [100]})"), grid), Error);
}

}  // namespace
}  // namespace pitchrank
