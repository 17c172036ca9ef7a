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

#include "pitchrank/service.hpp"

#include <httplib.h>

#include <charconv>

#include "pitchrank/error.hpp"

namespace pitchrank {
namespace {

using ojson = nlohmann::ordered_json;

int status_for(const std::string& code) {
  if (code == "not_found") return 404;
  if (code == "undefined") return 422;
  if (code == "parse_error" || code == "schema_error" || code == "validation_error" ||
      code == "invalid_argument" || code == "empty_query") {
    return 400;
  }
  return 500;
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

ojson role_json(const RoleAssignment& a) {
  ojson j;
  j["primary"] = a.primary;
  j["hybrids"] = a.hybrids;
  return j;
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

}  // namespace

ApiResponse error_response(int status, std::string_view code, std::string_view message) {
  ApiResponse r;
  r.status = status;
  r.body["error"]["code"] = code;
  r.body["error"]["message"] = message;
  return r;
}

ScoutApi::ScoutApi(std::shared_ptr<const ModelBundle> bundle, std::shared_ptr<const Snapshot> snapshot)
    : bundle_(std::move(bundle)), snapshot_(std::move(snapshot)) {
  if (!bundle_ || !snapshot_) throw Error("invalid_argument", "service needs a bundle and a snapshot");
}

std::shared_ptr<const Snapshot> ScoutApi::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

void ScoutApi::publish(std::shared_ptr<const Snapshot> snapshot) {
  if (!snapshot) throw Error("invalid_argument", "cannot publish an empty snapshot");
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snapshot);
}

ApiResponse ScoutApi::handle(std::string_view method, std::string_view path,
                             const std::map<std::string, std::string>& query,
                             std::string_view body) const {
  try {
    const bool get = method == "GET";
    if (get && path == "/roles") return roles();
    if (get && path == "/stats") return stats();
    if (method == "POST" && path == "/search") return search(body);
    constexpr std::string_view rankings_prefix = "/rankings/";
    constexpr std::string_view players_prefix = "/players/";
    if (get && path.starts_with(rankings_prefix)) {
      const auto role = parse_number<int>(path.substr(rankings_prefix.size()));
      if (!role) return error_response(400, "invalid_argument", "role must be an integer");
      std::optional<std::size_t> limit;
      if (auto it = query.find("limit"); it != query.end()) {
        limit = parse_number<std::size_t>(it->second);
        if (!limit) return error_response(400, "invalid_argument", "limit must be a non-negative integer");
      }
      return rankings(*role, limit);
    }
    if (get && path.starts_with(players_prefix)) {
      const auto id = parse_number<std::int64_t>(path.substr(players_prefix.size()));
      if (!id) return error_response(400, "invalid_argument", "player id must be an integer");
      return player(*id);
    }
    if (path == "/roles" || path == "/stats" || path == "/search" || path.starts_with(rankings_prefix) ||
        path.starts_with(players_prefix)) {
      return error_response(405, "method_not_allowed", "method not allowed");
    }
    return error_response(404, "not_found", "no such endpoint");
  } catch (const Error& e) {
    return error_response(status_for(e.code()), e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

ApiResponse ScoutApi::roles() const {
  const auto snap = snapshot();
  const auto& model = bundle_->roles;
  ApiResponse r;
  auto& b = r.body;
  b["k"] = model.k;
  b["silhouette"] = model.silhouette;
  b["deltaS"] = bundle_->delta_s;
  b["xPct"] = bundle_->x_pct;
  b["minMatches"] = bundle_->min_matches;
  b["grid"] = {{"rows", bundle_->grid.rows}, {"cols", bundle_->grid.cols}};
  b["sweep"] = ojson::array();
  for (const auto& [k, ss] : model.sweep) b["sweep"].push_back({{"k", k}, {"silhouette", ss}});
  b["roles"] = ojson::array();
  for (std::size_t i = 0; i < model.centroids.size(); ++i) {
    const std::size_t ranked = i < snap->rankings.size() ? snap->rankings[i].entries.size() : 0;
    b["roles"].push_back({{"role", i},
                          {"x", model.centroids[i].x},
                          {"y", model.centroids[i].y},
                          {"rankedPlayers", ranked}});
  }
  b["classifier"] = {{"auc", bundle_->holdout.auc},
                     {"f1", bundle_->holdout.f1},
                     {"accuracy", bundle_->holdout.accuracy}};
  b["matchesProcessed"] = snap->processed.size();
  return r;
}

ApiResponse ScoutApi::rankings(int role, std::optional<std::size_t> limit) const {
  const auto snap = snapshot();
  if (role < 0 || static_cast<std::size_t>(role) >= snap->rankings.size()) {
    return error_response(404, "not_found", "no role " + std::to_string(role));
  }
  const auto& ranking = snap->rankings[static_cast<std::size_t>(role)];
  ApiResponse r;
  r.body["role"] = role;
  r.body["xPct"] = ranking.x_pct;
  r.body["minMatches"] = ranking.min_matches;
  r.body["total"] = ranking.entries.size();
  r.body["entries"] = ojson::array();
  const auto n = std::min(limit.value_or(ranking.entries.size()), ranking.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = ranking.entries[i];
    const auto it = snap->profiles.find(e.player_id);
    r.body["entries"].push_back({{"position", i + 1},
                                 {"playerId", e.player_id},
                                 {"name", it != snap->profiles.end() ? it->second.name : ""},
                                 {"rBar", e.r_bar},
                                 {"matches", e.matches}});
  }
  return r;
}

ApiResponse ScoutApi::player(std::int64_t player_id) const {
  const auto snap = snapshot();
  const auto s = snap->series.find(player_id);
  const auto profile = snap->profiles.find(player_id);
  if (s == snap->series.end() || s->second.empty() || profile == snap->profiles.end()) {
    return error_response(404, "not_found", "no player " + std::to_string(player_id));
  }
  const auto config = bundle_->rating_config();
  const auto& series = s->second;
  ApiResponse r;
  auto& b = r.body;
  b["playerId"] = player_id;
  b["name"] = profile->second.name;
  b["matches"] = series.size();
  b["rBar"] = series.r_bar();
  b["rBarStar"] = series.r_bar_star();
  b["ratings"] = ojson::array();
  for (const auto& m : series.matches) {
    ojson row = {{"matchId", m.match_id},  {"teamId", m.team_id}, {"r", m.r},
                 {"rStar", m.r_star},      {"goals", m.goals},    {"rBar", m.r_bar},
                 {"rBarStar", m.r_bar_star}};
    row["role"] = m.role ? role_json(*m.role) : ojson(nullptr);
    b["ratings"].push_back(std::move(row));
  }
  const auto eligible = eligible_roles(series, config);
  b["roles"] = ojson(std::vector<int>(eligible.begin(), eligible.end()));
  const auto history = role_history(series);
  if (history.empty() || bundle_->roles.k < 2) {
    b["versatility"] = nullptr;
  } else {
    const auto v = versatility(history, bundle_->roles.k, player_id);
    b["versatility"] = {{"value", v.value}, {"frequencies", v.frequencies}};
  }
  b["heatmap"] = profile->second.presence;
  return r;
}

ApiResponse ScoutApi::search(std::string_view body) const {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return error_response(400, "parse_error", e.what());
  }
  const auto query = parse_zone_query(parsed, bundle_->grid);
  const auto snap = snapshot();
  const auto candidates = snap->candidates(bundle_->min_matches);
  const auto result = pitchrank::search(query, candidates);
  ApiResponse r;
  r.body = ojson::array();
  for (const auto& hit : result.hits) {
    const auto& profile = snap->profiles.at(hit.player_id);
    r.body.push_back({{"playerId", hit.player_id},
                      {"name", profile.name},
                      {"z", hit.z},
                      {"s", hit.s},
                      {"rBar", hit.r_bar},
                      {"heatmap", profile.presence}});
  }
  return r;
}

ApiResponse ScoutApi::stats() const {
  const auto snap = snapshot();
  const auto ratings = snap->ratings();
  const auto st = rating_stats(ratings);
  ApiResponse r;
  auto& b = r.body;
  b["count"] = st.count;
  b["mean"] = st.mean;
  b["stddev"] = st.stddev;
  b["excellenceThreshold"] = st.excellence_threshold;
  b["band"] = {st.band_low, st.band_high};
  b["excellent"] = st.excellent;
  b["withinBand"] = st.within_band;
  b["meanStdCorrelation"] = optional_number(st.mean_std_correlation);
  b["players"] = ojson::array();
  for (const auto& [player, p] : st.players) {
    b["players"].push_back({{"playerId", player},
                            {"matches", p.matches},
                            {"excellent", p.excellent},
                            {"mean", p.mean},
                            {"stddev", p.stddev}});
  }
  return r;
}

ScoutServer::ScoutServer(ScoutApi& api) : api_(api), server_(std::make_unique<httplib::Server>()) {
  // The library default sets SO_REUSEPORT, which lets a second server share a busy port.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const auto out = api_.handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(out.body.dump(), "application/json");
  };
  server_->Get(R"(/.*)", route);
  server_->Post(R"(/.*)", route);
  server_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

ScoutServer::~ScoutServer() { stop(); }

int ScoutServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error("bind_failed", "cannot bind " + host);
  } else if (!server_->bind_to_port(host, port)) {
    throw Error("bind_failed", "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void ScoutServer::wait() {
  if (thread_.joinable()) thread_.join();
}

void ScoutServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace pitchrank
