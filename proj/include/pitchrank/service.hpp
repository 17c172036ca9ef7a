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

// HTTP API over an immutable model bundle and swappable rating snapshots.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include <json.hpp>

#include "pitchrank/pipeline.hpp"

namespace httplib {
class Server;
}

namespace pitchrank {

struct ApiResponse {
  int status = 200;
  nlohmann::ordered_json body;
};

// Request handlers are pure functions of (bundle, snapshot, request). The
// snapshot reference is replaced atomically; requests in flight keep the
// snapshot they started with.
class ScoutApi {
 public:
  ScoutApi(std::shared_ptr<const ModelBundle> bundle, std::shared_ptr<const Snapshot> snapshot);

  std::shared_ptr<const Snapshot> snapshot() const;
  void publish(std::shared_ptr<const Snapshot> snapshot);

  // Routes a request; `query` holds the decoded query-string parameters.
  ApiResponse handle(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& query, std::string_view body) const;

  ApiResponse roles() const;
  ApiResponse rankings(int role, std::optional<std::size_t> limit) const;
  ApiResponse player(std::int64_t player_id) const;
  ApiResponse search(std::string_view body) const;
  ApiResponse stats() const;

 private:
  std::shared_ptr<const ModelBundle> bundle_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
};

ApiResponse error_response(int status, std::string_view code, std::string_view message);

// Runs ScoutApi behind an HTTP listener on a background thread.
class ScoutServer {
 public:
  explicit ScoutServer(ScoutApi& api);
  ~ScoutServer();
  ScoutServer(const ScoutServer&) = delete;
  ScoutServer& operator=(const ScoutServer&) = delete;

  // Binds and starts serving; port 0 picks a free port. Returns the bound
  // port. Throws bind_failed when the address cannot be bound.
  int start(const std::string& host, int port);
  // Blocks until stop() is called from another thread or a signal.
  void wait();
  void stop();

 private:
  ScoutApi& api_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace pitchrank
