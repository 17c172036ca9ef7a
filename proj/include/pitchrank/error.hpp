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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pitchrank {

// Base of every error raised by the library. `code()` is a stable,
// machine-readable identifier that the HTTP layer forwards to clients.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed text; `offset` is the byte offset reported by the tokenizer.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error("parse_error", message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A required field is absent or has the wrong JSON type.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& detail)
      : Error("schema_error", "field '" + field + "': " + detail), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message) : Error("validation_error", message) {}
};

// Event without coordinates. Strict ingestion rejects it, lenient ingestion drops it.
class MissingPositionError : public ValidationError {
 public:
  explicit MissingPositionError(const std::string& message) : ValidationError(message) {}
};

// Event type that the engine does not model (goalkeeping, interruptions).
class UnsupportedEventError : public Error {
 public:
  explicit UnsupportedEventError(const std::string& name)
      : Error("unsupported_event", "unsupported event type '" + name + "'") {}
};

// Referential integrity failure during ingestion.
class IngestError : public Error {
 public:
  IngestError(const std::string& message, std::vector<std::int64_t> ids)
      : Error("ingest_error", message + describe(ids)), ids_(std::move(ids)) {}

  const std::vector<std::int64_t>& ids() const noexcept { return ids_; }

 private:
  static std::string describe(const std::vector<std::int64_t>& ids) {
    std::string out = ":";
    for (std::size_t i = 0; i < ids.size() && i < 20; ++i) out += " " + std::to_string(ids[i]);
    if (ids.size() > 20) out += " ... (" + std::to_string(ids.size()) + " total)";
    return out;
  }

  std::vector<std::int64_t> ids_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double duality_gap)
      : Error("convergence_error",
              message + " (duality gap " + std::to_string(duality_gap) + ")"),
        duality_gap_(duality_gap) {}

  double duality_gap() const noexcept { return duality_gap_; }

 private:
  double duality_gap_;
};

}  // namespace pitchrank
