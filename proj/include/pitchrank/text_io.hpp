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

// Small text helpers shared by the model and export file formats.

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pitchrank {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

double parse_double(std::string_view text, std::string_view what);
std::int64_t parse_int(std::string_view text, std::string_view what);

// 64-bit FNV-1a; used for catalog hashes and bundle digests.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);
std::uint64_t parse_hex64(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);
// Splits on runs of spaces/tabs.
std::vector<std::string> split_ws(std::string_view text);

// Line-oriented record reader for the key/value model files. Blank lines and
// lines starting with '#' are skipped. Each record is a key followed by
// whitespace-separated fields; `rest` keeps the raw remainder of the line.
struct KvRecord {
  std::string key;
  std::vector<std::string> fields;
  std::size_t line = 0;

  // Remainder of the line after the first `n` fields (used for names with spaces).
  std::string rest_after(std::size_t n) const;
  std::string raw;
};

class KvReader {
 public:
  // Reads the header line and checks it equals "<magic> <version>".
  KvReader(std::istream& in, std::string_view magic, int version);

  std::optional<KvRecord> next();
  // Returns the next record and requires its key to be `key`.
  KvRecord expect(std::string_view key);

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::optional<KvRecord> peeked_;
};

}  // namespace pitchrank
