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

#include "pitchrank/text_io.hpp"

#include <charconv>
#include <cmath>

#include "pitchrank/error.hpp"

namespace pitchrank {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("expected a number for " + std::string(what) + ", got '" +
                          std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("expected an integer for " + std::string(what) + ", got '" +
                          std::string(text) + "'");
  }
  return value;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t hash = seed;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::uint64_t parse_hex64(std::string_view text) {
  text = trim(text);
  if (text.starts_with("0x")) text.remove_prefix(2);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("expected a hex digest, got '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
    out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string KvRecord::rest_after(std::size_t n) const {
  // Skip the key and n fields in the raw line.
  std::string_view view = raw;
  for (std::size_t skipped = 0; skipped <= n; ++skipped) {
    view = view.substr(std::min(view.size(), view.find_first_not_of(" \t")));
    const auto end = view.find_first_of(" \t");
    if (end == std::string_view::npos) return {};
    view.remove_prefix(end);
  }
  return std::string(trim(view));
}

KvReader::KvReader(std::istream& in, std::string_view magic, int version) : in_(in) {
  auto header = next();
  const std::string expected = std::string(magic) + " " + std::to_string(version);
  if (!header || header->raw != expected) {
    throw ValidationError("expected file header '" + expected + "'" +
                          (header ? ", got '" + header->raw + "'" : ", got end of file"));
  }
}

std::optional<KvRecord> KvReader::next() {
  if (peeked_) {
    auto out = std::move(peeked_);
    peeked_.reset();
    return out;
  }
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    KvRecord record;
    record.raw = std::string(body);
    record.line = line_;
    auto parts = split_ws(body);
    record.key = parts.front();
    record.fields.assign(parts.begin() + 1, parts.end());
    return record;
  }
  return std::nullopt;
}

KvRecord KvReader::expect(std::string_view key) {
  auto record = next();
  if (!record) throw ValidationError("unexpected end of file, expected '" + std::string(key) + "'");
  if (record->key != key) {
    throw ValidationError("line " + std::to_string(record->line) + ": expected '" +
                          std::string(key) + "', got '" + record->key + "'");
  }
  return *record;
}

}  // namespace pitchrank
