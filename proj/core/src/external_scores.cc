// Copyright 2026 The sr-select Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "srsel/external_scores.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <vector>

#include "srsel/error.h"

namespace srsel {
namespace {

std::vector<std::string> SplitCommas(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void RowError(ErrorCode code, int line, const std::string& what) {
  throw Error(code, "external scores line " + std::to_string(line) + ": " +
                        what);
}

}  // namespace

void ExternalScoreTable::Insert(const std::string& image_id,
                                const std::string& score_name, double value) {
  if (image_id.empty() || score_name.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "external score needs a non-empty image_id and score_name");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument,
                "non-finite value for (" + image_id + ", " + score_name + ")");
  }
  auto [it, inserted] = rows_.try_emplace({image_id, score_name}, value);
  if (!inserted) {
    throw Error(ErrorCode::kDuplicate,
                "duplicate key (" + image_id + ", " + score_name + ")");
  }
}

std::optional<double> ExternalScoreTable::Lookup(
    const std::string& image_id, const std::string& score_name) const {
  const auto it = rows_.find({image_id, score_name});
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, double> ExternalScoreTable::ScoresFor(
    const std::string& image_id) const {
  std::map<std::string, double> out;
  for (auto it = rows_.lower_bound({image_id, std::string()});
       it != rows_.end() && it->first.first == image_id; ++it) {
    out.emplace(it->first.second, it->second);
  }
  return out;
}

std::set<std::string> ExternalScoreTable::ScoreNames() const {
  std::set<std::string> names;
  for (const auto& [key, value] : rows_) names.insert(key.second);
  return names;
}

ExternalScoreTable ParseExternalScores(std::istream& in) {
  ExternalScoreTable table;
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (!saw_header) {
      std::string_view header = trimmed;
      if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
      if (header != "image_id,score_name,value") {
        RowError(ErrorCode::kParse, line_no,
                 "expected header 'image_id,score_name,value'");
      }
      saw_header = true;
      continue;
    }
    if (trimmed.empty()) continue;
    const auto fields = SplitCommas(trimmed);
    if (fields.size() != 3) {
      RowError(ErrorCode::kParse, line_no,
               "expected 3 fields, got " + std::to_string(fields.size()));
    }
    const std::string id(Trim(fields[0]));
    const std::string name(Trim(fields[1]));
    const std::string_view text = Trim(fields[2]);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      RowError(ErrorCode::kParse, line_no,
               "cannot parse value '" + std::string(text) + "'");
    }
    try {
      table.Insert(id, name, value);
    } catch (const Error& e) {
      RowError(e.code(), line_no, e.what());
    }
  }
  if (!saw_header) {
    throw Error(ErrorCode::kParse, "external scores file is empty");
  }
  return table;
}

ExternalScoreTable LoadExternalScores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseExternalScores(in);
}

}  // namespace srsel
