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

#include "srsel/ballot_io.h"

#include <chrono>
#include <ctime>
#include <fstream>

#include "json.hpp"

namespace srsel {
namespace {

using nlohmann::json;

json BallotToJson(const Ballot& b) {
  json j;
  j["voter_id"] = b.voter_id;
  j["set_id"] = b.set_id;
  j["selections"] = b.selections;
  j["label"] = b.label ? json(*b.label) : json(nullptr);
  j["submitted_at"] = b.submitted_at ? json(*b.submitted_at) : json(nullptr);
  return j;
}

std::optional<std::string> OptionalString(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

Ballot BallotFromJsonValue(const json& j) {
  Ballot b;
  b.voter_id = j.at("voter_id").get<std::string>();
  b.set_id = j.at("set_id").get<std::string>();
  const json& sel = j.at("selections");
  if (!sel.is_array()) {
    throw json::type_error::create(302, "selections must be an array", &sel);
  }
  for (const json& v : sel) {
    if (!v.is_number_integer()) {
      throw json::type_error::create(302, "selections must be integers", &v);
    }
    b.selections.push_back(v.get<int>());
  }
  b.label = OptionalString(j, "label");
  b.submitted_at = OptionalString(j, "submitted_at");
  return b;
}

}  // namespace

std::string BallotToJsonLine(const Ballot& ballot) {
  try {
    return BallotToJson(ballot).dump();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("ballot not encodable: ") + e.what());
  }
}

Ballot BallotFromJson(const std::string& text) {
  try {
    return BallotFromJsonValue(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad ballot record: ") + e.what());
  }
}

std::vector<LoggedBallot> ParseBallotLog(std::istream& in) {
  std::vector<LoggedBallot> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back({line_no, BallotFromJsonValue(json::parse(line))});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, "ballot log line " +
                                         std::to_string(line_no) + ": " +
                                         e.what());
    }
  }
  return out;
}

std::vector<LoggedBallot> ReadBallotLog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseBallotLog(in);
}

std::string TallyToJson(const TallyResult& tally) {
  json j;
  j["set_id"] = tally.set_id;
  j["votes"] = tally.votes;
  j["ranking"] = tally.ranking;
  j["label_counts"] = json::object();
  for (const auto& [label, count] : tally.label_counts) {
    j["label_counts"][label] = count;
  }
  j["total_ballots"] = tally.total_ballots;
  return j.dump(2);
}

TallyResult TallyFromJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    TallyResult t;
    t.set_id = j.at("set_id").get<std::string>();
    t.votes = j.at("votes").get<std::vector<std::int64_t>>();
    t.ranking = j.at("ranking").get<std::vector<int>>();
    t.label_counts =
        j.at("label_counts").get<std::map<std::string, std::int64_t>>();
    t.total_ballots = j.at("total_ballots").get<std::int64_t>();
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad tally JSON: ") + e.what());
  }
}

std::string EnsembleToJson(const EnsembleResult& result) {
  json j;
  j["selected_indices"] = result.selected_indices;
  j["k"] = result.k;
  return j.dump(2);
}

std::string LabelConsensusToJson(const std::map<std::string, double>& shares) {
  return json(shares).dump();
}

std::string NowRfc3339() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace srsel
