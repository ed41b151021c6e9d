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

#ifndef SRSEL_BALLOT_IO_H_
#define SRSEL_BALLOT_IO_H_

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "srsel/ensemble.h"

namespace srsel {

// One ballot as a single-line JSON object:
//   {"voter_id","set_id","selections","label","submitted_at"}
// `label` and `submitted_at` serialise as null when absent.
std::string BallotToJsonLine(const Ballot& ballot);
Ballot BallotFromJson(const std::string& text);

struct LoggedBallot {
  int line = 0;  // 1-based line in the source log
  Ballot ballot;
};

// Reads a JSONL ballot log. Blank lines are skipped; a malformed record
// throws kParse naming its line number.
std::vector<LoggedBallot> ParseBallotLog(std::istream& in);
std::vector<LoggedBallot> ReadBallotLog(const std::filesystem::path& path);

std::string TallyToJson(const TallyResult& tally);
TallyResult TallyFromJson(const std::string& text);

// `selected_indices` and `k`; the image itself travels separately as PNG.
std::string EnsembleToJson(const EnsembleResult& result);

std::string LabelConsensusToJson(const std::map<std::string, double>& shares);

// Current UTC time as RFC 3339 with second precision.
std::string NowRfc3339();

}  // namespace srsel

#endif  // SRSEL_BALLOT_IO_H_
