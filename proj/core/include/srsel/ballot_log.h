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

#ifndef SRSEL_BALLOT_LOG_H_
#define SRSEL_BALLOT_LOG_H_

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "srsel/ensemble.h"

namespace srsel {

// Append-only JSONL ballot log with a single writer. Append returns only
// after the record has been written and fsync'ed. At most one record exists
// per (voter_id, set_id).
//
// Opening an existing log replays it. A trailing line without a newline is
// an append that was never acknowledged; it is truncated away.
class BallotLog {
 public:
  explicit BallotLog(std::filesystem::path path);
  ~BallotLog();
  BallotLog(const BallotLog&) = delete;
  BallotLog& operator=(const BallotLog&) = delete;

  enum class AppendOutcome { kAppended, kDuplicateVoter };

  AppendOutcome Append(const Ballot& ballot);

  bool Contains(const std::string& voter_id, const std::string& set_id) const;
  std::vector<Ballot> Snapshot() const;
  std::vector<Ballot> SnapshotForSet(const std::string& set_id) const;
  std::size_t size() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex mu_;
  std::vector<Ballot> records_;
  std::set<std::pair<std::string, std::string>> keys_;
};

}  // namespace srsel

#endif  // SRSEL_BALLOT_LOG_H_
