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

#include "srsel/ballot_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

#include "srsel/ballot_io.h"
#include "srsel/image_io.h"

namespace srsel {
namespace {

[[noreturn]] void ThrowErrno(const std::string& what) {
  throw Error(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

void WriteAll(int fd, const std::string& data, const std::string& path) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      ThrowErrno("write " + path);
    }
    done += static_cast<std::size_t>(n);
  }
}

}  // namespace

BallotLog::BallotLog(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    const auto bytes = ReadFileBytes(path_);
    std::string text(bytes.begin(), bytes.end());
    const std::size_t last_newline = text.rfind('\n');
    const std::size_t keep =
        last_newline == std::string::npos ? 0 : last_newline + 1;
    if (keep != text.size()) {
      std::filesystem::resize_file(path_, keep);
      text.resize(keep);
    }
    std::istringstream in(text);
    for (auto& logged : ParseBallotLog(in)) {
      keys_.emplace(logged.ballot.voter_id, logged.ballot.set_id);
      records_.push_back(std::move(logged.ballot));
    }
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) ThrowErrno("open " + path_.string());
}

BallotLog::~BallotLog() {
  if (fd_ >= 0) {
    ::fsync(fd_);
    ::close(fd_);
  }
}

BallotLog::AppendOutcome BallotLog::Append(const Ballot& ballot) {
  const std::string line = BallotToJsonLine(ballot) + "\n";
  std::lock_guard<std::mutex> lock(mu_);
  if (keys_.contains({ballot.voter_id, ballot.set_id})) {
    return AppendOutcome::kDuplicateVoter;
  }
  const off_t end = ::lseek(fd_, 0, SEEK_END);
  try {
    WriteAll(fd_, line, path_.string());
    if (::fsync(fd_) != 0) ThrowErrno("fsync " + path_.string());
  } catch (const Error&) {
    // Drop the partial record so the next append starts on a clean line.
    if (end >= 0) {
      [[maybe_unused]] const int rc = ::ftruncate(fd_, end);
    }
    throw;
  }
  keys_.emplace(ballot.voter_id, ballot.set_id);
  records_.push_back(ballot);
  return AppendOutcome::kAppended;
}

bool BallotLog::Contains(const std::string& voter_id,
                         const std::string& set_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return keys_.contains({voter_id, set_id});
}

std::vector<Ballot> BallotLog::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

std::vector<Ballot> BallotLog::SnapshotForSet(const std::string& set_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Ballot> out;
  for (const Ballot& b : records_) {
    if (b.set_id == set_id) out.push_back(b);
  }
  return out;
}

std::size_t BallotLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.size();
}

}  // namespace srsel
