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

#include "srsel/server.h"

#include <fstream>
#include <sstream>

namespace srsel {
namespace fs = std::filesystem;

Store::Store(fs::path root) : root_(std::move(root)) {
  if (!fs::is_directory(root_)) {
    throw Error(ErrorCode::kNotFound,
                "store root " + root_.string() + " is not a directory");
  }
  const fs::path sets_root = root_ / "sets";
  if (fs::is_directory(sets_root)) {
    for (const auto& entry : fs::directory_iterator(sets_root)) {
      if (!entry.is_directory()) continue;
      const std::string name = entry.path().filename().string();
      if (name.starts_with(".")) continue;  // interrupted ingest staging
      LoadedSet set = LoadSetDirectory(entry.path());
      if (set.manifest.set_id != name) {
        throw Error(ErrorCode::kInvalidArgument,
                    entry.path().string() + ": manifest set_id '" +
                        set.manifest.set_id + "' does not match directory");
      }
      sets_.emplace(name, std::move(set));
    }
  }
  fs::create_directories(root_ / "sessions");
  log_ = std::make_unique<BallotLog>(root_ / "ballots.jsonl");
}

const LoadedSet* Store::FindSet(const std::string& set_id) const {
  const auto it = sets_.find(set_id);
  return it == sets_.end() ? nullptr : &it->second;
}

StudyCatalog Store::Catalog() const {
  StudyCatalog catalog;
  for (const auto& [id, set] : sets_) catalog.emplace(id, Summarize(set));
  return catalog;
}

std::map<std::string, Session> Store::LoadSessions(
    const StudyConfig& config) const {
  std::map<std::string, Session> sessions;
  const auto logged = log_->Snapshot();
  for (const auto& entry : fs::directory_iterator(root_ / "sessions")) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    std::ostringstream text;
    text << in.rdbuf();
    Session s = SessionFromJson(text.str());
    if (s.study_id != config.study_id) continue;
    while (s.round_cursor < config.rounds) {
      const std::string& set_id = config.sets[s.round_cursor];
      const Ballot* found = nullptr;
      for (const Ballot& b : logged) {
        if (b.voter_id == s.voter_id && b.set_id == set_id) found = &b;
      }
      if (!found) break;
      if (static_cast<int>(s.ballots.size()) <= s.round_cursor) {
        s.ballots.push_back(*found);
      }
      ++s.round_cursor;
    }
    s.completed = s.round_cursor >= config.rounds;
    sessions.emplace(s.session_id, std::move(s));
  }
  return sessions;
}

void Store::SaveSession(const Session& session) const {
  const fs::path dir = root_ / "sessions";
  const fs::path final_path = dir / (session.session_id + ".json");
  const fs::path tmp_path = dir / (session.session_id + ".json.tmp");
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    out << SessionToJson(session);
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp_path.string());
  }
  fs::rename(tmp_path, final_path);
}

}  // namespace srsel
