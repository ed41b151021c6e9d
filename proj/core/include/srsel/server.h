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

#ifndef SRSEL_SERVER_H_
#define SRSEL_SERVER_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "srsel/ballot_log.h"
#include "srsel/sample_store.h"
#include "srsel/study.h"

namespace srsel {

// File-backed study state rooted at one directory:
//   sets/<set_id>/...        ingested sample sets
//   ballots.jsonl            append-only ballot log
//   sessions/<id>.json       rater sessions
class Store {
 public:
  // Loads and validates every set; throws naming the first missing or
  // undecodable file.
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  const std::map<std::string, LoadedSet>& sets() const { return sets_; }
  const LoadedSet* FindSet(const std::string& set_id) const;
  StudyCatalog Catalog() const;

  BallotLog& ballots() { return *log_; }
  const BallotLog& ballots() const { return *log_; }

  // Sessions persisted on disk, with round cursors advanced past any round
  // whose ballot is already in the log (a crash between log append and
  // session write loses nothing).
  std::map<std::string, Session> LoadSessions(const StudyConfig& config) const;
  void SaveSession(const Session& session) const;

 private:
  std::filesystem::path root_;
  std::map<std::string, LoadedSet> sets_;
  std::unique_ptr<BallotLog> log_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks an ephemeral port
  std::optional<std::filesystem::path> web_root;  // static UI bundle at "/"
};

// HTTP/JSON service under /api/v1.
class Server {
 public:
  Server(StudyConfig config, std::filesystem::path store_root);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and returns the bound port.
  int Bind(const ServerOptions& options);
  // Serves until Stop(); requires a prior Bind(). Stop() may be called from
  // any thread, before or during Run().
  void Run();
  void Stop();

  const Store& store() const;
  const StudyConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace srsel

#endif  // SRSEL_SERVER_H_
