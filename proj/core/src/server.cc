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

#include <atomic>
#include <charconv>
#include <chrono>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "srsel/ballot_io.h"
#include "srsel/image_io.h"

namespace srsel {
namespace fs = std::filesystem;
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

void SendError(httplib::Response& res, int status, std::string_view code,
               const std::string& message) {
  res.status = status;
  res.set_content(json{{"code", code}, {"message", message}}.dump(), kJson);
}

std::string RandomSessionId() {
  static std::mutex mu;
  static std::random_device device;
  static std::mt19937_64 rng(
      (static_cast<std::uint64_t>(device()) << 32) ^ device());
  std::lock_guard<std::mutex> lock(mu);
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

struct SessionSlot {
  std::mutex mu;  // held for the whole of one submission
  Session session;
};

struct ImageRef {
  const LoadedSet* set;
  int index;
};

}  // namespace

struct Server::Impl {
  StudyConfig config;
  Store store;
  StudyCatalog catalog;
  std::map<std::string, ImageRef> images;  // content hash -> candidate

  std::shared_mutex sessions_mu;
  std::map<std::string, std::unique_ptr<SessionSlot>> sessions;

  httplib::Server http;
  bool bound = false;
  std::atomic<bool> running{false};
  std::atomic<bool> stop_requested{false};

  Impl(StudyConfig c, fs::path root)
      : config(std::move(c)), store(std::move(root)) {
    catalog = store.Catalog();
    ValidateStudyConfig(config, catalog);
    for (const auto& [id, set] : store.sets()) {
      for (std::size_t i = 0; i < set.candidate_hashes.size(); ++i) {
        images.emplace(set.candidate_hashes[i],
                       ImageRef{&set, static_cast<int>(i)});
      }
    }
    for (auto& [id, session] : store.LoadSessions(config)) {
      auto slot = std::make_unique<SessionSlot>();
      slot->session = std::move(session);
      sessions.emplace(id, std::move(slot));
    }
    Routes();
  }

  SessionSlot* FindSession(const std::string& id) {
    std::shared_lock lock(sessions_mu);
    const auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second.get();
  }

  void Routes();
  void GetStudy(httplib::Response& res);
  void CreateSession(const httplib::Request& req, httplib::Response& res);
  void GetRound(const std::string& id, httplib::Response& res);
  void PostBallot(const std::string& id, const httplib::Request& req,
                  httplib::Response& res);
  void GetTally(const std::string& set_id, const httplib::Request& req,
                httplib::Response& res);
  void GetEnsemble(const std::string& set_id, const httplib::Request& req,
                   httplib::Response& res);
  void ExportBallots(httplib::Response& res);
  void GetImage(const std::string& hash, httplib::Response& res);

  // Ballots for one set, optionally restricted to one label.
  std::vector<Ballot> SetBallots(const std::string& set_id,
                                 const httplib::Request& req) const {
    std::vector<Ballot> ballots = store.ballots().SnapshotForSet(set_id);
    if (req.has_param("label")) {
      ballots = FilterByLabel(ballots, req.get_param_value("label"));
    }
    return ballots;
  }
};

void Server::Impl::Routes() {
  http.Get("/api/v1/study", [this](const httplib::Request&,
                                   httplib::Response& res) { GetStudy(res); });
  http.Post("/api/v1/sessions",
            [this](const httplib::Request& req, httplib::Response& res) {
              CreateSession(req, res);
            });
  http.Get(R"(/api/v1/sessions/([0-9a-f]+)/round)",
           [this](const httplib::Request& req, httplib::Response& res) {
             GetRound(req.matches[1], res);
           });
  http.Post(R"(/api/v1/sessions/([0-9a-f]+)/ballot)",
            [this](const httplib::Request& req, httplib::Response& res) {
              PostBallot(req.matches[1], req, res);
            });
  http.Get(R"(/api/v1/sets/([A-Za-z0-9._-]+)/tally)",
           [this](const httplib::Request& req, httplib::Response& res) {
             GetTally(req.matches[1], req, res);
           });
  http.Get(R"(/api/v1/sets/([A-Za-z0-9._-]+)/ensemble)",
           [this](const httplib::Request& req, httplib::Response& res) {
             GetEnsemble(req.matches[1], req, res);
           });
  http.Get("/api/v1/export/ballots",
           [this](const httplib::Request&, httplib::Response& res) {
             ExportBallots(res);
           });
  http.Get(R"(/api/v1/images/([0-9a-f]{16}))",
           [this](const httplib::Request& req, httplib::Response& res) {
             GetImage(req.matches[1], res);
           });
  http.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      SendError(res, 500, ErrorCodeName(e.code()), e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, "internal", e.what());
    }
  });
}

void Server::Impl::GetStudy(httplib::Response& res) {
  res.set_content(StudyConfigToJson(config), kJson);
}

void Server::Impl::CreateSession(const httplib::Request& req,
                                 httplib::Response& res) {
  std::string voter_id;
  try {
    voter_id = json::parse(req.body).at("voter_id").get<std::string>();
  } catch (const json::exception& e) {
    return SendError(res, 400, "bad_request",
                     std::string("expected {\"voter_id\": ...}: ") + e.what());
  }
  if (voter_id.empty()) {
    return SendError(res, 400, "bad_request", "voter_id must be non-empty");
  }
  auto slot = std::make_unique<SessionSlot>();
  slot->session = NewSession(RandomSessionId(), voter_id, config);
  store.SaveSession(slot->session);
  const std::string id = slot->session.session_id;
  {
    std::unique_lock lock(sessions_mu);
    sessions.emplace(id, std::move(slot));
  }
  res.set_content(json{{"session_id", id}}.dump(), kJson);
}

void Server::Impl::GetRound(const std::string& id, httplib::Response& res) {
  SessionSlot* slot = FindSession(id);
  if (!slot) return SendError(res, 404, "unknown_session", "no session " + id);
  Session snapshot;
  {
    std::lock_guard<std::mutex> lock(slot->mu);
    snapshot = slot->session;
  }
  if (snapshot.completed) {
    return SendError(res, 409, "session_completed",
                     "all rounds have been answered");
  }
  const RoundView view = NextRound(snapshot, config, catalog);
  const LoadedSet& set = *store.FindSet(view.set_id);
  json j = json::parse(RoundViewToJson(view));
  json urls = json::array();
  for (int canonical : view.display_order) {
    urls.push_back("/api/v1/images/" + set.candidate_hashes[canonical]);
  }
  j["candidates"] = std::move(urls);
  res.set_content(j.dump(), kJson);
}

void Server::Impl::PostBallot(const std::string& id,
                              const httplib::Request& req,
                              httplib::Response& res) {
  SessionSlot* slot = FindSession(id);
  if (!slot) return SendError(res, 404, "unknown_session", "no session " + id);
  std::unique_lock<std::mutex> lock(slot->mu, std::try_to_lock);
  if (!lock.owns_lock()) {
    return SendError(res, 409, "concurrent_submission",
                     "another ballot for this session is in flight");
  }
  Ballot display;
  try {
    const json j = json::parse(req.body);
    display.voter_id = j.value("voter_id", std::string());
    display.set_id = j.value("set_id", std::string());
    if (!j.at("selections").is_array()) {
      return SendError(res, 400, "bad_request", "selections must be an array");
    }
    for (const json& v : j.at("selections")) {
      if (!v.is_number_integer()) {
        return SendError(res, 400, "bad_request",
                         "selections must be an array of integers");
      }
      display.selections.push_back(v.get<int>());
    }
    if (j.contains("label") && !j["label"].is_null()) {
      display.label = j["label"].get<std::string>();
    }
  } catch (const json::exception& e) {
    return SendError(res, 400, "bad_request",
                     std::string("malformed ballot: ") + e.what());
  }

  Session updated = slot->session;
  const SubmitResult result =
      RecordRoundBallot(updated, config, catalog, display);
  if (!result.accepted()) {
    return SendError(res, 422, result.code(), "ballot rejected");
  }
  Ballot canonical = result.canonical;
  canonical.submitted_at = NowRfc3339();
  if (store.ballots().Append(canonical) ==
      BallotLog::AppendOutcome::kDuplicateVoter) {
    return SendError(res, 422, "duplicate_voter",
                     "voter '" + canonical.voter_id +
                         "' already has a ballot for set '" +
                         canonical.set_id + "'");
  }
  updated.ballots.back() = canonical;
  store.SaveSession(updated);
  slot->session = std::move(updated);
  res.set_content(json{{"status", "accepted"},
                       {"round_cursor", slot->session.round_cursor},
                       {"completed", slot->session.completed}}
                      .dump(),
                  kJson);
}

void Server::Impl::GetTally(const std::string& set_id,
                            const httplib::Request& req,
                            httplib::Response& res) {
  const LoadedSet* set = store.FindSet(set_id);
  if (!set) return SendError(res, 404, "unknown_set", "no set " + set_id);
  const TallyResult tally =
      Tally(SetBallots(set_id, req), set->samples, config.max_select);
  json j = json::parse(TallyToJson(tally));
  if (!tally.label_counts.empty()) {
    j["label_consensus"] = LabelConsensus(tally);
  }
  res.set_content(j.dump(2), kJson);
}

void Server::Impl::GetEnsemble(const std::string& set_id,
                               const httplib::Request& req,
                               httplib::Response& res) {
  const LoadedSet* set = store.FindSet(set_id);
  if (!set) return SendError(res, 404, "unknown_set", "no set " + set_id);
  int k = config.ensemble_k;
  if (req.has_param("k")) {
    const std::string text = req.get_param_value("k");
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      return SendError(res, 400, "bad_request", "k must be an integer");
    }
  }
  if (k < 1 || k > set->samples.size()) {
    return SendError(res, 400, "bad_request", "k out of range");
  }
  const TallyResult tally =
      Tally(SetBallots(set_id, req), set->samples, config.max_select);
  const EnsembleResult result = EnsembleFromTally(set->samples, tally, k);
  const auto png = EncodePng(result.image);
  res.set_content(std::string(png.begin(), png.end()), "image/png");
}

void Server::Impl::ExportBallots(httplib::Response& res) {
  std::string body;
  for (const Ballot& b : store.ballots().Snapshot()) {
    body += BallotToJsonLine(b);
    body += '\n';
  }
  res.set_content(body, "application/x-ndjson");
}

void Server::Impl::GetImage(const std::string& hash, httplib::Response& res) {
  const auto it = images.find(hash);
  if (it == images.end()) {
    return SendError(res, 404, "unknown_image", "no image " + hash);
  }
  const LoadedSet& set = *it->second.set;
  const auto bytes =
      ReadFileBytes(set.dir / set.manifest.candidates[it->second.index]);
  res.set_header("Cache-Control", "public, max-age=31536000, immutable");
  res.set_header("ETag", "\"" + hash + "\"");
  res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
}

Server::Server(StudyConfig config, fs::path store_root)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(store_root))) {}

Server::~Server() = default;

int Server::Bind(const ServerOptions& options) {
  if (options.web_root) {
    if (!impl_->http.set_mount_point("/", options.web_root->string())) {
      throw Error(ErrorCode::kNotFound,
                  "web root " + options.web_root->string() + " not found");
    }
  }
  int port = options.port;
  if (port == 0) {
    port = impl_->http.bind_to_any_port(options.host);
  } else if (!impl_->http.bind_to_port(options.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + options.host + ":" +
                                    std::to_string(options.port));
  }
  impl_->bound = true;
  return port;
}

void Server::Run() {
  if (!impl_->bound) {
    throw Error(ErrorCode::kFailedPrecondition, "Run() before Bind()");
  }
  impl_->running = true;
  if (!impl_->stop_requested) impl_->http.listen_after_bind();
  impl_->running = false;
}

void Server::Stop() {
  impl_->stop_requested = true;
  // stop() is a no-op until the listener is up, so repeat until Run returns.
  while (impl_->running) {
    impl_->http.stop();
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
}

const Store& Server::store() const { return impl_->store; }
const StudyConfig& Server::config() const { return impl_->config; }

}  // namespace srsel
