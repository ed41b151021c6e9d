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

#include "srsel/study.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "json.hpp"
#include "srsel/ballot_io.h"

namespace srsel {
namespace {

using nlohmann::json;

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

[[noreturn]] void ConfigError(const StudyConfig& config,
                              const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument,
              "study '" + config.study_id + "': " + what);
}

json OptionalStrings(const std::optional<std::vector<std::string>>& v) {
  return v ? json(*v) : json(nullptr);
}

bool LabelAllowed(const StudyConfig& config, const std::string& label) {
  if (!config.allowed_labels) return true;
  const auto& allowed = *config.allowed_labels;
  return std::find(allowed.begin(), allowed.end(), label) != allowed.end();
}

}  // namespace

std::string_view TaskKindName(TaskKind kind) {
  return kind == TaskKind::kLabelAndSelect ? "label-and-select"
                                           : "select-only";
}

TaskKind ParseTaskKind(std::string_view name) {
  if (name == "label-and-select") return TaskKind::kLabelAndSelect;
  if (name == "select-only") return TaskKind::kSelectOnly;
  throw Error(ErrorCode::kParse,
              "unknown task_kind '" + std::string(name) + "'");
}

void ValidateStudyConfig(const StudyConfig& config) {
  if (config.study_id.empty()) ConfigError(config, "empty study_id");
  if (config.max_select < 1) ConfigError(config, "max_select must be >= 1");
  if (config.ensemble_k < 1) ConfigError(config, "ensemble_k must be >= 1");
  if (config.candidates_per_round < 1 ||
      config.candidates_per_round > kMaxCandidates) {
    ConfigError(config, "candidates_per_round out of range");
  }
  if (config.max_select > config.candidates_per_round) {
    ConfigError(config, "max_select exceeds candidates_per_round");
  }
  if (config.ensemble_k > config.candidates_per_round) {
    ConfigError(config, "ensemble_k exceeds candidates_per_round");
  }
  if (config.sets.empty()) ConfigError(config, "no sets");
  if (config.rounds != static_cast<int>(config.sets.size())) {
    ConfigError(config, "rounds must equal the number of sets");
  }
  std::set<std::string> unique(config.sets.begin(), config.sets.end());
  if (unique.size() != config.sets.size()) {
    ConfigError(config, "a set may appear in only one round");
  }
  if (config.allowed_labels && config.allowed_labels->empty()) {
    ConfigError(config, "allowed_labels is present but empty");
  }
}

void ValidateStudyConfig(const StudyConfig& config,
                         const StudyCatalog& catalog) {
  ValidateStudyConfig(config);
  for (const std::string& id : config.sets) {
    const auto it = catalog.find(id);
    if (it == catalog.end()) ConfigError(config, "unknown set '" + id + "'");
    if (it->second.candidate_count != config.candidates_per_round) {
      ConfigError(config, "set '" + id + "' has " +
                              std::to_string(it->second.candidate_count) +
                              " candidates, expected " +
                              std::to_string(config.candidates_per_round));
    }
    if (config.task_kind == TaskKind::kLabelAndSelect &&
        !it->second.label_question) {
      ConfigError(config, "set '" + id + "' has no label_question");
    }
  }
}

StudyConfig MakeTask1Config(const SetSummary& set,
                            std::optional<std::vector<std::string>> allowed,
                            std::uint64_t shuffle_seed) {
  if (!set.label_question || set.label_question->empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "set '" + set.set_id + "' has no label question");
  }
  StudyConfig c;
  c.study_id = "task1-" + set.set_id;
  c.task_kind = TaskKind::kLabelAndSelect;
  c.sets = {set.set_id};
  c.max_select = 2;
  c.candidates_per_round = set.candidate_count;
  c.rounds = 1;
  c.allowed_labels = std::move(allowed);
  c.ensemble_k = std::min(5, set.candidate_count);
  c.shuffle_seed = shuffle_seed;
  return c;
}

StudyConfig MakeTask2Config(std::span<const SetSummary> sets,
                            std::uint64_t shuffle_seed) {
  StudyConfig c;
  c.study_id = "task2";
  c.task_kind = TaskKind::kSelectOnly;
  for (const SetSummary& s : sets) {
    if (s.candidate_count != kTask2CandidatesPerRound) {
      throw Error(ErrorCode::kInvalidArgument,
                  "set '" + s.set_id + "' has " +
                      std::to_string(s.candidate_count) + " candidates, " +
                      "expected " + std::to_string(kTask2CandidatesPerRound));
    }
    c.sets.push_back(s.set_id);
  }
  if (c.sets.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "task 2 needs at least one set");
  }
  c.max_select = 3;
  c.candidates_per_round = kTask2CandidatesPerRound;
  c.rounds = static_cast<int>(c.sets.size());
  c.ensemble_k = 3;
  c.shuffle_seed = shuffle_seed;
  return c;
}

std::string StudyConfigToJson(const StudyConfig& config) {
  json j;
  j["study_id"] = config.study_id;
  j["task_kind"] = TaskKindName(config.task_kind);
  j["sets"] = config.sets;
  j["max_select"] = config.max_select;
  j["candidates_per_round"] = config.candidates_per_round;
  j["rounds"] = config.rounds;
  j["allowed_labels"] = OptionalStrings(config.allowed_labels);
  j["ensemble_k"] = config.ensemble_k;
  j["shuffle_seed"] = config.shuffle_seed;
  return j.dump(2);
}

StudyConfig StudyConfigFromJson(const std::string& text) {
  StudyConfig c;
  try {
    const json j = json::parse(text);
    c.study_id = j.at("study_id").get<std::string>();
    c.task_kind = ParseTaskKind(j.at("task_kind").get<std::string>());
    c.sets = j.at("sets").get<std::vector<std::string>>();
    c.max_select = j.at("max_select").get<int>();
    c.candidates_per_round = j.at("candidates_per_round").get<int>();
    c.rounds = j.at("rounds").get<int>();
    if (const auto it = j.find("allowed_labels");
        it != j.end() && !it->is_null()) {
      c.allowed_labels = it->get<std::vector<std::string>>();
    }
    c.ensemble_k = j.at("ensemble_k").get<int>();
    c.shuffle_seed = j.value("shuffle_seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad study config: ") + e.what());
  }
  ValidateStudyConfig(c);
  return c;
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t PermutationKey(std::uint64_t shuffle_seed,
                             std::string_view session_id, int round) {
  const std::uint64_t seeded = Mix64(shuffle_seed) ^ Fnv1a64(session_id);
  return Mix64(Mix64(seeded) ^ static_cast<std::uint64_t>(round));
}

std::vector<int> DisplayPermutation(std::uint64_t shuffle_seed,
                                    std::string_view session_id, int round,
                                    int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const std::uint64_t key = PermutationKey(shuffle_seed, session_id, round);
  std::uint64_t counter = 0;
  for (int i = n - 1; i > 0; --i) {
    ++counter;
    const std::uint64_t r = Mix64(key + counter * kGolden);
    const auto j = static_cast<int>(
        (static_cast<unsigned __int128>(r) * static_cast<unsigned>(i + 1)) >>
        64);
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

Session NewSession(std::string session_id, std::string voter_id,
                   const StudyConfig& config) {
  if (session_id.empty() || voter_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "session needs non-empty session_id and voter_id");
  }
  Session s;
  s.session_id = std::move(session_id);
  s.voter_id = std::move(voter_id);
  s.study_id = config.study_id;
  return s;
}

std::vector<int> SessionDisplayOrder(const Session& session,
                                     const StudyConfig& config, int round) {
  return DisplayPermutation(config.shuffle_seed, session.session_id, round,
                            config.candidates_per_round);
}

RoundView NextRound(const Session& session, const StudyConfig& config,
                    const StudyCatalog& catalog) {
  if (session.completed || session.round_cursor >= config.rounds) {
    throw Error(ErrorCode::kFailedPrecondition,
                "session '" + session.session_id + "' has no rounds left");
  }
  RoundView view;
  view.round = session.round_cursor;
  view.rounds = config.rounds;
  view.set_id = config.sets[view.round];
  view.display_order = SessionDisplayOrder(session, config, view.round);
  view.max_select = config.max_select;
  if (const auto it = catalog.find(view.set_id); it != catalog.end()) {
    view.label_question = it->second.label_question;
  }
  if (config.task_kind == TaskKind::kLabelAndSelect) {
    view.allowed_labels = config.allowed_labels;
  }
  return view;
}

std::string RoundViewToJson(const RoundView& view) {
  json j;
  j["set_id"] = view.set_id;
  j["round"] = view.round;
  j["rounds"] = view.rounds;
  j["candidate_count"] = view.display_order.size();
  j["max_select"] = view.max_select;
  j["label_question"] =
      view.label_question ? json(*view.label_question) : json(nullptr);
  j["allowed_labels"] = OptionalStrings(view.allowed_labels);
  return j.dump();
}

std::string_view SubmitResult::code() const {
  switch (status) {
    case SubmitStatus::kAccepted:
      return "accepted";
    case SubmitStatus::kInvalidBallot:
      return BallotStatusCode(ballot_status);
    case SubmitStatus::kLabelRequired:
      return "label_required";
    case SubmitStatus::kLabelUnexpected:
      return "label_unexpected";
    case SubmitStatus::kLabelNotAllowed:
      return "label_not_allowed";
    case SubmitStatus::kWrongRound:
      return "wrong_round";
    case SubmitStatus::kSessionCompleted:
      return "session_completed";
    case SubmitStatus::kVoterMismatch:
      return "voter_mismatch";
  }
  return "unknown";
}

SubmitResult RecordRoundBallot(Session& session, const StudyConfig& config,
                               const StudyCatalog& catalog,
                               const Ballot& display_ballot) {
  SubmitResult result;
  auto reject = [&](SubmitStatus status) {
    result.status = status;
    return result;
  };
  if (session.completed || session.round_cursor >= config.rounds) {
    return reject(SubmitStatus::kSessionCompleted);
  }
  if (!display_ballot.voter_id.empty() &&
      display_ballot.voter_id != session.voter_id) {
    return reject(SubmitStatus::kVoterMismatch);
  }
  const std::string& current_set = config.sets[session.round_cursor];
  if (!display_ballot.set_id.empty() && display_ballot.set_id != current_set) {
    return reject(SubmitStatus::kWrongRound);
  }
  int candidate_count = config.candidates_per_round;
  if (const auto it = catalog.find(current_set); it != catalog.end()) {
    candidate_count = it->second.candidate_count;
  }
  result.ballot_status = CheckSelections(display_ballot.selections,
                                         candidate_count, config.max_select);
  if (result.ballot_status != BallotStatus::kAccepted) {
    return reject(SubmitStatus::kInvalidBallot);
  }
  if (config.task_kind == TaskKind::kLabelAndSelect) {
    if (!display_ballot.label || display_ballot.label->empty()) {
      return reject(SubmitStatus::kLabelRequired);
    }
    if (!LabelAllowed(config, *display_ballot.label)) {
      return reject(SubmitStatus::kLabelNotAllowed);
    }
  } else if (display_ballot.label) {
    return reject(SubmitStatus::kLabelUnexpected);
  }

  const auto order =
      SessionDisplayOrder(session, config, session.round_cursor);
  Ballot canonical = display_ballot;
  canonical.voter_id = session.voter_id;
  canonical.set_id = current_set;
  for (int& s : canonical.selections) s = order[s];

  session.ballots.push_back(canonical);
  ++session.round_cursor;
  session.completed = session.round_cursor >= config.rounds;
  result.canonical = std::move(canonical);
  return result;
}

std::string SessionToJson(const Session& session) {
  json j;
  j["session_id"] = session.session_id;
  j["voter_id"] = session.voter_id;
  j["study_id"] = session.study_id;
  j["round_cursor"] = session.round_cursor;
  j["completed"] = session.completed;
  j["ballots"] = json::array();
  for (const Ballot& b : session.ballots) {
    j["ballots"].push_back(json::parse(BallotToJsonLine(b)));
  }
  return j.dump(2);
}

Session SessionFromJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    Session s;
    s.session_id = j.at("session_id").get<std::string>();
    s.voter_id = j.at("voter_id").get<std::string>();
    s.study_id = j.at("study_id").get<std::string>();
    s.round_cursor = j.at("round_cursor").get<int>();
    s.completed = j.at("completed").get<bool>();
    for (const json& b : j.at("ballots")) {
      s.ballots.push_back(BallotFromJson(b.dump()));
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad session JSON: ") + e.what());
  }
}

}  // namespace srsel
