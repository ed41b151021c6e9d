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

#ifndef SRSEL_STUDY_H_
#define SRSEL_STUDY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srsel/ensemble.h"

namespace srsel {

enum class TaskKind {
  kLabelAndSelect,  // identify the content, then pick the most helpful samples
  kSelectOnly,      // pick the most natural-looking samples
};

std::string_view TaskKindName(TaskKind kind);
TaskKind ParseTaskKind(std::string_view name);

struct StudyConfig {
  std::string study_id;
  TaskKind task_kind = TaskKind::kSelectOnly;
  std::vector<std::string> sets;  // one per round, in round order
  int max_select = 1;
  int candidates_per_round = 1;
  int rounds = 0;
  std::optional<std::vector<std::string>> allowed_labels;
  int ensemble_k = 1;
  std::uint64_t shuffle_seed = 0;

  friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

// What the study layer needs to know about a catalogued sample set.
struct SetSummary {
  std::string set_id;
  int candidate_count = 0;
  std::optional<std::string> label_question;
};

using StudyCatalog = std::map<std::string, SetSummary>;

// Structural checks only (counts, rounds = |sets|, unique set ids).
void ValidateStudyConfig(const StudyConfig& config);
// Adds the catalog checks: every set exists, has candidates_per_round
// candidates, and carries a label question when labels are requested.
void ValidateStudyConfig(const StudyConfig& config,
                         const StudyCatalog& catalog);

// Single-round identify-and-select protocol: 2 selections, top-5 ensemble.
StudyConfig MakeTask1Config(
    const SetSummary& set,
    std::optional<std::vector<std::string>> allowed_labels = std::nullopt,
    std::uint64_t shuffle_seed = 0);

inline constexpr int kTask2CandidatesPerRound = 15;

// Multi-round select-only protocol: 15 candidates per round, at most 3
// selections, top-3 ensemble. Throws if any set has a different count.
StudyConfig MakeTask2Config(std::span<const SetSummary> sets,
                            std::uint64_t shuffle_seed = 0);

std::string StudyConfigToJson(const StudyConfig& config);
StudyConfig StudyConfigFromJson(const std::string& text);

// ---------------------------------------------------------------------------
// Display-order derivation. Normative; see docs/FORMATS.md.

std::uint64_t Fnv1a64(std::string_view bytes);
std::uint64_t Mix64(std::uint64_t z);
std::uint64_t PermutationKey(std::uint64_t shuffle_seed,
                             std::string_view session_id, int round);
// perm[display_position] = canonical candidate index.
std::vector<int> DisplayPermutation(std::uint64_t shuffle_seed,
                                    std::string_view session_id, int round,
                                    int n);

// ---------------------------------------------------------------------------

struct Session {
  std::string session_id;
  std::string voter_id;
  std::string study_id;
  int round_cursor = 0;
  bool completed = false;
  std::vector<Ballot> ballots;  // accepted, canonical index space

  friend bool operator==(const Session&, const Session&) = default;
};

Session NewSession(std::string session_id, std::string voter_id,
                   const StudyConfig& config);

std::vector<int> SessionDisplayOrder(const Session& session,
                                     const StudyConfig& config, int round);

// Everything a rater sees for one round. Never references HR images.
struct RoundView {
  std::string set_id;
  int round = 0;
  int rounds = 0;
  std::vector<int> display_order;
  int max_select = 1;
  std::optional<std::string> label_question;
  std::optional<std::vector<std::string>> allowed_labels;
};

// Throws kFailedPrecondition once the session is complete.
RoundView NextRound(const Session& session, const StudyConfig& config,
                    const StudyCatalog& catalog);

// Wire form of a RoundView. The canonical display order is not emitted;
// clients address candidates by display position only.
std::string RoundViewToJson(const RoundView& view);

enum class SubmitStatus {
  kAccepted,
  kInvalidBallot,
  kLabelRequired,
  kLabelUnexpected,
  kLabelNotAllowed,
  kWrongRound,
  kSessionCompleted,
  kVoterMismatch,
};

struct SubmitResult {
  SubmitStatus status = SubmitStatus::kAccepted;
  BallotStatus ballot_status = BallotStatus::kAccepted;
  Ballot canonical;  // filled on acceptance

  bool accepted() const { return status == SubmitStatus::kAccepted; }
  // Machine-readable reason: the ballot status code for kInvalidBallot,
  // otherwise the submit status code.
  std::string_view code() const;
};

// `display_ballot.selections` are display positions. On acceptance they are
// mapped to canonical indices, the ballot is appended to the session and the
// round cursor advances. An empty voter_id/set_id is filled from the session.
SubmitResult RecordRoundBallot(Session& session, const StudyConfig& config,
                               const StudyCatalog& catalog,
                               const Ballot& display_ballot);

std::string SessionToJson(const Session& session);
Session SessionFromJson(const std::string& text);

}  // namespace srsel

#endif  // SRSEL_STUDY_H_
