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

#ifndef SRSEL_ENSEMBLE_H_
#define SRSEL_ENSEMBLE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srsel/image.h"

namespace srsel {

inline constexpr int kMaxCandidates = 1024;

// One LR observation and its N candidate SR reconstructions.
class SampleSet {
 public:
  // Throws unless 1 <= N <= kMaxCandidates, all candidates share one shape,
  // and that shape is the LR shape scaled by `factor`.
  SampleSet(std::string set_id, Image lr, std::vector<Image> candidates,
            ScaleFactor factor,
            std::optional<std::string> label_question = std::nullopt);

  const std::string& set_id() const { return set_id_; }
  const Image& lr() const { return lr_; }
  const std::vector<Image>& candidates() const { return candidates_; }
  int size() const { return static_cast<int>(candidates_.size()); }
  ScaleFactor factor() const { return factor_; }
  const std::optional<std::string>& label_question() const {
    return label_question_;
  }

 private:
  std::string set_id_;
  Image lr_;
  std::vector<Image> candidates_;
  ScaleFactor factor_;
  std::optional<std::string> label_question_;
};

struct Ballot {
  std::string voter_id;
  std::string set_id;
  std::vector<int> selections;  // 0-based candidate indices
  std::optional<std::string> label;
  std::optional<std::string> submitted_at;  // RFC 3339, audit only

  friend bool operator==(const Ballot&, const Ballot&) = default;
};

enum class BallotStatus {
  kAccepted,
  kWrongSet,
  kEmptySelection,
  kDuplicateSelection,
  kSelectionOutOfRange,
  kOverLimit,
};

// Stable machine-readable reason, e.g. "duplicate_selection".
std::string_view BallotStatusCode(BallotStatus status);

// Checks a ballot against a set of `candidate_count` candidates.
BallotStatus CheckSelections(std::span<const int> selections,
                             int candidate_count, int max_select);
BallotStatus ValidateBallot(const Ballot& ballot, const SampleSet& set,
                            int max_select);

struct TallyResult {
  std::string set_id;
  std::vector<std::int64_t> votes;  // per candidate
  std::vector<int> ranking;         // votes descending, index ascending
  std::map<std::string, std::int64_t> label_counts;
  std::int64_t total_ballots = 0;

  friend bool operator==(const TallyResult&, const TallyResult&) = default;
};

// Majority-vote count over one set. Throws Error naming the voter on an
// invalid ballot, a ballot for another set, or a second ballot by a voter.
TallyResult Tally(std::span<const Ballot> ballots, const std::string& set_id,
                  int candidate_count, int max_select);
TallyResult Tally(std::span<const Ballot> ballots, const SampleSet& set,
                  int max_select);

// The ranking order used by Tally, exposed for callers that already hold
// counts.
std::vector<int> RankByVotes(std::span<const std::int64_t> votes);

std::vector<int> SelectTopK(const TallyResult& tally, int k);

// Per-sample arithmetic mean, computed as first + sum(x_i - first) / k so
// that averaging identical images reproduces them bit-for-bit.
Image PixelAverage(std::span<const Image* const> images);
Image PixelAverage(std::span<const Image> images);

// Fraction of labelled ballots carrying each label.
std::map<std::string, double> LabelConsensus(const TallyResult& tally);

// Ballots whose label equals `label` exactly.
std::vector<Ballot> FilterByLabel(std::span<const Ballot> ballots,
                                  std::string_view label);

struct EnsembleResult {
  std::vector<int> selected_indices;
  Image image;
  int k = 0;
};

// Tally, take the k best-ranked candidates and average them.
EnsembleResult EnsemblePipeline(const SampleSet& set,
                                std::span<const Ballot> ballots, int k,
                                int max_select);
EnsembleResult EnsembleFromTally(const SampleSet& set,
                                 const TallyResult& tally, int k);

}  // namespace srsel

#endif  // SRSEL_ENSEMBLE_H_
