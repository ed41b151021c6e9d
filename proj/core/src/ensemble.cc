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

#include "srsel/ensemble.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace srsel {

SampleSet::SampleSet(std::string set_id, Image lr, std::vector<Image> candidates,
                     ScaleFactor factor,
                     std::optional<std::string> label_question)
    : set_id_(std::move(set_id)),
      lr_(std::move(lr)),
      candidates_(std::move(candidates)),
      factor_(factor),
      label_question_(std::move(label_question)) {
  if (set_id_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sample set needs an id");
  }
  if (candidates_.empty() || candidates_.size() > kMaxCandidates) {
    throw Error(ErrorCode::kInvalidArgument,
                set_id_ + ": candidate count " +
                    std::to_string(candidates_.size()) + " outside [1, " +
                    std::to_string(kMaxCandidates) + "]");
  }
  const int f = factor_.value();
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const Image& c = candidates_[i];
    if (c.width() != lr_.width() * f || c.height() != lr_.height() * f ||
        c.channels() != lr_.channels()) {
      throw Error(ErrorCode::kShapeMismatch,
                  set_id_ + ": candidate " + std::to_string(i) + " is " +
                      std::to_string(c.width()) + "x" +
                      std::to_string(c.height()) + "x" +
                      std::to_string(c.channels()) + ", expected LR x" +
                      std::to_string(f));
    }
  }
}

std::string_view BallotStatusCode(BallotStatus status) {
  switch (status) {
    case BallotStatus::kAccepted:
      return "accepted";
    case BallotStatus::kWrongSet:
      return "wrong_set";
    case BallotStatus::kEmptySelection:
      return "empty_selection";
    case BallotStatus::kDuplicateSelection:
      return "duplicate_selection";
    case BallotStatus::kSelectionOutOfRange:
      return "selection_out_of_range";
    case BallotStatus::kOverLimit:
      return "over_limit";
  }
  return "unknown";
}

BallotStatus CheckSelections(std::span<const int> selections,
                             int candidate_count, int max_select) {
  if (selections.empty()) return BallotStatus::kEmptySelection;
  std::set<int> seen;
  for (int s : selections) {
    if (s < 0 || s >= candidate_count) {
      return BallotStatus::kSelectionOutOfRange;
    }
    if (!seen.insert(s).second) return BallotStatus::kDuplicateSelection;
  }
  if (static_cast<int>(selections.size()) > max_select) {
    return BallotStatus::kOverLimit;
  }
  return BallotStatus::kAccepted;
}

BallotStatus ValidateBallot(const Ballot& ballot, const SampleSet& set,
                            int max_select) {
  if (ballot.set_id != set.set_id()) return BallotStatus::kWrongSet;
  return CheckSelections(ballot.selections, set.size(), max_select);
}

std::vector<int> RankByVotes(std::span<const std::int64_t> votes) {
  std::vector<int> ranking(votes.size());
  std::iota(ranking.begin(), ranking.end(), 0);
  std::stable_sort(ranking.begin(), ranking.end(), [&](int a, int b) {
    return votes[a] > votes[b];
  });
  return ranking;
}

TallyResult Tally(std::span<const Ballot> ballots, const std::string& set_id,
                  int candidate_count, int max_select) {
  TallyResult result;
  result.set_id = set_id;
  result.votes.assign(candidate_count, 0);
  std::set<std::string> voters;
  for (const Ballot& b : ballots) {
    if (b.set_id != set_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ballot from voter '" + b.voter_id + "' targets set '" +
                      b.set_id + "', not '" + set_id + "'");
    }
    const BallotStatus status =
        CheckSelections(b.selections, candidate_count, max_select);
    if (status != BallotStatus::kAccepted) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid ballot from voter '" + b.voter_id +
                      "': " + std::string(BallotStatusCode(status)));
    }
    if (!voters.insert(b.voter_id).second) {
      throw Error(ErrorCode::kDuplicate,
                  "duplicate ballot from voter '" + b.voter_id + "'");
    }
    for (int s : b.selections) ++result.votes[s];
    if (b.label) ++result.label_counts[*b.label];
    ++result.total_ballots;
  }
  result.ranking = RankByVotes(result.votes);
  return result;
}

TallyResult Tally(std::span<const Ballot> ballots, const SampleSet& set,
                  int max_select) {
  return Tally(ballots, set.set_id(), set.size(), max_select);
}

std::vector<int> SelectTopK(const TallyResult& tally, int k) {
  const int n = static_cast<int>(tally.ranking.size());
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kOutOfRange, "k = " + std::to_string(k) +
                                            " outside [1, " +
                                            std::to_string(n) + "]");
  }
  return {tally.ranking.begin(), tally.ranking.begin() + k};
}

Image PixelAverage(std::span<const Image* const> images) {
  if (images.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot average zero images");
  }
  const Image& first = *images.front();
  for (const Image* img : images) RequireSameShape(first, *img, "average");

  const auto base = first.samples();
  std::vector<double> delta(base.size(), 0.0);
  for (const Image* img : images.subspan(1)) {
    const auto s = img->samples();
    for (std::size_t i = 0; i < s.size(); ++i) delta[i] += s[i] - base[i];
  }
  const double k = static_cast<double>(images.size());
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(base[i] + delta[i] / k, 0.0, 1.0);
  }
  return Image(first.width(), first.height(), first.channels(),
               std::move(out));
}

Image PixelAverage(std::span<const Image> images) {
  std::vector<const Image*> ptrs;
  ptrs.reserve(images.size());
  for (const Image& img : images) ptrs.push_back(&img);
  return PixelAverage(std::span<const Image* const>(ptrs));
}

std::map<std::string, double> LabelConsensus(const TallyResult& tally) {
  std::int64_t labelled = 0;
  for (const auto& [label, count] : tally.label_counts) labelled += count;
  if (labelled == 0) {
    throw Error(ErrorCode::kFailedPrecondition,
                "set '" + tally.set_id + "' has no labelled ballots");
  }
  std::map<std::string, double> out;
  for (const auto& [label, count] : tally.label_counts) {
    out.emplace(label,
                static_cast<double>(count) / static_cast<double>(labelled));
  }
  return out;
}

std::vector<Ballot> FilterByLabel(std::span<const Ballot> ballots,
                                  std::string_view label) {
  std::vector<Ballot> out;
  for (const Ballot& b : ballots) {
    if (b.label && *b.label == label) out.push_back(b);
  }
  return out;
}

EnsembleResult EnsembleFromTally(const SampleSet& set,
                                 const TallyResult& tally, int k) {
  if (tally.set_id != set.set_id() ||
      static_cast<int>(tally.votes.size()) != set.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "tally for '" + tally.set_id + "' does not match set '" +
                    set.set_id() + "'");
  }
  std::vector<int> selected = SelectTopK(tally, k);
  std::vector<const Image*> picks;
  picks.reserve(selected.size());
  for (int i : selected) picks.push_back(&set.candidates()[i]);
  Image image = PixelAverage(std::span<const Image* const>(picks));
  return {std::move(selected), std::move(image), k};
}

EnsembleResult EnsemblePipeline(const SampleSet& set,
                                std::span<const Ballot> ballots, int k,
                                int max_select) {
  return EnsembleFromTally(set, Tally(ballots, set, max_select), k);
}

}  // namespace srsel
