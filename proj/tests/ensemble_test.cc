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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "srsel/ballot_io.h"
#include "srsel/ensemble.h"
#include "testing/oracles.h"
#include "testing/test_util.h"

namespace srsel {
namespace {

using testing::RandomImage;

SampleSet SmallSet(int n, std::uint64_t seed = 40, int size = 4) {
  std::mt19937_64 rng(seed);
  std::vector<Image> cands;
  for (int i = 0; i < n; ++i) cands.push_back(RandomImage(rng, size, size, 1));
  return SampleSet("s", Image(size, size, 1, 0.5), std::move(cands),
                   ScaleFactor(1));
}

Ballot MakeBallot(std::string voter, std::vector<int> sel,
                  std::optional<std::string> label = std::nullopt,
                  std::string set = "s") {
  return Ballot{std::move(voter), std::move(set), std::move(sel),
                std::move(label), std::nullopt};
}

std::vector<Ballot> DigitBallots() {
  std::vector<Ballot> out;
  for (auto& rec : ReadBallotLog(testing::DataPath("digit_ballots.jsonl"))) {
    out.push_back(std::move(rec.ballot));
  }
  return out;
}

TEST(SampleSet, EnforcesShapes) {
  std::vector<Image> cands = {Image(8, 8, 1), Image(8, 8, 1)};
  EXPECT_NO_THROW(SampleSet("a", Image(2, 2, 1), cands, ScaleFactor(4)));
  EXPECT_THROW(SampleSet("a", Image(2, 2, 1), cands, ScaleFactor(2)), Error);
  cands.push_back(Image(8, 8, 3));
  EXPECT_THROW(SampleSet("a", Image(2, 2, 1), cands, ScaleFactor(4)), Error);
  EXPECT_THROW(SampleSet("a", Image(2, 2, 1), {}, ScaleFactor(4)), Error);
  EXPECT_THROW(
      SampleSet("a", Image(1, 1, 1),
                std::vector<Image>(kMaxCandidates + 1, Image(1, 1, 1)),
                ScaleFactor(1)),
      Error);
}

TEST(ValidateBallot, Protocols) {
  const SampleSet set = testing::MakeDigitSampleSet();
  auto b = MakeBallot("v", {3, 17}, "5", testing::kDigitSetId);
  EXPECT_EQ(ValidateBallot(b, set, 2), BallotStatus::kAccepted);
  b.selections = {5, 5};
  EXPECT_EQ(ValidateBallot(b, set, 2), BallotStatus::kDuplicateSelection);
  b.selections = {0, 1, 2, 3};
  EXPECT_EQ(ValidateBallot(b, set, 3), BallotStatus::kOverLimit);
  b.selections = {};
  EXPECT_EQ(ValidateBallot(b, set, 3), BallotStatus::kEmptySelection);
  b.selections = {324};
  EXPECT_EQ(ValidateBallot(b, set, 3), BallotStatus::kSelectionOutOfRange);
  b.selections = {-1};
  EXPECT_EQ(ValidateBallot(b, set, 3), BallotStatus::kSelectionOutOfRange);
  b.selections = {1};
  b.set_id = "other";
  EXPECT_EQ(ValidateBallot(b, set, 3), BallotStatus::kWrongSet);
  EXPECT_EQ(BallotStatusCode(BallotStatus::kOverLimit), "over_limit");
}

TEST(Tally, DigitLabels) {
  const auto ballots = DigitBallots();
  ASSERT_EQ(ballots.size(), 30u);
  const TallyResult t = Tally(ballots, testing::kDigitSetId, 324, 2);
  EXPECT_EQ(t.total_ballots, 30);
  EXPECT_EQ(t.label_counts,
            (std::map<std::string, std::int64_t>{{"5", 22}, {"6", 8}}));
}

TEST(Tally, NoBallots) {
  const TallyResult t = Tally({}, "s", 4, 2);
  EXPECT_EQ(t.votes, (std::vector<std::int64_t>{0, 0, 0, 0}));
  EXPECT_EQ(t.ranking, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_TRUE(t.label_counts.empty());
  EXPECT_EQ(t.total_ballots, 0);
}

TEST(Tally, HandCountedExample) {
  const std::vector<Ballot> ballots = {MakeBallot("a", {0, 1}),
                                       MakeBallot("b", {1, 2}),
                                       MakeBallot("c", {1}),
                                       MakeBallot("d", {0, 2})};
  const TallyResult t = Tally(ballots, "s", 3, 2);
  EXPECT_EQ(t.votes, (std::vector<std::int64_t>{2, 3, 2}));
  EXPECT_EQ(t.ranking, (std::vector<int>{1, 0, 2}));
}

TEST(Tally, RejectsDuplicateVoterByName) {
  const std::vector<Ballot> ballots = {MakeBallot("alice", {0}),
                                       MakeBallot("alice", {1})};
  try {
    Tally(ballots, "s", 3, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicate);
    EXPECT_NE(std::string(e.what()).find("alice"), std::string::npos);
  }
}

TEST(Tally, RejectsInvalidAndForeignBallots) {
  EXPECT_THROW(Tally(std::vector<Ballot>{MakeBallot("a", {0, 0})}, "s", 3, 2),
               Error);
  EXPECT_THROW(Tally(std::vector<Ballot>{MakeBallot("a", {0, 1, 2})}, "s", 3, 2),
               Error);
  EXPECT_THROW(
      Tally(std::vector<Ballot>{MakeBallot("a", {0}, std::nullopt, "t")}, "s",
            3, 2),
      Error);
}

TEST(Tally, LabelsAreCaseSensitive) {
  const std::vector<Ballot> ballots = {MakeBallot("a", {0}, "Five"),
                                       MakeBallot("b", {0}, "five"),
                                       MakeBallot("c", {0})};
  const TallyResult t = Tally(ballots, "s", 1, 1);
  EXPECT_EQ(t.label_counts.size(), 2u);
  EXPECT_EQ(t.total_ballots, 3);
}

TEST(SelectTopK, Examples) {
  TallyResult t;
  t.votes = {2, 3, 2};
  t.ranking = RankByVotes(t.votes);
  EXPECT_EQ(SelectTopK(t, 2), (std::vector<int>{1, 0}));
  EXPECT_EQ(SelectTopK(t, 3), t.ranking);
  EXPECT_THROW(SelectTopK(t, 0), Error);
  EXPECT_THROW(SelectTopK(t, 4), Error);
}

TEST(SelectTopK, DigitTopFive) {
  const TallyResult t = Tally(DigitBallots(), testing::kDigitSetId, 324, 2);
  // Counts in the fixture: 17:9, 42:8, 103:7, 250:6, then 7 and 88 tie at 5.
  EXPECT_EQ(SelectTopK(t, 5), (std::vector<int>{17, 42, 103, 250, 7}));
  const auto fives = FilterByLabel(DigitBallots(), "5");
  const TallyResult t5 = Tally(fives, testing::kDigitSetId, 324, 2);
  EXPECT_EQ(SelectTopK(t5, 5), (std::vector<int>{17, 42, 103, 250, 7}));
  const auto sixes = FilterByLabel(DigitBallots(), "6");
  const TallyResult t6 = Tally(sixes, testing::kDigitSetId, 324, 2);
  EXPECT_EQ(SelectTopK(t6, 5), (std::vector<int>{88, 201, 150, 64, 12}));
}

TEST(PixelAverage, IdenticalImagesExact) {
  std::mt19937_64 rng(41);
  const Image img = RandomImage(rng, 5, 5, 3);
  const std::vector<Image> copies(7, img);
  EXPECT_EQ(PixelAverage(copies), img);
}

TEST(PixelAverage, ZerosAndOnes) {
  const std::vector<Image> imgs = {Image(3, 2, 3, 0.0), Image(3, 2, 3, 1.0)};
  EXPECT_EQ(PixelAverage(imgs), Image(3, 2, 3, 0.5));
}

TEST(PixelAverage, HandComputedMeans) {
  const std::vector<Image> imgs = {
      Image(2, 2, 1, std::vector<double>{0.0, 0.3, 0.6, 0.9}),
      Image(2, 2, 1, std::vector<double>{0.3, 0.3, 0.0, 0.6}),
      Image(2, 2, 1, std::vector<double>{0.6, 0.3, 0.3, 0.0})};
  const Image avg = PixelAverage(imgs);
  EXPECT_NEAR(avg.samples()[0], 0.3, 1e-15);
  EXPECT_NEAR(avg.samples()[1], 0.3, 1e-15);
  EXPECT_NEAR(avg.samples()[2], 0.3, 1e-15);
  EXPECT_NEAR(avg.samples()[3], 0.5, 1e-15);
}

TEST(PixelAverage, Errors) {
  EXPECT_THROW(PixelAverage(std::vector<Image>{}), Error);
  EXPECT_THROW(PixelAverage(std::vector<Image>{Image(2, 2, 1), Image(2, 2, 3)}),
               Error);
}

TEST(LabelConsensus, DigitFractions) {
  TallyResult t;
  t.label_counts = {{"5", 22}, {"6", 8}};
  const auto shares = LabelConsensus(t);
  EXPECT_NEAR(shares.at("5"), 22.0 / 30.0, 1e-15);
  EXPECT_NEAR(shares.at("6"), 8.0 / 30.0, 1e-15);
  EXPECT_NEAR(std::round(shares.at("5") * 1000.0) / 10.0, 73.3, 1e-9);
  EXPECT_NEAR(std::round(shares.at("6") * 1000.0) / 10.0, 26.7, 1e-9);
}

TEST(LabelConsensus, SingleAndSymmetric) {
  TallyResult t;
  t.label_counts = {{"8", 1}};
  EXPECT_EQ(LabelConsensus(t).at("8"), 1.0);
  t.label_counts = {{"a", 1}, {"b", 1}};
  EXPECT_EQ(LabelConsensus(t).at("a"), 0.5);
  EXPECT_EQ(LabelConsensus(t).at("b"), 0.5);
  t.label_counts.clear();
  EXPECT_THROW(LabelConsensus(t), Error);
}

TEST(EnsemblePipeline, DigitConfiguration) {
  const SampleSet set = testing::MakeDigitSampleSet();
  const auto ballots = DigitBallots();
  const EnsembleResult r = EnsemblePipeline(set, ballots, 5, 2);
  EXPECT_EQ(r.k, 5);
  EXPECT_EQ(r.selected_indices, (std::vector<int>{17, 42, 103, 250, 7}));
  std::vector<Image> picked;
  for (int i : r.selected_indices) picked.push_back(set.candidates()[i]);
  EXPECT_EQ(r.image, PixelAverage(picked));
  EXPECT_EQ(r.image.width(), 28);
  const auto shares = LabelConsensus(Tally(ballots, set, 2));
  const auto best = std::max_element(
      shares.begin(), shares.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  EXPECT_EQ(best->first, "5");
  EXPECT_NEAR(std::round(best->second * 1000.0) / 10.0, 73.3, 1e-9);
}

TEST(EnsemblePipeline, SingleBallotKOne) {
  const SampleSet set = SmallSet(5);
  const EnsembleResult r =
      EnsemblePipeline(set, std::vector<Ballot>{MakeBallot("a", {3})}, 1, 2);
  EXPECT_EQ(r.selected_indices, std::vector<int>{3});
  EXPECT_EQ(r.image, set.candidates()[3]);
}

TEST(EnsemblePipeline, ThreeCandidateFixture) {
  const SampleSet set = SmallSet(3);
  const std::vector<Ballot> ballots = {MakeBallot("a", {0, 1}),
                                       MakeBallot("b", {1, 2}),
                                       MakeBallot("c", {1}),
                                       MakeBallot("d", {0, 2})};
  const EnsembleResult r = EnsemblePipeline(set, ballots, 2, 2);
  EXPECT_EQ(r.selected_indices, (std::vector<int>{1, 0}));
  EXPECT_EQ(r.image, PixelAverage(std::vector<Image>{set.candidates()[1],
                                                      set.candidates()[0]}));
}

// Random ballots for n candidates; voter ids are unique.
std::vector<Ballot> RandomBallots(std::mt19937_64& rng, int n, int voters,
                                  int max_select) {
  std::vector<Ballot> out;
  for (int v = 0; v < voters; ++v) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const int count =
        1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(n, max_select)));
    all.resize(count);
    out.push_back(MakeBallot("v" + std::to_string(v), all,
                             rng() % 2 ? std::optional<std::string>("x")
                                       : std::nullopt));
  }
  return out;
}

TEST(EnsembleProperties, BallotOrderDoesNotMatter) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const SampleSet set = SmallSet(6, trial);
    auto ballots = RandomBallots(rng, 6, 9, 3);
    const TallyResult t1 = Tally(ballots, set, 3);
    const EnsembleResult e1 = EnsemblePipeline(set, ballots, 3, 3);
    std::shuffle(ballots.begin(), ballots.end(), rng);
    EXPECT_EQ(Tally(ballots, set, 3), t1);
    const EnsembleResult e2 = EnsemblePipeline(set, ballots, 3, 3);
    EXPECT_EQ(e2.selected_indices, e1.selected_indices);
    EXPECT_EQ(e2.image, e1.image);
  }
}

TEST(EnsembleProperties, CandidateRelabelingIsEquivariant) {
  std::mt19937_64 rng(43);
  int tie_free = 0;
  for (int trial = 0; trial < 200 && tie_free < 20; ++trial) {
    const int n = 5;
    const SampleSet set = SmallSet(n, 100 + trial);
    const auto ballots = RandomBallots(rng, n, 12, 3);
    const TallyResult t = Tally(ballots, set, 3);
    const std::set<std::int64_t> distinct(t.votes.begin(), t.votes.end());
    if (distinct.size() != t.votes.size()) continue;  // ties present
    ++tie_free;

    std::vector<int> pi(n);  // old index -> new index
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pi.begin(), pi.end(), rng);
    std::vector<Image> permuted(n, Image(1, 1, 1));
    for (int i = 0; i < n; ++i) permuted[pi[i]] = set.candidates()[i];
    const SampleSet pset("s", set.lr(), permuted, set.factor());
    auto pballots = ballots;
    for (Ballot& b : pballots) {
      for (int& s : b.selections) s = pi[s];
    }
    const TallyResult pt = Tally(pballots, pset, 3);
    for (int i = 0; i < n; ++i) EXPECT_EQ(pt.votes[pi[i]], t.votes[i]);
    EXPECT_EQ(EnsemblePipeline(pset, pballots, 3, 3).image,
              EnsemblePipeline(set, ballots, 3, 3).image);
  }
  EXPECT_EQ(tie_free, 20);
}

TEST(EnsembleProperties, AverageMinimisesSquaredDistance) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const SampleSet set = SmallSet(n, 200 + trial, 3 + trial % 5);
    const int k = 1 + trial % n;
    const auto ballots = RandomBallots(rng, n, 6, 3);
    const EnsembleResult r = EnsemblePipeline(set, ballots, k, 3);
    std::vector<const Image*> subset;
    for (int i : r.selected_indices) subset.push_back(&set.candidates()[i]);
    const double avg_cost = testing::TotalSquaredDistance(r.image, subset);
    for (const Image& c : set.candidates()) {
      EXPECT_LE(avg_cost, testing::TotalSquaredDistance(c, subset) + 1e-12);
    }
  }
}

TEST(EnsembleProperties, TopKIsPrefixOfTopKPlusOne) {
  std::mt19937_64 rng(45);
  const SampleSet set = SmallSet(8);
  const TallyResult t = Tally(RandomBallots(rng, 8, 10, 3), set, 3);
  for (int k = 1; k < 8; ++k) {
    const auto a = SelectTopK(t, k);
    const auto b = SelectTopK(t, k + 1);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(EnsembleProperties, VoteConservationAndOracleAgreement) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 9;
    const auto ballots = RandomBallots(rng, n, trial % 11, 3);
    const TallyResult t = Tally(ballots, "s", n, 3);
    std::int64_t selections = 0;
    for (const Ballot& b : ballots) selections += b.selections.size();
    EXPECT_EQ(std::accumulate(t.votes.begin(), t.votes.end(), std::int64_t{0}),
              selections);
    const auto oracle = testing::BruteForceTally(ballots, n);
    EXPECT_EQ(t.votes, oracle.votes);
    EXPECT_EQ(t.ranking, oracle.ranking);
  }
}

}  // namespace
}  // namespace srsel
