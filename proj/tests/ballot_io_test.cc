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

#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "srsel/ballot_io.h"
#include "testing/test_util.h"

namespace srsel {
namespace {

std::string RandomText(std::mt19937_64& rng) {
  static const std::vector<std::string> kAlphabet = {
      "a", "X", "0", " ", "_", "-", "\"", "\\", "/", "\t", "\n", "\x01",
      "\xc3\xa9", "\xe6\x95\xb0"};
  std::string s;
  const int len = static_cast<int>(rng() % 12);
  for (int i = 0; i < len; ++i) s += kAlphabet[rng() % kAlphabet.size()];
  return s;
}

TEST(BallotJson, RoundTripProperty) {
  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 300; ++trial) {
    Ballot b;
    b.voter_id = "v" + RandomText(rng);
    b.set_id = "s" + RandomText(rng);
    const int count = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < count; ++i) {
      b.selections.push_back(static_cast<int>(rng() % 1024));
    }
    if (rng() % 2) b.label = RandomText(rng);
    if (rng() % 2) b.submitted_at = "2026-10-16T12:00:0" + std::to_string(trial % 10) + "Z";
    const std::string line = BallotToJsonLine(b);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(BallotFromJson(line), b);
  }
}

TEST(BallotJson, RejectsInvalidUtf8) {
  Ballot b{"v\xff", "s", {0}, std::nullopt, std::nullopt};
  EXPECT_THROW(BallotToJsonLine(b), Error);
}

TEST(BallotJson, RejectsMalformed) {
  EXPECT_THROW(BallotFromJson("{"), Error);
  EXPECT_THROW(BallotFromJson(R"({"set_id":"s","selections":[1]})"), Error);
  EXPECT_THROW(BallotFromJson(R"({"voter_id":"v","set_id":"s","selections":"1"})"),
               Error);
  EXPECT_THROW(
      BallotFromJson(R"({"voter_id":"v","set_id":"s","selections":[1.5]})"),
      Error);
}

TEST(BallotLog, ParseReportsLineNumbers) {
  std::istringstream in(
      R"({"voter_id":"a","set_id":"s","selections":[0]})"
      "\n\n"
      R"({"voter_id":"b","set_id":"s","selections":[1]})"
      "\n"
      "garbage\n");
  try {
    ParseBallotLog(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos)
        << e.what();
  }
}

TEST(BallotLog, ParseKeepsLineNumbers) {
  std::istringstream in(
      R"({"voter_id":"a","set_id":"s","selections":[0]})"
      "\n\n"
      R"({"voter_id":"b","set_id":"s","selections":[1]})");
  const auto logged = ParseBallotLog(in);
  ASSERT_EQ(logged.size(), 2u);
  EXPECT_EQ(logged[0].line, 1);
  EXPECT_EQ(logged[1].line, 3);
  EXPECT_EQ(logged[1].ballot.voter_id, "b");
}

TEST(BallotLog, DigitFixture) {
  const auto logged = ReadBallotLog(testing::DataPath("digit_ballots.jsonl"));
  ASSERT_EQ(logged.size(), 30u);
  for (const auto& rec : logged) {
    EXPECT_EQ(rec.ballot.set_id, testing::kDigitSetId);
    EXPECT_EQ(rec.ballot.selections.size(), 2u);
  }
  EXPECT_THROW(ReadBallotLog(testing::DataPath("absent.jsonl")), Error);
}

TEST(TallyJson, RoundTrip) {
  TallyResult t;
  t.set_id = "mnist-5or6";
  t.votes = {0, 3, 1, 3};
  t.ranking = RankByVotes(t.votes);
  t.label_counts = {{"5", 2}, {"6", 1}};
  t.total_ballots = 3;
  EXPECT_EQ(t.ranking, (std::vector<int>{1, 3, 2, 0}));
  EXPECT_EQ(TallyFromJson(TallyToJson(t)), t);
  EXPECT_THROW(TallyFromJson(R"({"set_id":"x"})"), Error);
}

TEST(EnsembleJson, Fields) {
  EnsembleResult r{{4, 1}, Image(2, 2, 1), 2};
  const auto j = nlohmann::json::parse(EnsembleToJson(r));
  EXPECT_EQ(j.at("k"), 2);
  EXPECT_EQ(j.at("selected_indices"), nlohmann::json::array({4, 1}));
  const auto c = nlohmann::json::parse(
      LabelConsensusToJson({{"5", 22.0 / 30.0}, {"6", 8.0 / 30.0}}));
  EXPECT_DOUBLE_EQ(c.at("5").get<double>(), 22.0 / 30.0);
}

TEST(Timestamps, Rfc3339Shape) {
  const std::string ts = NowRfc3339();
  ASSERT_EQ(ts.size(), 20u) << ts;
  EXPECT_EQ(ts[4], '-');
  EXPECT_EQ(ts[10], 'T');
  EXPECT_EQ(ts.back(), 'Z');
}

}  // namespace
}  // namespace srsel
