/*
 * Copyright 2026 The RankSHAP Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rankshap/scoring.hpp"

#include <cmath>
#include <random>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "test_util.hpp"

namespace rankshap {
namespace {

using ::testing::HasSubstr;

const std::vector<std::string> kNames{"gpa", "sat", "essay"};

TEST(Score, AdmissionsWeights) {
  const auto f = testing::admissions_scorer();
  EXPECT_DOUBLE_EQ(f(Eigen::Vector3d(4, 5, 5)), 4.6);
  EXPECT_DOUBLE_EQ(f(Eigen::Vector3d(3, 3, 3)), 3.0);
}

TEST(Score, CsRankingsAllZeroIsOne) {
  const auto f = ScoringFunction::csrankings();
  EXPECT_DOUBLE_EQ(f(Eigen::Vector4d::Zero()), 1.0);
  // (2^5 * 1 * 1 * 1)^(1/27)
  EXPECT_NEAR(f(Eigen::Vector4d(1, 0, 0, 0)), std::pow(32.0, 1.0 / 27.0),
              1e-12);
}

TEST(Score, ZeroWeightsGiveZero) {
  const auto f = ScoringFunction::linear(Eigen::Vector3d::Zero());
  EXPECT_EQ(f(Eigen::Vector3d(7, -1, 3)), 0.0);
}

TEST(Score, Atp) {
  const auto f = ScoringFunction::atp();
  Eigen::VectorXd v(6);
  v << 0.6, 0.7, 0.5, 0.65, 0.4, 0.2;
  EXPECT_NEAR(f(v), 100 * (0.6 + 0.7 + 0.5 + 0.65 + 0.4 - 0.2), 1e-9);
}

TEST(Score, ExpressionArithmetic) {
  const auto f = ScoringFunction::expression(
      "2 * gpa + sat ^ 2 - essay / 4 + (gpa - 1) * -1", kNames);
  EXPECT_DOUBLE_EQ(f(Eigen::Vector3d(3, 2, 8)), 6 + 4 - 2 - 2);
  const auto g = ScoringFunction::expression(
      "gpa \xC3\x97 2 \xE2\x88\x92 \"sat\" \xC3\xB7 2", kNames);
  EXPECT_DOUBLE_EQ(g(Eigen::Vector3d(3, 2, 8)), 5.0);
}

TEST(Score, ExpressionErrors) {
  EXPECT_THROW(ScoringFunction::expression("gpa +", kNames), ValidationError);
  EXPECT_THROW(ScoringFunction::expression("(gpa", kNames), ValidationError);
  EXPECT_THROW(ScoringFunction::expression("gpa $ 2", kNames),
               ValidationError);
  try {
    ScoringFunction::expression("gpa + height", kNames);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_THAT(e.what(), HasSubstr("height"));
  }
  const auto f = ScoringFunction::expression("gpa / essay", kNames);
  EXPECT_THROW(f(Eigen::Vector3d(1, 1, 0)), ComputationError);
}

TEST(Score, LinearIsHomogeneous) {
  const auto f = ScoringFunction::linear(Eigen::Vector3d(0.3, -1.2, 2.0));
  const Eigen::Vector3d v(1.5, 0.25, -3.0);
  EXPECT_NEAR(f(2.5 * v), 2.5 * f(v), 1e-12);
}

TEST(ParseScorerConfig, Kinds) {
  const auto f =
      parse_scorer_config(R"({"kind":"linear","weights":[0.4,0.4,0.2]})", kNames);
  EXPECT_EQ(f.kind(), ScoringFunction::Kind::kLinear);
  EXPECT_DOUBLE_EQ(f(Eigen::Vector3d(4, 5, 5)), 4.6);

  const auto cs = parse_scorer_config(R"({"kind":"csrankings"})",
                                      {"ai", "sys", "th", "inter"});
  EXPECT_EQ(cs.kind(), ScoringFunction::Kind::kCsRankings);
  EXPECT_EQ(ScoringFunction::kCsRankingsExponents[0], 5.0);
  EXPECT_EQ(ScoringFunction::kCsRankingsExponents[1], 12.0);
  EXPECT_EQ(ScoringFunction::kCsRankingsExponents[2], 3.0);
  EXPECT_EQ(ScoringFunction::kCsRankingsExponents[3], 7.0);

  const auto ex = parse_scorer_config(
      R"({"kind":"expression","expression":"gpa + sat"})", kNames);
  EXPECT_DOUBLE_EQ(ex(Eigen::Vector3d(1, 2, 3)), 3.0);
}

TEST(ParseScorerConfig, Errors) {
  try {
    parse_scorer_config(R"({"kind":"bogus"})", kNames);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_THAT(e.what(), HasSubstr("unknown scorer kind"));
  }
  EXPECT_THROW(parse_scorer_config(R"({"kind":"linear","weights":[1,2]})",
                                   kNames),
               ValidationError);
  EXPECT_THROW(parse_scorer_config(R"({"kind":"csrankings"})", kNames),
               ValidationError);
  EXPECT_THROW(parse_scorer_config(
                   R"({"kind":"expression","expression":"gpa +* 1"})", kNames),
               ValidationError);
  EXPECT_THROW(parse_scorer_config("not json", kNames), ValidationError);
}

TEST(RankAll, AdmissionsOrder) {
  const Dataset data = testing::admissions();
  const Ranking r = rank_all(testing::admissions_scorer(), data);
  EXPECT_EQ(r.order(), (std::vector<Index>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(r.rank_of(6), 7);
}

TEST(RankAll, SingleItemAndTies) {
  EXPECT_EQ(Ranking({3.0}).rank_of(0), 1);
  const Ranking r({1.0, 2.0, 1.0});
  EXPECT_EQ(r.rank_of(1), 1);
  EXPECT_EQ(r.rank_of(0), 2);
  EXPECT_EQ(r.rank_of(2), 3);
}

TEST(RankOfReplacement, Examples) {
  const Dataset data = testing::admissions();
  const auto f = testing::admissions_scorer();
  EXPECT_EQ(rank_of_replacement(data, 6, Eigen::Vector3d(5, 5, 5), f), 1);
  EXPECT_EQ(rank_of_replacement(data, 6, Eigen::Vector3d(0, 0, 0), f), 8);
  // Score 4.6 ties Bob and Cal, who both have smaller indices.
  EXPECT_EQ(rank_of_replacement(data, 6, Eigen::Vector3d(4, 5, 5), f), 3);
  EXPECT_THROW(rank_of_replacement(data, 8, Eigen::Vector3d(1, 1, 1), f),
               ValidationError);
}

TEST(RankOfReplacement, PartnerTieFollowsBaseOrder) {
  const Dataset data = testing::admissions();
  const Ranking r = rank_all(testing::admissions_scorer(), data);
  // Leo takes Bob's score 4.6 with Bob as partner: Bob ranked above Leo, so
  // Bob falls behind the hybrid; Cal keeps the ordinary index rule.
  EXPECT_EQ(r.replacement_rank(4.6, 6, 0), 2);
  EXPECT_EQ(r.replacement_rank(4.6, 6), 3);
  // Bob takes Leo's score with Leo as partner and lands on Leo's rank.
  EXPECT_EQ(r.replacement_rank(r.score_of(6), 0, 6), 7);
}

// Identity replacement and monotonicity on random data with many ties.
TEST(RankProperties, IdentityBijectionMonotone) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + trial % 9;
    const Dataset data = testing::random_dataset(rng, n, 3, trial % 2 == 0);
    const auto f = ScoringFunction::linear(Eigen::Vector3d(1, 1, 2));
    const Ranking r = rank_all(f, data);
    std::vector<Index> ranks;
    for (Index v = 0; v < n; ++v) {
      EXPECT_EQ(r.replacement_rank(r.score_of(v), v), r.rank_of(v));
      EXPECT_EQ(rank_of_replacement(data, v, data.row(v), f), r.rank_of(v));
      ranks.push_back(r.rank_of(v));
      // Without third-party ties, taking the partner's score means taking
      // the partner's rank.
      for (Index u = 0; u < n && trial % 2 == 1; ++u) {
        if (u != v) {
          EXPECT_EQ(r.replacement_rank(r.score_of(u), v, u), r.rank_of(u));
        }
      }
      Index prev = n + 1;
      for (double s = -1.0; s <= 9.0; s += 0.5) {
        const Index rank = r.replacement_rank(s, v);
        EXPECT_LE(rank, prev);
        prev = rank;
      }
    }
    std::sort(ranks.begin(), ranks.end());
    for (Index t = 0; t < n; ++t) EXPECT_EQ(ranks[static_cast<std::size_t>(t)], t + 1);
  }
}

TEST(RankProperties, MatchesOracleSort) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset data = testing::random_dataset(rng, 7, 2, true);
    const auto f = ScoringFunction::linear(Eigen::Vector2d(1, 1));
    const Ranking r = rank_all(f, data);
    oracle::Game g{testing::to_table(data), testing::to_oracle(f),
                   oracle::Payoff::kRank, 1, 0, std::nullopt};
    for (int v = 0; v < 7; ++v) {
      g.v = v;
      for (double s = -0.5; s <= 4.5; s += 0.5) {
        oracle::Row h{s, 0.0};
        EXPECT_EQ(r.replacement_rank(s, v), oracle::replacement_rank(g, h));
      }
    }
  }
}

}  // namespace
}  // namespace rankshap
