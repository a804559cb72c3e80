/* Copyright 2026 The crev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "crev/errors.h"
#include "crev/metrics.h"
#include "oracles/oracles.h"

namespace crev {
namespace {

TokenSeq seq(std::string_view s) {
  TokenSeq out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t j = s.find(' ', i);
    out.emplace_back(s.substr(i, j == std::string_view::npos ? s.size() - i : j - i));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

TEST(BleuTest, IdenticalIsOne) {
  EXPECT_DOUBLE_EQ(bleu4(seq("a b c d e"), seq("a b c d e")), 1.0);
  EXPECT_DOUBLE_EQ(bleu4(seq("a b"), seq("a b")), 1.0);
}

TEST(BleuTest, EdgeCases) {
  EXPECT_EQ(bleu4({}, seq("a b")), 0.0);
  EXPECT_EQ(bleu4(seq("x y z"), seq("a b c")), 0.0);
  // Short hand-computed case: p1 = 3/4, p2 = 1/3, p3 = 1/(2*4), p4 = 1/(2*4),
  // brevity penalty 1.
  const double expected = std::pow(0.75 * (1.0 / 3) * 0.125 * 0.125, 0.25);
  EXPECT_NEAR(bleu4(seq("a b x c"), seq("a b c d")), expected, 1e-12);
  // Candidate shorter than reference: exp(1 - 4/2); the reference has
  // trigrams and 4-grams, so p3 = p4 = 1/(2*2).
  EXPECT_NEAR(bleu4(seq("a b"), seq("a b c d")), std::exp(-1.0) * 0.5, 1e-12);
  // Neither side has 3- or 4-grams.
  EXPECT_NEAR(bleu4(seq("a b"), seq("a c")), std::pow(0.5 * 0.25, 0.25), 1e-12);
}

TEST(BleuTest, ClipsRepeatedTokens) {
  // p1 = 3/4 (a clipped to 2), p2 = 1/3, p3 = p4 = 1/8.
  const double expected = std::pow(0.75 * (1.0 / 3) * 0.125 * 0.125, 0.25);
  EXPECT_NEAR(bleu4(seq("a a a b"), seq("a b a c")), expected, 1e-12);
}

TEST(BleuTest, MatchesOracleOnRandomSequences) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
  for (int i = 0; i < 5000; ++i) {
    TokenSeq c(rng() % 9), r(1 + rng() % 9);
    for (auto& t : c) t = alphabet[rng() % alphabet.size()];
    for (auto& t : r) t = alphabet[rng() % alphabet.size()];
    const double got = bleu4(c, r);
    EXPECT_NEAR(got, oracle::bleu4(c, r), 1e-12);
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 1.0);
  }
}

TEST(LevenshteinTest, Basics) {
  EXPECT_EQ(levenshtein(seq("a b c"), seq("a b c")), 0u);
  EXPECT_EQ(levenshtein({}, {}), 0u);
  EXPECT_EQ(levenshtein(seq("a b c"), {}), 3u);
  EXPECT_EQ(levenshtein(seq("a b c"), seq("a c")), 1u);
  EXPECT_EQ(levenshtein(seq("k i t t e n"), seq("s i t t i n g")), 3u);
  EXPECT_DOUBLE_EQ(normalized_levenshtein(seq("a b c d"), seq("a b")), 0.5);
  EXPECT_DOUBLE_EQ(normalized_levenshtein({}, {}), 0.0);
}

TEST(LevenshteinTest, MatchesRecursiveOracle) {
  std::mt19937_64 rng(9);
  const std::vector<std::string> alphabet = {"x", "y", "z"};
  for (int i = 0; i < 400; ++i) {
    TokenSeq a(rng() % 6), b(rng() % 6);
    for (auto& t : a) t = alphabet[rng() % 3];
    for (auto& t : b) t = alphabet[rng() % 3];
    EXPECT_EQ(static_cast<int>(levenshtein(a, b)), oracle::levenshtein_recursive(a, b));
  }
}

TEST(LevenshteinTest, MetricAxiomsOnTable) {
  const oracle::LevenshteinTable table(2, 5);
  auto tokens = [&](std::size_t id) {
    TokenSeq s;
    for (int t : table.sequence(id)) s.push_back(t ? "b" : "a");
    return s;
  };
  for (std::size_t a = 0; a < table.count(); ++a) {
    for (std::size_t b = 0; b < table.count(); b += 3) {
      const auto d = levenshtein(tokens(a), tokens(b));
      ASSERT_EQ(static_cast<int>(d), table.distance(a, b));
      EXPECT_EQ(d, levenshtein(tokens(b), tokens(a)));
      EXPECT_EQ(d == 0, a == b);
    }
  }
}

TEST(SummaryTest, MeanMedianSampleStdev) {
  const auto s = summarize({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_NEAR(s.stdev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_EQ(summarize({7}).stdev, 0.0);
  EXPECT_EQ(summarize({3, 1, 2}).median, 2.0);
}

TEST(EvaluateTest, BestOfBeamAndPerfectCount) {
  const std::vector<EvalInstance> instances = {
      {seq("a b c d"), {seq("a b c d"), seq("a b")}, 3},
      {seq("a b c d"), {seq("x"), seq("a b c x")}, 3},
      {seq("p q"), {seq("p")}, 3},
  };
  const auto row = evaluate(instances, 2);
  EXPECT_EQ(row.beam_size, 3);
  EXPECT_EQ(row.instance_count, 3u);
  EXPECT_EQ(row.perfect_count, 1u);
  EXPECT_NEAR(row.perfect_pct, 100.0 / 3, 1e-12);
  const std::vector<double> bleus = {1.0, bleu4(seq("a b c x"), seq("a b c d")),
                                     bleu4(seq("p"), seq("p q"))};
  EXPECT_NEAR(row.bleu.mean, (bleus[0] + bleus[1] + bleus[2]) / 3, 1e-12);
  EXPECT_NEAR(row.levenshtein.mean, (0.0 + 0.25 + 0.5) / 3, 1e-12);
  for (const auto* s : {&row.bleu, &row.levenshtein}) {
    EXPECT_GE(s->stdev, 0.0);
  }
}

TEST(EvaluateTest, RejectsMalformedInstances) {
  EXPECT_THROW(validate(EvalInstance{seq("a"), {}, 1}), InvalidArgument);
  EXPECT_THROW(validate(EvalInstance{seq("a"), {seq("a"), seq("b")}, 1}), InvalidArgument);
  EXPECT_THROW(validate(EvalInstance{seq("a"), {seq("a"), seq("a")}, 2}), InvalidArgument);
  EXPECT_NO_THROW(validate(EvalInstance{seq("a"), {seq("a")}, 5}));
}

TEST(ReportTest, JsonRoundTripAndTable) {
  MetricsReport report;
  report.model = "copy";
  MetricsRow row;
  row.beam_size = 1;
  row.instance_count = 4;
  row.perfect_count = 1;
  row.perfect_pct = 25;
  row.bleu = {0.5, 0.4, 0.1};
  row.levenshtein = {0.2, 0.25, 0.05};
  report.rows.push_back(row);
  const auto back = parse_report_json(render_json(report));
  EXPECT_EQ(back.model, "copy");
  ASSERT_EQ(back.rows.size(), 1u);
  EXPECT_EQ(back.rows[0].perfect_count, 1u);
  EXPECT_DOUBLE_EQ(back.rows[0].bleu.median, 0.4);
  const auto table = render_table(report);
  EXPECT_NE(table.find("copy"), std::string::npos);
  EXPECT_NE(table.find("25.0"), std::string::npos);
  EXPECT_THROW(parse_report_json("{}"), Error);
}

}  // namespace
}  // namespace crev
