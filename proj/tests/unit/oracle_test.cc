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

// Sanity checks of the test oracles themselves against hand-worked values.

#include <gtest/gtest.h>

#include <cmath>

#include "oracles/oracles.h"
#include "support/models.h"

namespace crev {
namespace {

TEST(OracleSelfTest, Bleu) {
  EXPECT_DOUBLE_EQ(oracle::bleu4({"a", "b", "c", "d"}, {"a", "b", "c", "d"}), 1.0);
  EXPECT_EQ(oracle::bleu4({}, {"a"}), 0.0);
  EXPECT_NEAR(oracle::bleu4({"a", "b"}, {"a", "c"}), std::pow(0.125, 0.25), 1e-15);
}

TEST(OracleSelfTest, LevenshteinTable) {
  const oracle::LevenshteinTable t(2, 3);
  EXPECT_EQ(t.count(), 15u);
  EXPECT_EQ(t.distance(0, 14), 3);
  for (std::size_t a = 0; a < t.count(); ++a) {
    for (std::size_t b = 0; b < t.count(); ++b) {
      oracle::Seq sa, sb;
      for (int x : t.sequence(a)) sa.push_back(std::to_string(x));
      for (int x : t.sequence(b)) sb.push_back(std::to_string(x));
      EXPECT_EQ(t.distance(a, b), oracle::levenshtein_recursive(sa, sb));
    }
  }
}

TEST(OracleSelfTest, EnumerationProbabilitiesSumToOne) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    testing::RandomModel model(seed, {"a", "b"});
    double total = 0;
    for (const auto& s : oracle::enumerate_sequences(model, {}, 4)) total += std::exp(s.log_prob);
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(OracleSelfTest, Entropy) {
  EXPECT_DOUBLE_EQ(oracle::entropy_bits({4, 4}), 1.0);
  EXPECT_DOUBLE_EQ(oracle::entropy_bits({8, 0}), 0.0);
  EXPECT_NEAR(oracle::information_gain({true, true, false, false}, {true, true, false, false}),
              1.0, 1e-15);
}

}  // namespace
}  // namespace crev
