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

#include <random>

#include "crev/errors.h"
#include "crev/features.h"
#include "oracles/oracles.h"

namespace crev {
namespace {

FeatureVector labeled(std::map<std::string, double> f, Relevance r) {
  return {std::move(f), r};
}

TEST(FeaturesTest, UnigramsAreStemmedWithoutStopwords) {
  const auto v = extract_features("Please rename VAR_1 in the loops _CODE_");
  EXPECT_EQ(v.features.count("the"), 0u);
  EXPECT_EQ(v.features.at("loop"), 1.0);
  EXPECT_EQ(v.features.at("renam"), 1.0);
  EXPECT_EQ(v.features.at("VAR_1"), 1.0);
  EXPECT_EQ(v.features.at("_CODE_"), 1.0);
  EXPECT_EQ(v.features.at("in the loops"), 1.0);
  EXPECT_EQ(v.features.at("rename VAR_1"), 1.0);
  EXPECT_FALSE(v.label.has_value());
}

TEST(FeaturesTest, CountsRepeats) {
  const auto v = extract_features("null null null");
  EXPECT_EQ(v.features.at("null"), 3.0);
  EXPECT_EQ(v.features.at("null null"), 2.0);
  EXPECT_EQ(v.features.at("null null null"), 1.0);
}

TEST(InformationGainTest, HandComputedValue) {
  // present: R R R I, absent: R I I I. H = 1, H(label | f) = H(1/4).
  std::vector<FeatureVector> vs;
  const bool present[] = {true, true, true, false, true, false, false, false};
  const bool relevant[] = {true, true, true, true, false, false, false, false};
  for (int i = 0; i < 8; ++i) {
    vs.push_back(labeled(present[i] ? std::map<std::string, double>{{"f", 1.0}}
                                    : std::map<std::string, double>{},
                         relevant[i] ? Relevance::kRelevant : Relevance::kIrrelevant));
  }
  EXPECT_NEAR(information_gain(vs, "f"), 0.18872187554086717, 1e-12);
  EXPECT_NEAR(information_gain(vs, "missing"), 0.0, 1e-12);
}

TEST(InformationGainTest, MatchesOracleOnRandomData) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + static_cast<int>(rng() % 30);
    std::vector<FeatureVector> vs;
    std::vector<bool> present, relevant;
    for (int i = 0; i < n; ++i) {
      const bool p = rng() % 3 == 0;
      const bool r = rng() % 2 == 0;
      present.push_back(p);
      relevant.push_back(r);
      std::map<std::string, double> f;
      if (p) f["f"] = 1.0 + static_cast<double>(rng() % 3);
      vs.push_back(labeled(f, r ? Relevance::kRelevant : Relevance::kIrrelevant));
    }
    EXPECT_NEAR(information_gain(vs, "f"), oracle::information_gain(present, relevant), 1e-12);
  }
}

TEST(SelectFeaturesTest, ThresholdAndLabels) {
  std::vector<FeatureVector> vs = {
      labeled({{"good", 1}, {"the", 1}}, Relevance::kRelevant),
      labeled({{"good", 1}, {"the", 1}}, Relevance::kRelevant),
      labeled({{"bad", 1}, {"the", 1}}, Relevance::kIrrelevant),
      labeled({{"bad", 1}, {"the", 1}}, Relevance::kIrrelevant),
  };
  EXPECT_EQ(select_features(vs), (std::set<std::string>{"bad", "good"}));
  vs.pop_back();
  vs.pop_back();
  EXPECT_THROW(select_features(vs), InvalidArgument);
}

}  // namespace
}  // namespace crev
