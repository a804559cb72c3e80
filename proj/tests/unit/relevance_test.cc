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

#include <algorithm>
#include <cmath>

#include "crev/errors.h"
#include "crev/io.h"
#include "crev/pipeline.h"
#include "crev/relevance.h"

namespace crev {
namespace {

std::vector<FeatureVector> labeled_corpus() {
  return parse_labeled_comments(read_file(std::string(CREV_FIXTURES_DIR) +
                                          "/labeled_comments.tsv"));
}

std::size_t count(const std::vector<FeatureVector>& vs, Relevance r) {
  return static_cast<std::size_t>(
      std::count_if(vs.begin(), vs.end(), [&](const FeatureVector& v) { return v.label == r; }));
}

// True when `s` equals a + t (b - a) for one t in [0, 1] over every feature.
bool on_segment(const FeatureVector& s, const FeatureVector& a, const FeatureVector& b) {
  std::set<std::string> keys;
  for (const auto* v : {&s, &a, &b}) {
    for (const auto& [k, x] : v->features) keys.insert(k);
  }
  auto get = [](const FeatureVector& v, const std::string& k) {
    auto it = v.features.find(k);
    return it == v.features.end() ? 0.0 : it->second;
  };
  std::optional<double> t;
  for (const auto& k : keys) {
    const double d = get(b, k) - get(a, k);
    const double off = get(s, k) - get(a, k);
    if (std::abs(d) < 1e-12) {
      if (std::abs(off) > 1e-9) return false;
      continue;
    }
    const double tk = off / d;
    if (tk < -1e-9 || tk > 1 + 1e-9) return false;
    if (t && std::abs(*t - tk) > 1e-9) return false;
    t = tk;
  }
  return true;
}

TEST(SmoteTest, BalancesWithInterpolatedSamples) {
  const auto corpus = labeled_corpus();
  ASSERT_EQ(corpus.size(), 100u);
  const auto out = oversample_minority(corpus, 3);
  EXPECT_EQ(count(out, Relevance::kRelevant), count(out, Relevance::kIrrelevant));
  ASSERT_GT(out.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(out[i], corpus[i]);
  std::vector<const FeatureVector*> minority;
  for (const auto& v : corpus) {
    if (v.label == Relevance::kIrrelevant) minority.push_back(&v);
  }
  for (std::size_t i = corpus.size(); i < out.size(); ++i) {
    EXPECT_EQ(out[i].label, Relevance::kIrrelevant);
    bool found = false;
    for (const auto* a : minority) {
      for (const auto* b : minority) found = found || on_segment(out[i], *a, *b);
    }
    EXPECT_TRUE(found) << "synthetic sample " << i;
  }
  EXPECT_EQ(oversample_minority(corpus, 3), out);
}

TEST(SmoteTest, RequiresBothLabels) {
  std::vector<FeatureVector> one = {{{{"a", 1}}, Relevance::kRelevant}};
  EXPECT_THROW(oversample_minority(one, 1), InvalidArgument);
}

TEST(SmoteTest, SingleMinorityIsDuplicated) {
  std::vector<FeatureVector> vs = {{{{"a", 1}}, Relevance::kRelevant},
                                   {{{"a", 2}}, Relevance::kRelevant},
                                   {{{"b", 1}}, Relevance::kIrrelevant}};
  const auto out = oversample_minority(vs, 1);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[3], vs[2]);
}

TEST(CrossValidationTest, ConstantModelPrecisionIsClassShare) {
  const auto corpus = labeled_corpus();
  const auto report = cross_validate(corpus, ModelKind::kConstant, {}, 10);
  EXPECT_EQ(report.folds, 10u);
  EXPECT_NEAR(report.relevant.precision, 0.89, 1e-12);
  EXPECT_NEAR(report.relevant.recall, 1.0, 1e-12);
  EXPECT_EQ(report.relevant.support, 89u);
  EXPECT_EQ(report.irrelevant.support, 11u);
  EXPECT_EQ(report.true_positive + report.false_positive + report.true_negative +
                report.false_negative,
            100u);
}

TEST(CrossValidationTest, EveryKindRunsAndCountsAddUp) {
  const auto corpus = labeled_corpus();
  TrainingConfig config;
  config.oversample = true;
  config.trees = 15;
  config.seed = 4;
  for (auto kind : {ModelKind::kRandomForest, ModelKind::kDecisionTree, ModelKind::kBayesian}) {
    const auto r = cross_validate(corpus, kind, config, 5);
    EXPECT_EQ(r.true_positive + r.false_positive + r.true_negative + r.false_negative, 100u)
        << to_string(kind);
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
    EXPECT_EQ(cross_validate(corpus, kind, config, 5).accuracy, r.accuracy) << "deterministic";
  }
  EXPECT_THROW(cross_validate(std::span(corpus).first(3), ModelKind::kConstant, {}, 10),
               InvalidArgument);
}

TEST(RelevanceModelTest, SeparableDataIsLearned) {
  std::vector<FeatureVector> vs;
  for (int i = 0; i < 20; ++i) {
    vs.push_back(extract_features("please rename VAR_1 to something clearer " +
                                  std::to_string(i)));
    vs.back().label = Relevance::kRelevant;
    vs.push_back(extract_features("lgtm thanks"));
    vs.back().label = Relevance::kIrrelevant;
  }
  TrainingConfig config;
  config.trees = 10;
  for (auto kind : {ModelKind::kRandomForest, ModelKind::kDecisionTree, ModelKind::kBayesian}) {
    const auto model = train_relevance_model(vs, kind, config);
    EXPECT_EQ(model.kind(), kind);
    EXPECT_EQ(model.classify("please rename VAR_1 to something clearer"), Relevance::kRelevant) << to_string(kind);
    EXPECT_EQ(model.classify("lgtm thanks"), Relevance::kIrrelevant) << to_string(kind);
  }
  EXPECT_EQ(train_relevance_model(vs, ModelKind::kConstant, config).classify("lgtm"),
            Relevance::kRelevant);
}

TEST(ModelKindTest, Names) {
  for (auto k : {ModelKind::kRandomForest, ModelKind::kDecisionTree, ModelKind::kBayesian,
                 ModelKind::kConstant}) {
    EXPECT_EQ(model_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(model_kind_from_string("svm"), InvalidArgument);
}

}  // namespace
}  // namespace crev
