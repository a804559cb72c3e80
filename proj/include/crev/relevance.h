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

#ifndef CREV_RELEVANCE_H_
#define CREV_RELEVANCE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crev/features.h"

namespace crev {

inline constexpr std::size_t kDefaultSmoteNeighbors = 5;

// SMOTE. Returns the input vectors unchanged, followed by synthetic minority
// samples until both classes have equal counts. Each synthetic sample lies
// on the segment between a minority sample and one of its `neighbors`
// nearest minority neighbors (Euclidean over the union of features). A
// minority class of one sample is duplicated instead, with a warning on
// std::clog. Throws InvalidArgument unless both labels are present.
std::vector<FeatureVector> oversample_minority(std::span<const FeatureVector> vectors,
                                               std::uint64_t seed,
                                               std::size_t neighbors = kDefaultSmoteNeighbors);

enum class ModelKind { kRandomForest, kDecisionTree, kBayesian, kConstant };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view s);

struct TrainingConfig {
  double gain_threshold = kDefaultGainThreshold;
  bool oversample = false;
  std::size_t neighbors = kDefaultSmoteNeighbors;
  std::size_t trees = 100;
  std::uint64_t seed = 0;
};

class RelevanceModel {
 public:
  ModelKind kind() const { return kind_; }
  const std::vector<std::string>& selected_features() const { return features_; }

  Relevance classify(const FeatureVector& v) const;
  // `body` must already be abstracted.
  Relevance classify(std::string_view body) const;

 private:
  friend RelevanceModel train_relevance_model(std::span<const FeatureVector>, ModelKind,
                                              const TrainingConfig&);

  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Relevance label = Relevance::kRelevant;
  };
  using Tree = std::vector<Node>;

  std::vector<double> dense(const FeatureVector& v) const;
  static Relevance predict_tree(const Tree& tree, const std::vector<double>& x);

  ModelKind kind_ = ModelKind::kConstant;
  std::vector<std::string> features_;
  std::vector<Tree> trees_;
  // Naive Bayes: log prior and per-feature log likelihood, per class
  // (index 0 relevant, 1 irrelevant).
  double log_prior_[2] = {0.0, 0.0};
  std::vector<double> log_likelihood_[2];
};

// Selects features by information gain, optionally oversamples, then fits.
// kBayesian is a multinomial naive Bayes network; kDecisionTree is a single
// unpruned entropy tree; kRandomForest bags `trees` such trees with random
// feature subsets; kConstant always answers relevant.
RelevanceModel train_relevance_model(std::span<const FeatureVector> vectors, ModelKind kind,
                                     const TrainingConfig& config);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t support = 0;
};

struct CrossValidationReport {
  ClassMetrics relevant;
  ClassMetrics irrelevant;
  double accuracy = 0.0;
  std::size_t folds = 0;
  // Counts with "relevant" as the positive class, summed over folds.
  std::size_t true_positive = 0, false_positive = 0, true_negative = 0, false_negative = 0;
};

// Stratified k-fold cross-validation. Feature selection and oversampling
// run inside each training fold only. Throws InvalidArgument when there are
// fewer samples than folds.
CrossValidationReport cross_validate(std::span<const FeatureVector> vectors, ModelKind kind,
                                     const TrainingConfig& config, std::size_t folds = 10);

}  // namespace crev

#endif  // CREV_RELEVANCE_H_
