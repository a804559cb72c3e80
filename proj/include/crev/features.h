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

#ifndef CREV_FEATURES_H_
#define CREV_FEATURES_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crev/comments.h"

namespace crev {

// n-gram (n in {1,2,3}) -> count. Values are real so that oversampled
// vectors can hold interpolated counts.
struct FeatureVector {
  std::map<std::string, double> features;
  std::optional<Relevance> label;

  bool operator==(const FeatureVector&) const = default;
};

// Features of an already-abstracted comment body. Text is lowercased and
// punctuation removed (abstract IDs and _CODE_ are kept verbatim). 1-grams
// drop stopwords and are Porter-stemmed; 2- and 3-grams use the raw words.
FeatureVector extract_features(std::string_view body);

// Binary entropy of the label minus its conditional entropy given feature
// presence (count > 0), in bits. Vectors must all be labeled.
double information_gain(std::span<const FeatureVector> vectors, std::string_view feature);

inline constexpr double kDefaultGainThreshold = 0.01;

// Features whose information gain is >= threshold. Throws InvalidArgument
// if the vectors do not carry both labels.
std::set<std::string> select_features(std::span<const FeatureVector> vectors,
                                      double threshold = kDefaultGainThreshold);

}  // namespace crev

#endif  // CREV_FEATURES_H_
