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

#include "crev/features.h"

#include <cctype>
#include <cmath>

#include "crev/abstraction.h"
#include "crev/errors.h"
#include "crev/porter.h"

namespace crev {
namespace {

double entropy(double pos, double neg) {
  const double total = pos + neg;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double n : {pos, neg}) {
    if (n > 0.0) {
      const double p = n / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

bool is_relevant(const FeatureVector& v) {
  if (!v.label || *v.label == Relevance::kUnknown) {
    throw InvalidArgument("information gain requires labeled vectors");
  }
  return *v.label == Relevance::kRelevant;
}

}  // namespace

FeatureVector extract_features(std::string_view body) {
  std::vector<std::string> words;
  for (const auto& raw : split_tokens(body)) {
    if (is_abstract_id(raw) || raw == kCodePlaceholder) {
      words.push_back(raw);
      continue;
    }
    // Punctuation inside a word splits it ("fix-indentation"), except
    // apostrophes which are dropped ("don't" -> "dont").
    for (auto& w : split_tokens(normalize_text(raw))) words.push_back(std::move(w));
  }

  FeatureVector v;
  for (const auto& w : words) {
    if (is_abstract_id(w) || w == kCodePlaceholder) {
      v.features[w] += 1.0;
    } else if (!is_stopword(w)) {
      v.features[porter_stem(w)] += 1.0;
    }
  }
  for (std::size_t n = 2; n <= 3; ++n) {
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
      std::string gram = words[i];
      for (std::size_t j = 1; j < n; ++j) gram += " " + words[i + j];
      v.features[gram] += 1.0;
    }
  }
  return v;
}

double information_gain(std::span<const FeatureVector> vectors, std::string_view feature) {
  double pos_with = 0, neg_with = 0, pos_without = 0, neg_without = 0;
  const std::string key(feature);
  for (const auto& v : vectors) {
    const bool rel = is_relevant(v);
    auto it = v.features.find(key);
    const bool present = it != v.features.end() && it->second > 0.0;
    if (present) {
      (rel ? pos_with : neg_with) += 1;
    } else {
      (rel ? pos_without : neg_without) += 1;
    }
  }
  const double n = pos_with + neg_with + pos_without + neg_without;
  if (n == 0) return 0.0;
  const double with = pos_with + neg_with;
  const double without = pos_without + neg_without;
  const double h = entropy(pos_with + pos_without, neg_with + neg_without);
  const double conditional =
      (with / n) * entropy(pos_with, neg_with) + (without / n) * entropy(pos_without, neg_without);
  const double gain = h - conditional;
  return gain < 1e-12 ? 0.0 : gain;
}

std::set<std::string> select_features(std::span<const FeatureVector> vectors, double threshold) {
  bool has_pos = false, has_neg = false;
  std::set<std::string> candidates;
  for (const auto& v : vectors) {
    (is_relevant(v) ? has_pos : has_neg) = true;
    for (const auto& [f, count] : v.features) candidates.insert(f);
  }
  if (!has_pos || !has_neg) {
    throw InvalidArgument("feature selection needs both relevant and irrelevant samples");
  }
  std::set<std::string> kept;
  for (const auto& f : candidates) {
    if (information_gain(vectors, f) >= threshold) kept.insert(f);
  }
  return kept;
}

}  // namespace crev
