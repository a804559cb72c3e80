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

#include "crev/relevance.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <optional>

#include "crev/errors.h"
#include "crev/random.h"

namespace crev {
namespace {

using Matrix = std::vector<std::vector<double>>;

Relevance label_of(const FeatureVector& v) {
  if (!v.label || *v.label == Relevance::kUnknown) {
    throw InvalidArgument("training requires labeled vectors");
  }
  return *v.label;
}

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double d = 0.0;
  auto ia = a.features.begin();
  auto ib = b.features.begin();
  while (ia != a.features.end() || ib != b.features.end()) {
    if (ib == b.features.end() || (ia != a.features.end() && ia->first < ib->first)) {
      d += ia->second * ia->second;
      ++ia;
    } else if (ia == a.features.end() || ib->first < ia->first) {
      d += ib->second * ib->second;
      ++ib;
    } else {
      const double diff = ia->second - ib->second;
      d += diff * diff;
      ++ia;
      ++ib;
    }
  }
  return d;
}

double entropy_of(std::size_t pos, std::size_t neg) {
  const double n = static_cast<double>(pos + neg);
  double h = 0.0;
  for (std::size_t c : {pos, neg}) {
    if (c) {
      const double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<Relevance>& y, std::size_t features_per_split,
              Rng* rng)
      : x_(x), y_(y), mtry_(features_per_split), rng_(rng) {}

  template <typename Tree>
  void build(Tree& tree, std::vector<std::size_t> rows) {
    grow(tree, std::move(rows));
  }

 private:
  template <typename Tree>
  int grow(Tree& tree, std::vector<std::size_t> rows) {
    std::size_t pos = 0;
    for (auto r : rows) pos += y_[r] == Relevance::kRelevant;
    const std::size_t neg = rows.size() - pos;
    const int index = static_cast<int>(tree.size());
    tree.emplace_back();
    tree[index].label = pos >= neg ? Relevance::kRelevant : Relevance::kIrrelevant;
    if (pos == 0 || neg == 0 || x_.empty() || x_[0].empty()) return index;

    const std::size_t d = x_[0].size();
    std::vector<std::size_t> candidates(d);
    std::iota(candidates.begin(), candidates.end(), 0);
    if (rng_ && mtry_ < d) {
      shuffle_in_place(candidates, *rng_);
      candidates.resize(mtry_);
      std::sort(candidates.begin(), candidates.end());
    }

    const double parent = entropy_of(pos, neg);
    double best_gain = 1e-12;
    std::optional<std::pair<std::size_t, double>> best;
    std::vector<std::pair<double, bool>> column(rows.size());
    for (std::size_t f : candidates) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {x_[rows[i]][f], y_[rows[i]] == Relevance::kRelevant};
      }
      std::sort(column.begin(), column.end());
      std::size_t left_pos = 0, left_n = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        left_pos += column[i].second;
        ++left_n;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t right_n = rows.size() - left_n;
        const double child = (left_n * entropy_of(left_pos, left_n - left_pos) +
                              right_n * entropy_of(pos - left_pos, right_n - (pos - left_pos))) /
                             rows.size();
        const double gain = parent - child;
        if (gain > best_gain) {
          best_gain = gain;
          best = {f, (column[i].first + column[i + 1].first) / 2.0};
        }
      }
    }
    if (!best) return index;

    std::vector<std::size_t> left, right;
    for (auto r : rows) (x_[r][best->first] <= best->second ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(tree, std::move(left));
    const int r = grow(tree, std::move(right));
    tree[index].feature = static_cast<int>(best->first);
    tree[index].threshold = best->second;
    tree[index].left = l;
    tree[index].right = r;
    return index;
  }

  const Matrix& x_;
  const std::vector<Relevance>& y_;
  std::size_t mtry_;
  Rng* rng_;
};

}  // namespace

std::vector<FeatureVector> oversample_minority(std::span<const FeatureVector> vectors,
                                               std::uint64_t seed, std::size_t neighbors) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    (label_of(vectors[i]) == Relevance::kRelevant ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw InvalidArgument("oversampling needs both relevant and irrelevant samples");
  }
  std::vector<FeatureVector> out(vectors.begin(), vectors.end());
  if (pos.size() == neg.size()) return out;
  const auto& minority = pos.size() < neg.size() ? pos : neg;
  const std::size_t needed = std::max(pos.size(), neg.size()) - minority.size();
  const Relevance minority_label = *vectors[minority[0]].label;

  if (minority.size() == 1) {
    std::clog << "warning: minority class has a single sample; duplicating it\n";
    for (std::size_t i = 0; i < needed; ++i) out.push_back(vectors[minority[0]]);
    return out;
  }

  const std::size_t k = std::max<std::size_t>(1, std::min(neighbors, minority.size() - 1));
  std::vector<std::vector<std::size_t>> knn(minority.size());
  for (std::size_t a = 0; a < minority.size(); ++a) {
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t b = 0; b < minority.size(); ++b) {
      if (a != b) dist.emplace_back(squared_distance(vectors[minority[a]], vectors[minority[b]]), b);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (std::size_t j = 0; j < k; ++j) knn[a].push_back(dist[j].second);
  }

  Rng rng(seed);
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t a = s % minority.size();
    const FeatureVector& base = vectors[minority[a]];
    const FeatureVector& nb = vectors[minority[knn[a][uniform_index(rng, k)]]];
    const double gap = uniform_unit(rng);
    FeatureVector synth;
    synth.label = minority_label;
    for (const auto& [f, v] : base.features) {
      auto it = nb.features.find(f);
      const double other = it == nb.features.end() ? 0.0 : it->second;
      const double value = v + gap * (other - v);
      if (value != 0.0) synth.features[f] = value;
    }
    for (const auto& [f, v] : nb.features) {
      if (base.features.count(f)) continue;
      const double value = gap * v;
      if (value != 0.0) synth.features[f] = value;
    }
    out.push_back(std::move(synth));
  }
  return out;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRandomForest:
      return "random-forest";
    case ModelKind::kDecisionTree:
      return "decision-tree";
    case ModelKind::kBayesian:
      return "bayesian";
    default:
      return "constant";
  }
}

ModelKind model_kind_from_string(std::string_view s) {
  if (s == "random-forest") return ModelKind::kRandomForest;
  if (s == "decision-tree") return ModelKind::kDecisionTree;
  if (s == "bayesian") return ModelKind::kBayesian;
  if (s == "constant") return ModelKind::kConstant;
  throw InvalidArgument("unknown model kind '" + std::string(s) + "'");
}

std::vector<double> RelevanceModel::dense(const FeatureVector& v) const {
  std::vector<double> x(features_.size(), 0.0);
  for (std::size_t j = 0; j < features_.size(); ++j) {
    auto it = v.features.find(features_[j]);
    if (it != v.features.end()) x[j] = it->second;
  }
  return x;
}

Relevance RelevanceModel::predict_tree(const Tree& tree, const std::vector<double>& x) {
  int n = 0;
  while (tree[n].feature >= 0) {
    n = x[tree[n].feature] <= tree[n].threshold ? tree[n].left : tree[n].right;
  }
  return tree[n].label;
}

Relevance RelevanceModel::classify(const FeatureVector& v) const {
  if (kind_ == ModelKind::kConstant) return Relevance::kRelevant;
  const std::vector<double> x = dense(v);
  if (kind_ == ModelKind::kBayesian) {
    double score[2] = {log_prior_[0], log_prior_[1]};
    for (int c = 0; c < 2; ++c) {
      for (std::size_t j = 0; j < x.size(); ++j) score[c] += x[j] * log_likelihood_[c][j];
    }
    return score[0] >= score[1] ? Relevance::kRelevant : Relevance::kIrrelevant;
  }
  std::size_t relevant_votes = 0;
  for (const auto& tree : trees_) relevant_votes += predict_tree(tree, x) == Relevance::kRelevant;
  return 2 * relevant_votes >= trees_.size() ? Relevance::kRelevant : Relevance::kIrrelevant;
}

Relevance RelevanceModel::classify(std::string_view body) const {
  return classify(extract_features(body));
}

RelevanceModel train_relevance_model(std::span<const FeatureVector> vectors, ModelKind kind,
                                     const TrainingConfig& config) {
  if (vectors.empty()) throw InvalidArgument("cannot train on an empty sample");
  RelevanceModel model;
  model.kind_ = kind;
  if (kind == ModelKind::kConstant) return model;

  bool has_pos = false, has_neg = false;
  for (const auto& v : vectors) (label_of(v) == Relevance::kRelevant ? has_pos : has_neg) = true;
  const bool both = has_pos && has_neg;

  if (both) {
    auto selected = select_features(vectors, config.gain_threshold);
    model.features_.assign(selected.begin(), selected.end());
  }

  std::vector<FeatureVector> train(vectors.begin(), vectors.end());
  if (config.oversample && both) train = oversample_minority(vectors, config.seed, config.neighbors);

  Matrix x;
  std::vector<Relevance> y;
  x.reserve(train.size());
  for (const auto& v : train) {
    x.push_back(model.dense(v));
    y.push_back(*v.label);
  }

  if (kind == ModelKind::kBayesian) {
    const std::size_t d = model.features_.size();
    double count[2] = {0, 0};
    std::vector<double> sums[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const int c = y[i] == Relevance::kRelevant ? 0 : 1;
      count[c] += 1;
      for (std::size_t j = 0; j < d; ++j) sums[c][j] += x[i][j];
    }
    for (int c = 0; c < 2; ++c) {
      model.log_prior_[c] = std::log((count[c] + 1.0) / (x.size() + 2.0));
      const double total = std::accumulate(sums[c].begin(), sums[c].end(), 0.0);
      model.log_likelihood_[c].resize(d);
      for (std::size_t j = 0; j < d; ++j) {
        model.log_likelihood_[c][j] = std::log((sums[c][j] + 1.0) / (total + d));
      }
    }
    return model;
  }

  std::vector<std::size_t> all(x.size());
  std::iota(all.begin(), all.end(), 0);
  if (kind == ModelKind::kDecisionTree) {
    TreeBuilder builder(x, y, model.features_.size(), nullptr);
    model.trees_.emplace_back();
    builder.build(model.trees_.back(), all);
    return model;
  }

  const std::size_t d = model.features_.size();
  const std::size_t mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(d))));
  Rng rng(config.seed);
  TreeBuilder builder(x, y, mtry, &rng);
  const std::size_t n_trees = std::max<std::size_t>(1, config.trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    std::vector<std::size_t> bag(x.size());
    for (auto& r : bag) r = uniform_index(rng, x.size());
    model.trees_.emplace_back();
    builder.build(model.trees_.back(), std::move(bag));
  }
  return model;
}

CrossValidationReport cross_validate(std::span<const FeatureVector> vectors, ModelKind kind,
                                     const TrainingConfig& config, std::size_t folds) {
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (vectors.size() < folds) {
    throw InvalidArgument("fewer samples (" + std::to_string(vectors.size()) + ") than folds (" +
                          std::to_string(folds) + ")");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    (label_of(vectors[i]) == Relevance::kRelevant ? pos : neg).push_back(i);
  }
  Rng rng(config.seed);
  shuffle_in_place(pos, rng);
  shuffle_in_place(neg, rng);
  std::vector<std::size_t> fold_of(vectors.size());
  std::size_t slot = 0;
  for (auto i : pos) fold_of[i] = slot++ % folds;
  for (auto i : neg) fold_of[i] = slot++ % folds;

  CrossValidationReport report;
  report.folds = folds;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<FeatureVector> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (fold_of[i] == f) {
        test.push_back(i);
      } else {
        train.push_back(vectors[i]);
      }
    }
    if (test.empty()) continue;
    TrainingConfig fold_config = config;
    fold_config.seed = config.seed + f + 1;
    const RelevanceModel model = train_relevance_model(train, kind, fold_config);
    for (auto i : test) {
      const bool truth = *vectors[i].label == Relevance::kRelevant;
      const bool predicted = model.classify(vectors[i]) == Relevance::kRelevant;
      if (truth && predicted) ++report.true_positive;
      if (!truth && predicted) ++report.false_positive;
      if (!truth && !predicted) ++report.true_negative;
      if (truth && !predicted) ++report.false_negative;
    }
  }
  auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  const std::size_t tp = report.true_positive, fp = report.false_positive;
  const std::size_t tn = report.true_negative, fn = report.false_negative;
  report.relevant = {ratio(tp, tp + fp), ratio(tp, tp + fn), tp + fn};
  report.irrelevant = {ratio(tn, tn + fn), ratio(tn, tn + fp), tn + fp};
  report.accuracy = ratio(tp + tn, vectors.size());
  return report;
}

}  // namespace crev
