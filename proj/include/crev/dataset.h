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

#ifndef CREV_DATASET_H_
#define CREV_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crev/abstraction.h"
#include "crev/comments.h"
#include "crev/methods.h"
#include "crev/review.h"

namespace crev {

struct Provenance {
  std::string project;
  std::string change_id;
  int round_index = 0;
  std::string file_path;
  std::string signature_key;
  int method_line_start = 0;
  // Set when the comment's lines held no code tokens and the markers were
  // placed around the nearest following token instead.
  bool span_approximate = false;

  bool operator==(const Provenance&) const = default;
};

// Half-open token range [start, end) of the commented region in m_s.
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  bool approximate = false;

  bool operator==(const TokenSpan&) const = default;
};

struct MethodTriplet {
  AbstractedMethod m_s;  // without span markers
  AbstractedMethod m_r;
  std::vector<std::string> r_nl;
  AbstractionMap map;
  TokenSpan span;
  Provenance provenance;

  // m_s with <START>/<END> around the commented span (the D_t source).
  std::vector<std::string> marked_source() const;
  bool operator==(const MethodTriplet&) const = default;
};

struct PairInstance {
  std::vector<std::string> source;
  std::vector<std::string> target;

  bool operator==(const PairInstance&) const = default;
};

// Filters in the order they are applied. Comment-level filters remove a
// candidate triplet when they leave it without comments.
enum class Filter {
  kIrrelevantComments,
  kContributorComments,
  kCodeCommentLines,
  kUnmatchedMethod,
  kAbstractionError,
  kUnchanged,
  kTooLong,
  kNewIdentifier,
  kNotSingleton,
  kEmptyComment,
  kDuplicate,
};

inline constexpr std::array<Filter, 11> kAllFilters = {
    Filter::kIrrelevantComments, Filter::kContributorComments, Filter::kCodeCommentLines,
    Filter::kUnmatchedMethod,    Filter::kAbstractionError,    Filter::kUnchanged,
    Filter::kTooLong,            Filter::kNewIdentifier,       Filter::kNotSingleton,
    Filter::kEmptyComment,       Filter::kDuplicate};

std::string_view to_string(Filter f);

struct CommentStats {
  std::size_t total = 0;
  std::size_t outside_submitted_java = 0;
  std::size_t unparseable_file = 0;
  std::size_t unlinked = 0;
  std::size_t linked = 0;
  std::size_t irrelevant = 0;
  std::size_t contributor = 0;
  std::size_t code_comment_line = 0;

  bool operator==(const CommentStats&) const = default;
};

struct AttritionStats {
  // (round, method) groups with at least one linked comment.
  std::size_t candidates = 0;
  std::map<Filter, std::size_t> removed;
  std::size_t output = 0;
  CommentStats comments;

  std::size_t total_removed() const;
  bool balanced() const { return candidates == total_removed() + output; }
  bool operator==(const AttritionStats&) const = default;
};

using RelevanceFilter = std::function<HeuristicVerdict(std::string_view)>;

struct BuildOptions {
  IdiomSet idioms;
  RelevanceFilter relevance = heuristic_relevance;
  std::size_t max_tokens = 100;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct BuildResult {
  std::vector<MethodTriplet> triplets;
  AttritionStats stats;
  SkipLog skips;
};

// Linking -> relevance -> contributor -> code-comment lines -> pair
// abstraction -> equality -> length -> new identifiers -> singleton ->
// comment normalization. Output is ordered by provenance.
BuildResult build_triplets(std::span<const ReviewRound> rounds, const BuildOptions& options);

// Drops URLs, strips leading/trailing punctuation, removes stopwords and
// lowercases everything except abstract IDs and _CODE_.
std::vector<std::string> normalize_comment(std::span<const std::string> tokens);

// Locates the tokens of `m_s` that originate from the comment's lines.
// `method` supplies the file line on which m_s starts.
TokenSpan locate_span(const AbstractedMethod& m_s, const ReviewComment& comment,
                      const MethodRecord& method);
std::vector<std::string> mark_span(const AbstractedMethod& m_s, const ReviewComment& comment,
                                   const MethodRecord& method);
std::vector<std::string> apply_markers(const AbstractedMethod& m_s, const TokenSpan& span);

enum class Split { kTrain, kEval, kTest };
inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kEval, Split::kTest};
std::string_view to_string(Split s);

struct SplitRatios {
  double train = 0.8;
  double eval = 0.1;
  double test = 0.1;
};

struct DatasetBundle {
  std::array<std::vector<MethodTriplet>, 3> triplets;  // D_t
  std::array<std::vector<PairInstance>, 3> pairs;      // D_p, index-aligned with D_t
  IdiomSet idioms;
  AttritionStats stats;
  SplitRatios ratios;
  std::uint64_t seed = 0;
  std::size_t max_tokens = 100;

  const std::vector<MethodTriplet>& triplets_of(Split s) const {
    return triplets[static_cast<std::size_t>(s)];
  }
  const std::vector<PairInstance>& pairs_of(Split s) const {
    return pairs[static_cast<std::size_t>(s)];
  }
  std::size_t size() const;
};

PairInstance to_pair(const MethodTriplet& t);

// Removes exact duplicates (and instances whose m_s -> m_r pair repeats an
// earlier one, so D_p stays duplicate-free), shuffles under `seed`, then
// splits with floor(n * eval) and floor(n * test) instances, the remainder
// going to train. `stats` is copied in with the duplicate count added.
// Throws InvalidArgument on bad ratios or fewer than 3 instances.
DatasetBundle split_and_dedup(std::vector<MethodTriplet> triplets, const SplitRatios& ratios,
                              std::uint64_t seed, AttritionStats stats = {},
                              IdiomSet idioms = {});

std::string triplet_line(const MethodTriplet& t);
std::string pair_line(const PairInstance& p);

std::string fnv1a64_hex(std::string_view data);

// Writes triplets/, pairs/, maps/, provenance/, idioms.txt and
// manifest.json under `dir`.
void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);
DatasetBundle read_bundle(const std::filesystem::path& dir);

}  // namespace crev

#endif  // CREV_DATASET_H_
