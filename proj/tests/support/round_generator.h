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

// Random review rounds with known ground truth for the dataset builder.
// Every comment and method carries the outcome the builder must reach.

#ifndef CREV_TESTS_SUPPORT_ROUND_GENERATOR_H_
#define CREV_TESTS_SUPPORT_ROUND_GENERATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "crev/dataset.h"
#include "crev/review.h"

namespace crev::testing {

enum class CommentKind {
  kRelevant,
  kIrrelevant,
  kContributor,
  kOnCommentLine,
  kUrlOnly,
  kUnlinked,   // on a field, outside every method
  kOutside,    // on a non-Java file
  kUnparseable,  // on a file that does not parse
};

enum class Mutation {
  kNone,
  kCosmetic,  // trailing comment only
  kDeleteStatement,
  kSwapStatements,
  kNewIdentifier,
  kRename,
  kDeleteMethod,
  kDeleteFile,
};

// (change_id, round_index, file_path, method line_start)
using GroupKey = std::tuple<std::string, int, std::string, int>;

struct GeneratedCorpus {
  std::vector<ReviewRound> rounds;
  // Expected fate of every candidate group; nullopt means it is emitted.
  std::map<GroupKey, std::optional<Filter>> expected;
  // Groups in rounds that copy an earlier round under a new change id.
  std::vector<GroupKey> copies;
  std::size_t unparseable_comments = 0;
  std::size_t outside_comments = 0;
  std::size_t unlinked_comments = 0;
};

struct GeneratorOptions {
  std::size_t rounds = 60;
  std::size_t max_tokens = 100;
  double copy_rate = 0.1;
  double unparseable_rate = 0.05;
};

// Identifiers and literals the generator treats as idioms.
IdiomSet generator_idioms();
const std::vector<std::string>& relevant_bodies();
const std::vector<std::string>& irrelevant_bodies();

GeneratedCorpus generate_corpus(std::uint64_t seed, const GeneratorOptions& options = {});

}  // namespace crev::testing

#endif  // CREV_TESTS_SUPPORT_ROUND_GENERATOR_H_
