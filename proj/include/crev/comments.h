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

#ifndef CREV_COMMENTS_H_
#define CREV_COMMENTS_H_

#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crev/methods.h"
#include "crev/review.h"

namespace crev {

enum class Relevance { kUnknown, kRelevant, kIrrelevant };

std::string_view to_string(Relevance r);
Relevance relevance_from_string(std::string_view s);

struct MethodKey {
  std::string file_path;
  std::string signature_key;
  int line_start = 0;

  bool operator==(const MethodKey&) const = default;
};

MethodKey key_of(const MethodRecord& m);

struct LinkedComment {
  ReviewComment comment;
  MethodKey method_key;
  Relevance relevance = Relevance::kUnknown;
  std::optional<std::string> fired_rule;
};

// Index of the innermost method whose line span contains
// [comment.line_start, comment.line_end], if any. Only methods whose
// file_path equals comment.path are considered.
std::optional<std::size_t> link_comment(const ReviewComment& comment,
                                        std::span<const MethodRecord> methods);

// The bundled English stopword list (lowercase).
const std::vector<std::string>& stopwords();
bool is_stopword(std::string_view lowercase_word);

// Lowercases, maps every non-alphanumeric character to a space (apostrophes
// are dropped) and collapses runs of spaces.
std::string normalize_text(std::string_view text);

enum class RuleKind { kKeyword, kRegex, kMaxWords };

struct HeuristicRule {
  std::string id;
  RuleKind kind;
  std::string pattern;
};

struct HeuristicVerdict {
  Relevance relevance;
  std::optional<std::string> fired_rule;
};

// Keyword rules match whole-word phrases in normalize_text(body); regex rules
// search the lowercased body; maxwords rules fire when the normalized body
// has at most N words. Rules are tried in file order.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<HeuristicRule> rules);

  // Format: `rule_id<TAB>keyword|regex|maxwords<TAB>pattern` per line; blank
  // lines and lines starting with '#' are ignored. Throws FormatError.
  static RuleSet parse(std::string_view text);
  static const RuleSet& bundled();
  static std::string_view bundled_text();

  HeuristicVerdict classify(std::string_view body) const;
  const std::vector<HeuristicRule>& rules() const { return rules_; }

 private:
  std::vector<HeuristicRule> rules_;
  std::vector<std::optional<std::regex>> compiled_;
};

// Applies the bundled rule set.
HeuristicVerdict heuristic_relevance(std::string_view body);

}  // namespace crev

#endif  // CREV_COMMENTS_H_
