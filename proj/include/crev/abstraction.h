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

#ifndef CREV_ABSTRACTION_H_
#define CREV_ABSTRACTION_H_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crev/methods.h"

namespace crev {

enum class TokenKind {
  kKeyword,
  kPunctuation,
  kIdentifier,
  kLiteral,
  kAbstractId,
  kSpecial,  // _CODE_, <START>, <END>
};

struct Token {
  std::string text;
  TokenKind kind = TokenKind::kPunctuation;
  int line = 0;  // 1-based line within the method source; 0 when synthetic

  bool operator==(const Token&) const = default;
};

enum class IdCategory { kVar, kMethod, kType, kString, kChar, kInt, kFloat };

inline constexpr std::array<IdCategory, 7> kAllCategories = {
    IdCategory::kVar,    IdCategory::kMethod, IdCategory::kType, IdCategory::kString,
    IdCategory::kChar,   IdCategory::kInt,    IdCategory::kFloat};

std::string_view category_name(IdCategory category);

inline constexpr std::string_view kCodePlaceholder = "_CODE_";
inline constexpr std::string_view kSpanStart = "<START>";
inline constexpr std::string_view kSpanEnd = "<END>";

// True for CATEGORY_n with a known category and n >= 1.
bool is_abstract_id(std::string_view text);
std::optional<std::pair<IdCategory, int>> parse_abstract_id(std::string_view text);

// Identifiers and literals that are kept verbatim during abstraction.
class IdiomSet {
 public:
  static constexpr std::size_t kDefaultSize = 300;

  IdiomSet() = default;
  explicit IdiomSet(std::set<std::string> entries) : entries_(std::move(entries)) {}

  bool contains(std::string_view raw) const { return entries_.count(std::string(raw)) > 0; }
  std::size_t size() const { return entries_.size(); }
  const std::set<std::string>& entries() const { return entries_; }

  // One escaped entry per line, sorted.
  std::string serialize() const;
  static IdiomSet parse(std::string_view text);

  bool operator==(const IdiomSet&) const = default;

 private:
  std::set<std::string> entries_;
};

// Bidirectional association between abstract IDs and raw source text.
// IDs are numbered densely per category in assignment order.
class AbstractionMap {
 public:
  // Returns the ID for (raw, category), assigning the next free one if new.
  const std::string& intern(const std::string& raw, IdCategory category);

  std::optional<std::string> find_id(std::string_view raw, IdCategory category) const;
  const std::string* find_raw(std::string_view id) const;

  // (id, raw) pairs in assignment order.
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // `ID<TAB>raw` per line; tabs, newlines and backslashes in raw are escaped.
  std::string serialize() const;
  static AbstractionMap parse(std::string_view text);

  bool operator==(const AbstractionMap& other) const { return entries_ == other.entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::string, std::less<>> forward_;
  std::map<std::pair<std::string, IdCategory>, std::string> reverse_;
  std::array<int, kAllCategories.size()> next_{};
};

struct AbstractedMethod {
  std::vector<Token> tokens;

  std::size_t token_count() const { return tokens.size(); }
  std::vector<std::string> texts() const;
  bool operator==(const AbstractedMethod&) const = default;
};

struct AbstractedPair {
  AbstractedMethod before;
  AbstractedMethod after;
  AbstractionMap map;
};

// Top `top_n` identifiers and literals by occurrence count across the
// corpus, ties broken lexicographically. Literals containing whitespace are
// never idioms, so abstracted token strings stay space-separable. Methods
// that fail to lex are skipped. Throws InvalidArgument on an empty corpus
// or top_n == 0.
IdiomSet compute_idioms(std::span<const MethodRecord> corpus,
                        std::size_t top_n = IdiomSet::kDefaultSize);

// Abstracts one method's source into `map`, extending it with new IDs.
// Throws AbstractionError if the source does not lex.
AbstractedMethod abstract_source(std::string_view source, const IdiomSet& idioms,
                                 AbstractionMap& map);

// Pair mode: `before` is scanned fully before `after`, sharing one map.
AbstractedPair abstract_pair(const MethodRecord& before, const MethodRecord& after,
                             const IdiomSet& idioms);

// Replaces abstract IDs with their raw text. Throws UnmappableTokenError
// naming the first ID without a map entry.
std::vector<std::string> concretize(std::span<const Token> tokens, const AbstractionMap& map);
std::vector<std::string> concretize(std::span<const std::string> tokens,
                                    const AbstractionMap& map);

// True for words with a lowercase-to-uppercase transition or an underscore
// between alphanumerics.
bool is_camel_case(std::string_view word);

// Replaces code components mentioned in a reviewer comment with their IDs
// from `map`; unmatched camel-case identifiers become _CODE_.
std::vector<std::string> abstract_comment(std::string_view body, const AbstractionMap& map);

std::string join_tokens(std::span<const std::string> tokens);
std::vector<std::string> split_tokens(std::string_view line);

std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

}  // namespace crev

#endif  // CREV_ABSTRACTION_H_
