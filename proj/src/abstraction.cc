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

#include "crev/abstraction.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

#include "crev/errors.h"
#include "crev/java_lexer.h"

namespace crev {
namespace {

constexpr std::array<std::string_view, kAllCategories.size()> kCategoryNames = {
    "VAR", "METHOD", "TYPE", "STRING", "CHAR", "INT", "FLOAT"};

std::size_t index_of(IdCategory c) { return static_cast<std::size_t>(c); }

bool is_all_caps(std::string_view s) {
  bool has_upper = false;
  for (unsigned char c : s) {
    if (std::islower(c)) return false;
    if (std::isupper(c)) has_upper = true;
  }
  return has_upper;
}

// Syntactic role of the identifier at `i`; no symbol table is available.
IdCategory identifier_role(const std::vector<LexToken>& t, std::size_t i) {
  auto text_at = [&](std::size_t k) -> std::string_view {
    return k < t.size() ? std::string_view(t[k].text) : std::string_view();
  };
  const std::string_view prev = i > 0 ? text_at(i - 1) : std::string_view();
  const std::string_view next = text_at(i + 1);
  if (next == "(") return prev == "new" ? IdCategory::kType : IdCategory::kMethod;
  if (prev == "@" || prev == "new") return IdCategory::kType;
  const std::string& word = t[i].text;
  if (std::isupper(static_cast<unsigned char>(word[0]))) {
    if (word.size() > 1 && is_all_caps(word)) return IdCategory::kVar;  // constant
    return IdCategory::kType;
  }
  if (i + 1 < t.size() && t[i + 1].kind == LexKind::kIdentifier) return IdCategory::kType;
  return IdCategory::kVar;
}

IdCategory literal_category(LexKind kind) {
  switch (kind) {
    case LexKind::kStringLiteral:
      return IdCategory::kString;
    case LexKind::kCharLiteral:
      return IdCategory::kChar;
    case LexKind::kIntLiteral:
      return IdCategory::kInt;
    default:
      return IdCategory::kFloat;
  }
}

bool contains_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; }

}  // namespace

std::string_view category_name(IdCategory category) {
  return kCategoryNames[index_of(category)];
}

std::optional<std::pair<IdCategory, int>> parse_abstract_id(std::string_view text) {
  const auto underscore = text.rfind('_');
  if (underscore == std::string_view::npos || underscore + 1 >= text.size()) {
    return std::nullopt;
  }
  const std::string_view prefix = text.substr(0, underscore);
  const std::string_view digits = text.substr(underscore + 1);
  if (digits[0] == '0') return std::nullopt;
  int n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || n < 1) {
    return std::nullopt;
  }
  for (std::size_t c = 0; c < kCategoryNames.size(); ++c) {
    if (kCategoryNames[c] == prefix) return std::make_pair(kAllCategories[c], n);
  }
  return std::nullopt;
}

bool is_abstract_id(std::string_view text) { return parse_abstract_id(text).has_value(); }

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\' || i + 1 == escaped.size()) {
      out += escaped[i];
      continue;
    }
    const char n = escaped[++i];
    out += n == 't' ? '\t' : n == 'n' ? '\n' : n == 'r' ? '\r' : n;
  }
  return out;
}

std::string IdiomSet::serialize() const {
  std::string out;
  for (const auto& e : entries_) {
    out += escape_field(e);
    out += '\n';
  }
  return out;
}

IdiomSet IdiomSet::parse(std::string_view text) {
  std::set<std::string> entries;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) entries.insert(unescape_field(line));
    pos = nl + 1;
  }
  return IdiomSet(std::move(entries));
}

const std::string& AbstractionMap::intern(const std::string& raw, IdCategory category) {
  auto key = std::make_pair(raw, category);
  auto it = reverse_.find(key);
  if (it != reverse_.end()) return it->second;
  const int n = ++next_[index_of(category)];
  std::string id = std::string(category_name(category)) + "_" + std::to_string(n);
  entries_.emplace_back(id, raw);
  forward_.emplace(id, raw);
  return reverse_.emplace(std::move(key), std::move(id)).first->second;
}

std::optional<std::string> AbstractionMap::find_id(std::string_view raw,
                                                   IdCategory category) const {
  auto it = reverse_.find(std::make_pair(std::string(raw), category));
  if (it == reverse_.end()) return std::nullopt;
  return it->second;
}

const std::string* AbstractionMap::find_raw(std::string_view id) const {
  auto it = forward_.find(id);
  return it == forward_.end() ? nullptr : &it->second;
}

std::string AbstractionMap::serialize() const {
  std::string out;
  for (const auto& [id, raw] : entries_) {
    out += id;
    out += '\t';
    out += escape_field(raw);
    out += '\n';
  }
  return out;
}

AbstractionMap AbstractionMap::parse(std::string_view text) {
  AbstractionMap map;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw FormatError("map line without tab");
    const std::string_view id = line.substr(0, tab);
    const auto parsed = parse_abstract_id(id);
    if (!parsed) throw FormatError("invalid abstract id '" + std::string(id) + "'");
    const auto [category, n] = *parsed;
    if (n != map.next_[index_of(category)] + 1) {
      throw FormatError("non-dense id " + std::string(id));
    }
    const std::string& assigned = map.intern(unescape_field(line.substr(tab + 1)), category);
    if (assigned != id) throw FormatError("duplicate raw text for " + std::string(id));
  }
  return map;
}

std::vector<std::string> AbstractedMethod::texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

IdiomSet compute_idioms(std::span<const MethodRecord> corpus, std::size_t top_n) {
  if (corpus.empty()) throw InvalidArgument("cannot compute idioms of an empty corpus");
  if (top_n == 0) throw InvalidArgument("top_n must be positive");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& m : corpus) {
    std::vector<LexToken> tokens;
    try {
      tokens = lex_java(m.source_text, false);
    } catch (const LexError&) {
      continue;
    }
    for (auto& t : tokens) {
      if (t.kind == LexKind::kIdentifier ||
          (is_literal(t.kind) && !contains_space(t.text))) {
        ++counts[t.text];
      }
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > top_n) ranked.resize(top_n);
  std::set<std::string> entries;
  for (auto& [text, n] : ranked) entries.insert(std::move(text));
  return IdiomSet(std::move(entries));
}

AbstractedMethod abstract_source(std::string_view source, const IdiomSet& idioms,
                                 AbstractionMap& map) {
  std::vector<LexToken> lexed;
  try {
    lexed = lex_java(source, false);
  } catch (const LexError& e) {
    throw AbstractionError(e.what());
  }
  AbstractedMethod out;
  out.tokens.reserve(lexed.size());
  for (std::size_t i = 0; i < lexed.size(); ++i) {
    const LexToken& t = lexed[i];
    Token tok{t.text, TokenKind::kPunctuation, t.line};
    if (t.kind == LexKind::kKeyword) {
      tok.kind = TokenKind::kKeyword;
    } else if (t.kind == LexKind::kSeparator) {
      tok.kind = TokenKind::kPunctuation;
    } else {
      const bool ident = t.kind == LexKind::kIdentifier;
      if (idioms.contains(t.text)) {
        tok.kind = ident ? TokenKind::kIdentifier : TokenKind::kLiteral;
      } else {
        const IdCategory cat = ident ? identifier_role(lexed, i) : literal_category(t.kind);
        tok.text = map.intern(t.text, cat);
        tok.kind = TokenKind::kAbstractId;
      }
    }
    out.tokens.push_back(std::move(tok));
  }
  return out;
}

AbstractedPair abstract_pair(const MethodRecord& before, const MethodRecord& after,
                             const IdiomSet& idioms) {
  AbstractedPair pair;
  pair.before = abstract_source(before.source_text, idioms, pair.map);
  pair.after = abstract_source(after.source_text, idioms, pair.map);
  return pair;
}

std::vector<std::string> concretize(std::span<const Token> tokens, const AbstractionMap& map) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t.kind != TokenKind::kAbstractId) {
      out.push_back(t.text);
      continue;
    }
    const std::string* raw = map.find_raw(t.text);
    if (raw == nullptr) throw UnmappableTokenError(t.text);
    out.push_back(*raw);
  }
  return out;
}

std::vector<std::string> concretize(std::span<const std::string> tokens,
                                    const AbstractionMap& map) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!is_abstract_id(t)) {
      out.push_back(t);
      continue;
    }
    const std::string* raw = map.find_raw(t);
    if (raw == nullptr) throw UnmappableTokenError(t);
    out.push_back(*raw);
  }
  return out;
}

bool is_camel_case(std::string_view word) {
  for (std::size_t i = 1; i < word.size(); ++i) {
    const unsigned char a = word[i - 1], b = word[i];
    if (std::islower(a) && std::isupper(b)) return true;
    if (b == '_' && std::isalnum(a) && i + 1 < word.size() &&
        std::isalnum(static_cast<unsigned char>(word[i + 1]))) {
      return true;
    }
  }
  return false;
}

std::vector<std::string> abstract_comment(std::string_view body, const AbstractionMap& map) {
  auto lookup = [&](std::string_view raw,
                    std::initializer_list<IdCategory> cats) -> std::optional<std::string> {
    for (IdCategory c : cats) {
      if (auto id = map.find_id(raw, c)) return id;
    }
    return std::nullopt;
  };

  std::vector<std::string> out;
  for (const auto& word : split_tokens(body)) {
    if (is_abstract_id(word) || word == kCodePlaceholder) {
      out.push_back(word);
      continue;
    }
    // Quoted literals are matched as whole words, ignoring trailing punctuation.
    std::string_view core = word;
    while (!core.empty() && std::string_view(".,;:?!)").find(core.back()) != std::string_view::npos) {
      core.remove_suffix(1);
    }
    if (!core.empty() && (core.front() == '"' || core.front() == '\'')) {
      if (auto id = lookup(core, {IdCategory::kString, IdCategory::kChar})) {
        out.push_back(*id + std::string(word.substr(core.size())));
        continue;
      }
    }

    std::string rebuilt;
    std::size_t p = 0;
    while (p < word.size()) {
      const unsigned char c = word[p];
      if (std::isalpha(c) || c == '_' || c == '$') {
        std::size_t q = p;
        while (q < word.size() && is_ident_char(static_cast<unsigned char>(word[q]))) ++q;
        const std::string run = word.substr(p, q - p);
        if (is_abstract_id(run) || run == kCodePlaceholder) {
          rebuilt += run;
        } else if (auto id = lookup(run, {IdCategory::kVar, IdCategory::kMethod,
                                          IdCategory::kType})) {
          rebuilt += *id;
        } else if (is_camel_case(run)) {
          rebuilt += kCodePlaceholder;
        } else {
          rebuilt += run;
        }
        p = q;
      } else if (std::isdigit(c)) {
        std::size_t q = p;
        while (q < word.size() && is_ident_char(static_cast<unsigned char>(word[q]))) ++q;
        if (q + 1 < word.size() && word[q] == '.' &&
            std::isdigit(static_cast<unsigned char>(word[q + 1]))) {
          ++q;
          while (q < word.size() && is_ident_char(static_cast<unsigned char>(word[q]))) ++q;
        }
        const std::string run = word.substr(p, q - p);
        if (auto id = lookup(run, {IdCategory::kInt, IdCategory::kFloat})) {
          rebuilt += *id;
        } else {
          rebuilt += run;
        }
        p = q;
      } else {
        rebuilt += static_cast<char>(c);
        ++p;
      }
    }
    out.push_back(std::move(rebuilt));
  }
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t p = 0;
  while (p < line.size()) {
    while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
    std::size_t q = p;
    while (q < line.size() && !std::isspace(static_cast<unsigned char>(line[q]))) ++q;
    if (q > p) out.emplace_back(line.substr(p, q - p));
    p = q;
  }
  return out;
}

}  // namespace crev
