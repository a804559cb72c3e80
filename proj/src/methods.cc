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

#include "crev/methods.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string_view>

#include "crev/errors.h"
#include "crev/java_lexer.h"

namespace crev {
namespace {

bool is_modifier(const LexToken& t) {
  static const std::set<std::string_view> kModifiers = {
      "public", "private",      "protected", "static",    "final",
      "abstract", "native",     "synchronized", "transient", "volatile",
      "strictfp", "default"};
  if (t.kind == LexKind::kKeyword) return kModifiers.count(t.text) > 0;
  return t.kind == LexKind::kIdentifier && t.text == "sealed";
}

bool is_type_keyword(const LexToken& t) {
  return t.kind == LexKind::kKeyword &&
         (t.text == "class" || t.text == "interface" || t.text == "enum");
}

class Extractor {
 public:
  Extractor(const FileVersion& file, std::vector<LexToken> tokens)
      : file_(file), t_(std::move(tokens)) {
    match_brackets();
  }

  std::vector<MethodRecord> run() {
    parse_members(0, t_.size(), "", false);
    std::stable_sort(out_.begin(), out_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<MethodRecord> records;
    records.reserve(out_.size());
    for (auto& [offset, record] : out_) records.push_back(std::move(record));
    return records;
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& why) const {
    const int line = at < t_.size() ? t_[at].line : (t_.empty() ? 1 : t_.back().line);
    throw ExtractionError(file_.path, "line " + std::to_string(line) + ": " + why);
  }

  bool is(std::size_t i, std::string_view text) const {
    return i < t_.size() && t_[i].text == text &&
           (t_[i].kind == LexKind::kSeparator || t_[i].kind == LexKind::kKeyword);
  }

  bool is_ident(std::size_t i) const {
    return i < t_.size() && t_[i].kind == LexKind::kIdentifier;
  }

  void match_brackets() {
    match_.assign(t_.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (t_[i].kind != LexKind::kSeparator) continue;
      const std::string& s = t_[i].text;
      if (s == "(" || s == "[" || s == "{") {
        stack.push_back(i);
      } else if (s == ")" || s == "]" || s == "}") {
        const char open = s == ")" ? '(' : s == "]" ? '[' : '{';
        if (stack.empty() || t_[stack.back()].text[0] != open) {
          fail(i, "unbalanced '" + s + "'");
        }
        match_[stack.back()] = i;
        match_[i] = stack.back();
        stack.pop_back();
      }
    }
    if (!stack.empty()) fail(stack.back(), "unclosed '" + t_[stack.back()].text + "'");
  }

  // Skips an annotation starting at `i` (which must be '@'); returns the
  // index after it.
  std::size_t skip_annotation(std::size_t i, std::size_t end) const {
    ++i;
    if (!is_ident(i)) fail(i, "malformed annotation");
    ++i;
    while (i + 1 < end && is(i, ".") && is_ident(i + 1)) i += 2;
    if (i < end && is(i, "(")) i = match_[i] + 1;
    return i;
  }

  bool is_record_header(std::size_t i) const {
    return is_ident(i) && t_[i].text == "record" && is_ident(i + 1) &&
           (is(i + 2, "(") || is(i + 2, "<"));
  }

  // Index of the '{' opening a type body whose header starts at `i`.
  std::size_t find_type_body(std::size_t i, std::size_t end) const {
    for (std::size_t j = i; j < end; ++j) {
      if (is(j, "{")) return j;
      if (is(j, "(")) j = match_[j];
      if (is(j, ";")) break;
    }
    fail(i, "type declaration without body");
  }

  void parse_type_decl(std::size_t kw, std::size_t end) {
    const bool is_enum = is(kw, "enum");
    std::size_t name_idx = kw + 1;
    if (!is_ident(name_idx)) fail(kw, "type declaration without name");
    const std::size_t open = find_type_body(name_idx, end);
    parse_members(open + 1, match_[open], t_[name_idx].text, is_enum);
  }

  std::size_t parse_enum_constants(std::size_t i, std::size_t end) {
    while (i < end) {
      while (i < end && is(i, "@")) i = skip_annotation(i, end);
      if (i >= end) return i;
      if (is(i, ";")) return i + 1;
      if (!is_ident(i)) return i;
      const std::string name = t_[i].text;
      ++i;
      if (i < end && is(i, "(")) i = match_[i] + 1;
      if (i < end && is(i, "{")) {
        parse_members(i + 1, match_[i], name, false);
        i = match_[i] + 1;
      }
      if (i < end && is(i, ",")) {
        ++i;
        continue;
      }
      if (i < end && is(i, ";")) return i + 1;
      return i;
    }
    return i;
  }

  void parse_members(std::size_t begin, std::size_t end, const std::string& type_name,
                     bool is_enum) {
    std::size_t i = begin;
    if (is_enum) i = parse_enum_constants(i, end);
    while (i < end) {
      if (is(i, ";")) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < end) {
        if (is(i, "@") && !is(i + 1, "interface")) {
          i = skip_annotation(i, end);
        } else if (is_modifier(t_[i])) {
          ++i;
        } else if (is_ident(i) && t_[i].text == "non" && is(i + 1, "-") &&
                   is_ident(i + 2) && t_[i + 2].text == "sealed") {
          i += 3;
        } else {
          break;
        }
      }
      if (i >= end) fail(start, "dangling modifiers");

      if (is(i, "{")) {  // initializer block
        scan_block(i + 1, match_[i]);
        i = match_[i] + 1;
        continue;
      }
      if (is_type_keyword(t_[i])) {
        parse_type_decl(i, end);
        i = match_[find_type_body(i + 1, end)] + 1;
        continue;
      }
      if (is(i, "@") && is(i + 1, "interface")) {
        parse_type_decl(i + 1, end);
        i = match_[find_type_body(i + 2, end)] + 1;
        continue;
      }
      if (is_record_header(i)) {
        parse_type_decl(i, end);
        i = match_[find_type_body(i + 1, end)] + 1;
        continue;
      }
      i = parse_method_or_field(start, i, end, type_name);
    }
  }

  std::size_t parse_method_or_field(std::size_t start, std::size_t i, std::size_t end,
                                    const std::string& type_name) {
    for (std::size_t j = i; j < end; ++j) {
      if (is(j, "[")) {
        j = match_[j];
      } else if (is(j, "(")) {
        if (j == i || !is_ident(j - 1)) fail(j, "malformed member declaration");
        return parse_method(start, j, end);
      } else if (is(j, "=") || is(j, ";")) {
        return skip_field(i, end);
      } else if (is(j, "{")) {
        // Compact canonical constructor of a record: `Name {`.
        if (j == i + 1 && is_ident(i) && t_[i].text == type_name) {
          emit(start, i, j, j, match_[j]);
          scan_block(j + 1, match_[j]);
          return match_[j] + 1;
        }
        fail(j, "unexpected '{' in member declaration");
      }
    }
    fail(start, "unterminated member declaration");
  }

  std::size_t skip_field(std::size_t i, std::size_t end) {
    for (std::size_t j = i; j < end; ++j) {
      if (is(j, "(") || is(j, "[") || is(j, "{")) {
        j = match_[j];
      } else if (is(j, ";")) {
        scan_block(i, j);
        return j + 1;
      }
    }
    fail(i, "unterminated field declaration");
  }

  std::size_t parse_method(std::size_t start, std::size_t open_paren, std::size_t end) {
    bool after_default = false;
    for (std::size_t k = match_[open_paren] + 1; k < end; ++k) {
      if (is(k, "default")) after_default = true;
      if (is(k, "{") && !after_default) {
        emit(start, open_paren - 1, open_paren, k, match_[k]);
        scan_block(k + 1, match_[k]);
        return match_[k] + 1;
      }
      if (is(k, "(") || is(k, "[") || is(k, "{")) {
        k = match_[k];
        continue;
      }
      if (is(k, ";")) {
        emit(start, open_paren - 1, open_paren, std::nullopt, k);
        return k + 1;
      }
    }
    fail(start, "method declaration without body or ';'");
  }

  // Looks for anonymous class bodies and local type declarations.
  void scan_block(std::size_t begin, std::size_t end) {
    std::size_t t = begin;
    while (t < end) {
      if (is(t, "new")) {
        std::size_t j = t + 1;
        int angle = 0;
        while (j < end) {
          if (is(j, "<")) {
            ++angle;
          } else if (is(j, ">")) {
            --angle;
          } else if (is(j, ">>")) {
            angle -= 2;
          } else if (is(j, ">>>")) {
            angle -= 3;
          } else if (is(j, "@")) {
            j = skip_annotation(j, end);
            continue;
          } else if (angle <= 0 && !is_ident(j) && !is(j, ".") && !is(j, ",") &&
                     !is(j, "?")) {
            if (t_[j].kind != LexKind::kKeyword) break;
          }
          ++j;
        }
        if (j < end && is(j, "(") && match_[j] + 1 < end && is(match_[j] + 1, "{")) {
          const std::size_t open = match_[j] + 1;
          std::string anon = j > t + 1 ? t_[j - 1].text : "";
          parse_members(open + 1, match_[open], anon, false);
          t = match_[open] + 1;
          continue;
        }
        ++t;
        continue;
      }
      if (is_type_keyword(t_[t]) && (t == begin || !is(t - 1, ".")) && is_ident(t + 1)) {
        const std::size_t open = find_type_body(t + 1, end);
        parse_type_decl(t, end);
        t = match_[open] + 1;
        continue;
      }
      if (is_record_header(t) &&
          (t == begin || is(t - 1, ";") || is(t - 1, "{") || is(t - 1, "}") ||
           is_modifier(t_[t - 1]))) {
        const std::size_t open = find_type_body(t + 1, end);
        parse_type_decl(t, end);
        t = match_[open] + 1;
        continue;
      }
      ++t;
    }
  }

  std::vector<std::string> parameter_types(std::size_t open, std::size_t close) const {
    std::vector<std::vector<std::size_t>> params(1);
    int angle = 0;
    for (std::size_t i = open + 1; i < close; ++i) {
      if (is(i, "(") || is(i, "[") || is(i, "{")) {
        for (std::size_t k = i; k <= match_[i]; ++k) params.back().push_back(k);
        i = match_[i];
        continue;
      }
      if (is(i, "<")) ++angle;
      if (is(i, ">")) angle -= 1;
      if (is(i, ">>")) angle -= 2;
      if (is(i, ">>>")) angle -= 3;
      if (is(i, ",") && angle <= 0) {
        params.emplace_back();
        continue;
      }
      params.back().push_back(i);
    }
    if (params.size() == 1 && params[0].empty()) return {};

    std::vector<std::string> types;
    for (const auto& p : params) {
      std::vector<std::size_t> kept;
      for (std::size_t n = 0; n < p.size(); ++n) {
        const std::size_t idx = p[n];
        if (is(idx, "@")) {
          // Annotation: '@' Name ('.' Name)* ('(' ... ')')?
          std::size_t m = n + 1;
          if (m < p.size()) ++m;
          while (m + 1 < p.size() && is(p[m], ".") && is_ident(p[m + 1])) m += 2;
          if (m < p.size() && is(p[m], "(")) {
            const std::size_t close_idx = match_[p[m]];
            while (m < p.size() && p[m] <= close_idx) ++m;
          }
          n = m - 1;
          continue;
        }
        if (is(idx, "final")) continue;
        kept.push_back(idx);
      }
      if (kept.empty()) fail(open, "empty parameter");
      // Receiver parameter (`Outer this`) is not a formal parameter.
      if (is(kept.back(), "this")) continue;
      std::size_t name_pos = kept.size();
      while (name_pos > 0 && (is(kept[name_pos - 1], "[") || is(kept[name_pos - 1], "]"))) {
        --name_pos;
      }
      if (name_pos == 0 || !is_ident(kept[name_pos - 1])) {
        fail(open, "malformed parameter");
      }
      std::string type;
      int depth = 0;
      for (std::size_t n = 0; n + 1 < name_pos; ++n) {
        const std::size_t idx = kept[n];
        if (is(idx, "<")) ++depth;
        else if (is(idx, ">")) depth -= 1;
        else if (is(idx, ">>")) depth -= 2;
        else if (is(idx, ">>>")) depth -= 3;
        else if (depth == 0) type += t_[idx].text;
      }
      for (std::size_t n = name_pos; n < kept.size(); ++n) type += t_[kept[n]].text;
      if (type.empty()) fail(open, "parameter without type");
      types.push_back(std::move(type));
    }
    return types;
  }

  void emit(std::size_t start, std::size_t name_idx, std::size_t open_paren,
            std::optional<std::size_t> body_open, std::size_t last) {
    MethodRecord r;
    r.file_path = file_.path;
    r.name = t_[name_idx].text;
    std::vector<std::string> types;
    if (is(open_paren, "(")) types = parameter_types(open_paren, match_[open_paren]);
    r.parameter_arity = static_cast<int>(types.size());
    r.signature_key = r.name + "(";
    for (std::size_t n = 0; n < types.size(); ++n) {
      if (n) r.signature_key += ",";
      r.signature_key += types[n];
    }
    r.signature_key += ")";
    r.line_start = t_[start].line;
    r.line_end = t_[last].end_line;
    const std::size_t from = t_[start].offset;
    const std::size_t to = t_[last].offset + t_[last].text.size();
    r.source_text = file_.content.substr(from, to - from);
    r.has_body = body_open.has_value();
    out_.emplace_back(from, std::move(r));
  }

  const FileVersion& file_;
  std::vector<LexToken> t_;
  std::vector<std::size_t> match_;
  std::vector<std::pair<std::size_t, MethodRecord>> out_;
};

std::map<std::string, int> token_bag(const MethodRecord& m) {
  std::map<std::string, int> bag;
  for (auto& t : code_token_texts(m.source_text)) ++bag[t];
  return bag;
}

}  // namespace

std::vector<MethodRecord> extract_methods(const FileVersion& file) {
  std::vector<LexToken> tokens;
  try {
    tokens = lex_java(file.content, /*keep_comments=*/false);
  } catch (const LexError& e) {
    throw ExtractionError(file.path, e.what());
  }
  return Extractor(file, std::move(tokens)).run();
}

double token_overlap(const MethodRecord& a, const MethodRecord& b) {
  const auto bag_a = token_bag(a);
  const auto bag_b = token_bag(b);
  int size_a = 0, size_b = 0, shared = 0;
  for (const auto& [tok, n] : bag_a) {
    size_a += n;
    auto it = bag_b.find(tok);
    if (it != bag_b.end()) shared += std::min(n, it->second);
  }
  for (const auto& [tok, n] : bag_b) size_b += n;
  const int denom = std::max(size_a, size_b);
  return denom == 0 ? 0.0 : static_cast<double>(shared) / denom;
}

std::vector<MethodPairing> match_method_versions(std::span<const FileVersion> before_files,
                                                 std::span<const FileVersion> after_files,
                                                 SkipLog* skips) {
  auto extract_or_skip = [&](const FileVersion& f) -> std::optional<std::vector<MethodRecord>> {
    try {
      return extract_methods(f);
    } catch (const ExtractionError& e) {
      if (skips) skips->push_back({e.path(), e.reason()});
      return std::nullopt;
    }
  };

  std::vector<MethodPairing> pairings;
  for (const auto& before_file : before_files) {
    auto after_it = std::find_if(after_files.begin(), after_files.end(),
                                 [&](const FileVersion& f) { return f.path == before_file.path; });
    if (after_it == after_files.end()) continue;
    auto before = extract_or_skip(before_file);
    if (!before) continue;
    auto after = extract_or_skip(*after_it);
    if (!after) continue;

    std::vector<bool> before_used(before->size()), after_used(after->size());
    for (std::size_t b = 0; b < before->size(); ++b) {
      for (std::size_t a = 0; a < after->size(); ++a) {
        if (!after_used[a] && (*before)[b].signature_key == (*after)[a].signature_key) {
          pairings.push_back({(*before)[b], (*after)[a]});
          before_used[b] = after_used[a] = true;
          break;
        }
      }
    }

    std::vector<std::size_t> left;
    for (std::size_t b = 0; b < before->size(); ++b) {
      if (!before_used[b]) left.push_back(b);
    }
    if (left.size() != 1) continue;
    const MethodRecord& orphan = (*before)[left[0]];
    std::optional<std::size_t> best;
    double best_overlap = 0.0;
    for (std::size_t a = 0; a < after->size(); ++a) {
      const MethodRecord& cand = (*after)[a];
      if (after_used[a] || cand.parameter_arity != orphan.parameter_arity ||
          cand.name == orphan.name) {
        continue;
      }
      const double overlap = token_overlap(orphan, cand);
      if (overlap >= kRenameOverlapThreshold && overlap > best_overlap) {
        best = a;
        best_overlap = overlap;
      }
    }
    if (best) pairings.push_back({orphan, (*after)[*best]});
  }
  return pairings;
}

}  // namespace crev
