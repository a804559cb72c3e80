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

#include "crev/java_lexer.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "crev/errors.h"

namespace crev {
namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract",  "assert",       "boolean",   "break",      "byte",
    "case",      "catch",        "char",      "class",      "const",
    "continue",  "default",      "do",        "double",     "else",
    "enum",      "extends",      "final",     "finally",    "float",
    "for",       "goto",         "if",        "implements", "import",
    "instanceof", "int",         "interface", "long",       "native",
    "new",       "package",      "private",   "protected",  "public",
    "return",    "short",        "static",    "strictfp",   "super",
    "switch",    "synchronized", "this",      "throw",      "throws",
    "transient", "try",          "void",      "volatile",   "while",
    "true",      "false",        "null",
};

// Longest first so that greedy matching picks e.g. ">>>=" over ">>".
constexpr std::array<std::string_view, 25> kMultiCharOps = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--",
    "&&",   "||",  "==",  "!=",  "<=",  ">=", "+=", "-=", "*=",
    "/=",   "&=",  "|=",  "^=",  "%=",  "<<", ">>",
};

constexpr std::string_view kSingleCharOps = "(){}[];,.@=><!~?:+-*/&|^%";

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
  return is_ident_start(c) || std::isdigit(c);
}

class Lexer {
 public:
  Lexer(std::string_view src, bool keep_comments)
      : src_(src), keep_comments_(keep_comments) {}

  std::vector<LexToken> run() {
    while (pos_ < src_.size()) {
      const unsigned char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(c) || c == '\f') {
        ++pos_;
      } else if (starts_with("//")) {
        line_comment();
      } else if (starts_with("/*")) {
        block_comment();
      } else if (starts_with("\"\"\"")) {
        text_block();
      } else if (c == '"') {
        quoted('"', LexKind::kStringLiteral, "string literal");
      } else if (c == '\'') {
        quoted('\'', LexKind::kCharLiteral, "character literal");
      } else if (std::isdigit(c) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        number();
      } else if (is_ident_start(c)) {
        identifier();
      } else {
        op();
      }
    }
    return std::move(out_);
  }

 private:
  bool starts_with(std::string_view s) const {
    return src_.substr(pos_, s.size()) == s;
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void emit(std::size_t start, LexKind kind, int start_line) {
    if (kind == LexKind::kComment && !keep_comments_) return;
    out_.push_back(LexToken{std::string(src_.substr(start, pos_ - start)), kind,
                            start_line, line_, start});
  }

  void line_comment() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    emit(start, LexKind::kComment, line_);
  }

  void block_comment() {
    const std::size_t start = pos_;
    const int start_line = line_;
    pos_ += 2;
    while (pos_ < src_.size() && !starts_with("*/")) {
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= src_.size()) throw LexError(start_line, "unterminated comment");
    pos_ += 2;
    emit(start, LexKind::kComment, start_line);
  }

  void text_block() {
    const std::size_t start = pos_;
    const int start_line = line_;
    pos_ += 3;
    while (pos_ < src_.size() && !starts_with("\"\"\"")) {
      if (src_[pos_] == '\\') {
        ++pos_;
      }
      if (pos_ < src_.size() && src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= src_.size()) throw LexError(start_line, "unterminated text block");
    pos_ += 3;
    emit(start, LexKind::kStringLiteral, start_line);
  }

  void quoted(char quote, LexKind kind, const char* what) {
    const std::size_t start = pos_++;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        throw LexError(line_, std::string("unterminated ") + what);
      }
      const char c = src_[pos_++];
      if (c == '\\') {
        if (pos_ >= src_.size() || src_[pos_] == '\n') {
          throw LexError(line_, std::string("unterminated ") + what);
        }
        ++pos_;
      } else if (c == quote) {
        break;
      }
    }
    emit(start, kind, line_);
  }

  void digits(bool (*accept)(unsigned char)) {
    while (pos_ < src_.size() &&
           (accept(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
  }

  void number() {
    const std::size_t start = pos_;
    bool is_float = false;
    auto dec = [](unsigned char ch) { return std::isdigit(ch) != 0; };
    auto hex = [](unsigned char ch) { return std::isxdigit(ch) != 0; };
    auto bin = [](unsigned char ch) { return ch == '0' || ch == '1'; };
    const char p1 = peek(1);
    if (peek() == '0' && (p1 == 'x' || p1 == 'X')) {
      pos_ += 2;
      digits(+hex);
      if (peek() == '.') {
        ++pos_;
        digits(+hex);
        is_float = true;
      }
      if (peek() == 'p' || peek() == 'P') {
        is_float = true;
        exponent();
      }
    } else if (peek() == '0' && (p1 == 'b' || p1 == 'B')) {
      pos_ += 2;
      digits(+bin);
    } else {
      digits(+dec);
      if (peek() == '.' && peek(1) != '.' &&
          !is_ident_start(static_cast<unsigned char>(peek(1)))) {
        ++pos_;
        digits(+dec);
        is_float = true;
      } else if (peek() == '.' && (peek(1) == 'e' || peek(1) == 'E' ||
                                   peek(1) == 'f' || peek(1) == 'F' ||
                                   peek(1) == 'd' || peek(1) == 'D')) {
        ++pos_;
        is_float = true;
      }
      if (peek() == 'e' || peek() == 'E') {
        is_float = true;
        exponent();
      }
    }
    const char s = peek();
    if (s == 'l' || s == 'L') {
      if (is_float) throw LexError(line_, "malformed numeric literal");
      ++pos_;
    } else if (s == 'f' || s == 'F' || s == 'd' || s == 'D') {
      is_float = true;
      ++pos_;
    }
    if (is_ident_part(static_cast<unsigned char>(peek()))) {
      throw LexError(line_, "malformed numeric literal");
    }
    emit(start, is_float ? LexKind::kFloatLiteral : LexKind::kIntLiteral, line_);
  }

  void exponent() {
    ++pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw LexError(line_, "malformed exponent");
    }
    digits(+[](unsigned char ch) { return std::isdigit(ch) != 0; });
  }

  void identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_part(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    const std::string_view word = src_.substr(start, pos_ - start);
    emit(start, is_java_keyword(word) ? LexKind::kKeyword : LexKind::kIdentifier,
         line_);
  }

  void op() {
    const std::size_t start = pos_;
    for (std::string_view candidate : kMultiCharOps) {
      if (starts_with(candidate)) {
        pos_ += candidate.size();
        emit(start, LexKind::kSeparator, line_);
        return;
      }
    }
    if (kSingleCharOps.find(src_[pos_]) != std::string_view::npos) {
      ++pos_;
      emit(start, LexKind::kSeparator, line_);
      return;
    }
    throw LexError(line_, std::string("unexpected character '") + src_[pos_] + "'");
  }

  std::string_view src_;
  bool keep_comments_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<LexToken> out_;
};

}  // namespace

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_literal(LexKind kind) {
  return kind == LexKind::kStringLiteral || kind == LexKind::kCharLiteral ||
         kind == LexKind::kIntLiteral || kind == LexKind::kFloatLiteral;
}

std::vector<LexToken> lex_java(std::string_view source, bool keep_comments) {
  return Lexer(source, keep_comments).run();
}

std::vector<std::string> code_token_texts(std::string_view source) {
  std::vector<std::string> out;
  for (auto& t : lex_java(source, false)) out.push_back(std::move(t.text));
  return out;
}

}  // namespace crev
