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

#ifndef CREV_JAVA_LEXER_H_
#define CREV_JAVA_LEXER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace crev {

enum class LexKind {
  kKeyword,
  kSeparator,  // operators and punctuation
  kIdentifier,
  kStringLiteral,  // includes text blocks
  kCharLiteral,
  kIntLiteral,
  kFloatLiteral,
  kComment,
};

struct LexToken {
  std::string text;
  LexKind kind;
  int line;      // 1-based line of the first character
  int end_line;  // line of the last character
  std::size_t offset;  // byte offset into the lexed text
};

bool is_java_keyword(std::string_view word);

bool is_literal(LexKind kind);

// Tokenizes Java source. Comments are returned as kComment tokens when
// `keep_comments` is set. Throws LexError on unterminated literals or
// comments and on characters that cannot start any Java token.
std::vector<LexToken> lex_java(std::string_view source, bool keep_comments = true);

// Convenience: token texts of the comment-free token stream.
std::vector<std::string> code_token_texts(std::string_view source);

}  // namespace crev

#endif  // CREV_JAVA_LEXER_H_
