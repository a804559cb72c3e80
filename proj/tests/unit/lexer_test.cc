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

#include <gtest/gtest.h>

#include "crev/errors.h"
#include "crev/java_lexer.h"

namespace crev {
namespace {

std::vector<LexKind> kinds(const std::vector<LexToken>& tokens) {
  std::vector<LexKind> out;
  for (const auto& t : tokens) out.push_back(t.kind);
  return out;
}

TEST(LexerTest, SplitsOperatorsAndKeywords) {
  EXPECT_EQ(code_token_texts("if (a >>>= 2) return b != c;"),
            (std::vector<std::string>{"if", "(", "a", ">>>=", "2", ")", "return", "b", "!=",
                                      "c", ";"}));
}

TEST(LexerTest, ClassifiesLiterals) {
  const auto tokens = lex_java("x = \"s\" + 'c' + 0x1F + 3.5e2f + 10L;", false);
  EXPECT_EQ(kinds(tokens),
            (std::vector<LexKind>{LexKind::kIdentifier, LexKind::kSeparator,
                                  LexKind::kStringLiteral, LexKind::kSeparator,
                                  LexKind::kCharLiteral, LexKind::kSeparator,
                                  LexKind::kIntLiteral, LexKind::kSeparator,
                                  LexKind::kFloatLiteral, LexKind::kSeparator,
                                  LexKind::kIntLiteral, LexKind::kSeparator}));
}

TEST(LexerTest, TracksLinesAndComments) {
  const auto tokens = lex_java("a\n/* x\n y */ b // tail\nc", true);
  ASSERT_EQ(tokens.size(), 5u);
  EXPECT_EQ(tokens[1].kind, LexKind::kComment);
  EXPECT_EQ(tokens[1].line, 2);
  EXPECT_EQ(tokens[1].end_line, 3);
  EXPECT_EQ(tokens[2].text, "b");
  EXPECT_EQ(tokens[2].line, 3);
  EXPECT_EQ(tokens[4].line, 4);
  EXPECT_EQ(lex_java("a // c\nb", false).size(), 2u);
}

TEST(LexerTest, TextBlocksAreSingleStringTokens) {
  const auto tokens = lex_java("s = \"\"\"\n  hi \"there\"\n  \"\"\";", false);
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[2].kind, LexKind::kStringLiteral);
  EXPECT_EQ(tokens[2].line, 1);
  EXPECT_EQ(tokens[2].end_line, 3);
}

TEST(LexerTest, EscapesInsideLiterals) {
  const auto tokens = lex_java(R"(a = "q\"x" + '\'';)", false);
  ASSERT_EQ(tokens.size(), 6u);
  EXPECT_EQ(tokens[2].text, R"("q\"x")");
  EXPECT_EQ(tokens[4].text, R"('\'')");
}

TEST(LexerTest, RejectsUnterminatedInput) {
  EXPECT_THROW(lex_java("a = \"open"), LexError);
  EXPECT_THROW(lex_java("/* never closed"), LexError);
  EXPECT_THROW(lex_java("a # b"), LexError);
  try {
    lex_java("a\nb\n'x");
    FAIL();
  } catch (const LexError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(LexerTest, KeywordTable) {
  EXPECT_TRUE(is_java_keyword("synchronized"));
  EXPECT_TRUE(is_java_keyword("true"));
  EXPECT_FALSE(is_java_keyword("String"));
}

}  // namespace
}  // namespace crev
