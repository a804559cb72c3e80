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

#include <filesystem>

#include "crev/errors.h"
#include "crev/io.h"
#include "crev/methods.h"

namespace crev {
namespace {

FileVersion file(std::string content, std::string path = "A.java") {
  return {std::move(path), std::move(content), "r1"};
}

TEST(MethodsTest, ExtractsSignaturesAndSpans) {
  const auto methods = extract_methods(file(
      "class A {\n"
      "  int f;\n"
      "  @Override\n"
      "  public <T> void put(java.util.Map<String, T> m, int[] xs, String... rest) {\n"
      "    m.clear();\n"
      "  }\n"
      "  abstract int size();\n"
      "  A(int x) { this.f = x; }\n"
      "}\n"));
  ASSERT_EQ(methods.size(), 3u);
  EXPECT_EQ(methods[0].name, "put");
  EXPECT_EQ(methods[0].parameter_arity, 3);
  EXPECT_EQ(methods[0].line_start, 3);
  EXPECT_EQ(methods[0].line_end, 6);
  EXPECT_TRUE(methods[0].source_text.starts_with("@Override"));
  EXPECT_TRUE(methods[0].source_text.ends_with("}"));
  EXPECT_FALSE(methods[1].has_body);
  EXPECT_EQ(methods[1].signature_key, "size()");
  EXPECT_EQ(methods[2].name, "A");
  EXPECT_EQ(methods[2].signature_key, "A(int)");
}

TEST(MethodsTest, NestedAndAnonymousClassesYieldOwnRecords) {
  const auto methods = extract_methods(file(
      "class A {\n"
      "  void outer() {\n"
      "    Runnable r = new Runnable() {\n"
      "      public void run() { }\n"
      "    };\n"
      "  }\n"
      "  static class B { int g() { return 1; } }\n"
      "}\n"));
  std::vector<std::string> names;
  for (const auto& m : methods) names.push_back(m.name);
  EXPECT_EQ(names, (std::vector<std::string>{"outer", "run", "g"}));
}

TEST(MethodsTest, FixtureCorpusParses) {
  std::size_t total = 0;
  for (const auto& entry :
       std::filesystem::directory_iterator(std::string(CREV_FIXTURES_DIR) + "/java")) {
    const auto methods = extract_methods(
        file(read_file(entry.path()), entry.path().filename().string()));
    EXPECT_FALSE(methods.empty()) << entry.path();
    for (const auto& m : methods) {
      EXPECT_LE(m.line_start, m.line_end);
      EXPECT_FALSE(m.source_text.empty());
    }
    total += methods.size();
  }
  EXPECT_GE(total, 100u);
}

TEST(MethodsTest, UnbalancedFileRaisesWithPath) {
  try {
    extract_methods(file("class A { void f() { }\n", "src/Broken.java"));
    FAIL();
  } catch (const ExtractionError& e) {
    EXPECT_EQ(e.path(), "src/Broken.java");
  }
  EXPECT_THROW(extract_methods(file("class A { String s = \"x; }")), ExtractionError);
}

TEST(MethodsTest, TokenOverlap) {
  MethodRecord a, b;
  a.source_text = "int f() { return 1; }";
  b.source_text = "int g() { return 1; }";
  EXPECT_DOUBLE_EQ(token_overlap(a, b), 8.0 / 9.0);
  MethodRecord empty;
  empty.source_text = "";
  EXPECT_EQ(token_overlap(empty, empty), 0.0);
}

TEST(MethodsTest, MatchesExactThenRename) {
  const FileVersion before[] = {file(
      "class A {\n"
      "  int f(int x) { return x + 1; }\n"
      "  int g(int x) { return x * 2 + 7; }\n"
      "}\n")};
  const FileVersion after[] = {file(
      "class A {\n"
      "  int f(int x) { return x + 2; }\n"
      "  int twice(int x) { return x * 2 + 7; }\n"
      "}\n")};
  const auto pairs = match_method_versions(before, after);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].before.name, "f");
  EXPECT_EQ(pairs[0].after.name, "f");
  EXPECT_EQ(pairs[1].before.name, "g");
  EXPECT_EQ(pairs[1].after.name, "twice");
}

TEST(MethodsTest, RenameNeedsOverlapAndArity) {
  const FileVersion before[] = {file("class A { int g(int x) { return x * 2 + 7; } }")};
  const FileVersion other_arity[] = {file("class A { int h(int x, int y) { return x * 2 + 7; } }")};
  EXPECT_TRUE(match_method_versions(before, other_arity).empty());
  const FileVersion rewritten[] = {file("class A { int h(int x) { while (true) { x--; } } }")};
  EXPECT_TRUE(match_method_versions(before, rewritten).empty());
}

TEST(MethodsTest, MissingOrBrokenAfterFileSkips) {
  const FileVersion before[] = {file("class A { int f() { return 1; } }")};
  const FileVersion moved[] = {file("class A { int f() { return 1; } }", "B.java")};
  EXPECT_TRUE(match_method_versions(before, moved).empty());
  const FileVersion broken[] = {file("class A { int f() { return 1; }")};
  SkipLog skips;
  EXPECT_TRUE(match_method_versions(before, broken, &skips).empty());
  ASSERT_EQ(skips.size(), 1u);
  EXPECT_EQ(skips[0].path, "A.java");
}

}  // namespace
}  // namespace crev
