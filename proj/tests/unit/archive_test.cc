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

#include <nlohmann/json.hpp>

#include "crev/archive.h"
#include "crev/errors.h"
#include "crev/io.h"
#include "support/round_generator.h"

namespace crev {
namespace {

ReviewRound sample_round() {
  ReviewRound r;
  r.project = {HostKind::kGithub, "https://api.github.com", "acme/widget"};
  r.change_id = "42";
  r.round_index = 1;
  r.submitted = {{"src/A.java", "class A {\n\t// caf\xc3\xa9 \"q\"\n}\n", "sha1"}};
  r.revised = {{"src/A.java", "class A {}\n", "sha2"}};
  r.comments = {{"bob", false, "src/A.java", 2, 3, "multi\nline \\ body", 1}};
  return r;
}

TEST(ArchiveTest, LineRoundTrip) {
  const auto r = sample_round();
  const auto line = round_to_json_line(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(round_from_json_line(line), r);
}

TEST(ArchiveTest, GeneratedCorpusRoundTrip) {
  const auto corpus = testing::generate_corpus(21, {.rounds = 40});
  EXPECT_EQ(parse_rounds(serialize_rounds(corpus.rounds)), corpus.rounds);
}

TEST(ArchiveTest, PersistAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "crev_archive_test";
  std::filesystem::remove_all(dir);
  const std::vector<ReviewRound> rounds = {sample_round(), sample_round()};
  EXPECT_EQ(persist_rounds(rounds, dir / "sub" / "rounds.jsonl"), 2u);
  EXPECT_EQ(load_rounds(dir / "sub" / "rounds.jsonl"), rounds);
  EXPECT_THROW(load_rounds(dir / "missing.jsonl"), Error);
  std::filesystem::remove_all(dir);
}

TEST(ArchiveTest, LenientModeSkipsCorruptLines) {
  std::vector<ReviewRound> rounds(5, sample_round());
  auto lines = split_lines(serialize_rounds(rounds));
  lines[2] = lines[2].substr(0, lines[2].size() / 2);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  std::vector<LoadIssue> issues;
  const auto loaded = parse_rounds(text, LoadMode::kLenient, &issues);
  EXPECT_EQ(loaded.size(), 4u);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].line, 3u);
  EXPECT_THROW(parse_rounds(text), ParseError);
}

TEST(ArchiveTest, SchemaMismatchAlwaysThrows) {
  auto j = nlohmann::json::parse(round_to_json_line(sample_round()));
  j["schema_version"] = 2;
  const std::string text = j.dump() + "\n";
  try {
    parse_rounds(text, LoadMode::kLenient);
    FAIL();
  } catch (const SchemaVersionError& e) {
    EXPECT_EQ(e.found(), 2);
  }
}

TEST(ArchiveTest, ErrorsNameTheField) {
  auto base = nlohmann::json::parse(round_to_json_line(sample_round()));
  struct Case {
    std::function<void(nlohmann::json&)> mutate;
    std::string field;
  };
  const Case cases[] = {
      {[](auto& j) { j["comments"][0].erase("body"); }, "comments[0].body"},
      {[](auto& j) { j["comments"][0]["line_start"] = "x"; }, "comments[0].line_start"},
      {[](auto& j) { j["project"]["host_kind"] = "svn"; }, "project.host_kind"},
      {[](auto& j) { j.erase("change_id"); }, "change_id"},
      {[](auto& j) { j["submitted"][0].erase("content"); }, "submitted[0].content"},
      {[](auto& j) { j["comments"][0]["line_end"] = 1; }, "<record>"},
  };
  for (const auto& c : cases) {
    auto j = base;
    c.mutate(j);
    try {
      round_from_json_line(j.dump());
      ADD_FAILURE() << c.field;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.field(), c.field);
    }
  }
  EXPECT_THROW(round_from_json_line("not json"), ParseError);
}

}  // namespace
}  // namespace crev
