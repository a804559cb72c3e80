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
#include <map>
#include <random>

#include "crev/abstraction.h"
#include "crev/errors.h"
#include "crev/io.h"
#include "crev/java_lexer.h"

namespace crev {
namespace {

std::vector<MethodRecord> fixture_methods() {
  std::vector<MethodRecord> out;
  for (const auto& entry :
       std::filesystem::directory_iterator(std::string(CREV_FIXTURES_DIR) + "/java")) {
    auto ms = extract_methods({entry.path().filename().string(), read_file(entry.path()), "r"});
    out.insert(out.end(), ms.begin(), ms.end());
  }
  return out;
}

MethodRecord method(std::string source) {
  MethodRecord m;
  m.file_path = "A.java";
  m.source_text = std::move(source);
  return m;
}

TEST(AbstractionTest, AbstractsIdentifiersAndLiterals) {
  AbstractionMap map;
  const auto m = abstract_source(
      "public String greet(Person p, int n) { return p.name() + \"!\" + n * 2.5 + 'c'; }",
      IdiomSet(), map);
  EXPECT_EQ(join_tokens(m.texts()),
            "public TYPE_1 METHOD_1 ( TYPE_2 VAR_1 , int VAR_2 ) { return VAR_1 . METHOD_2 ( ) "
            "+ STRING_1 + VAR_2 * FLOAT_1 + CHAR_1 ; }");
  EXPECT_EQ(*map.find_raw("STRING_1"), "\"!\"");
  EXPECT_EQ(*map.find_id("p", IdCategory::kVar), "VAR_1");
}

TEST(AbstractionTest, IdiomsStayVerbatim) {
  AbstractionMap map;
  const auto m = abstract_source("int f(int i) { return i + 0 + size(); }",
                                 IdiomSet({"i", "0", "size"}), map);
  EXPECT_EQ(join_tokens(m.texts()), "int METHOD_1 ( int i ) { return i + 0 + size ( ) ; }");
  EXPECT_EQ(map.size(), 1u);
}

TEST(AbstractionTest, IdsAreDensePerCategory) {
  AbstractionMap map;
  EXPECT_EQ(map.intern("a", IdCategory::kVar), "VAR_1");
  EXPECT_EQ(map.intern("f", IdCategory::kMethod), "METHOD_1");
  EXPECT_EQ(map.intern("b", IdCategory::kVar), "VAR_2");
  EXPECT_EQ(map.intern("a", IdCategory::kVar), "VAR_1");
  EXPECT_EQ(map.size(), 3u);
}

TEST(AbstractionTest, MapSerializationRoundTrip) {
  AbstractionMap map;
  map.intern("\"tab\there\\\"", IdCategory::kString);
  map.intern("x", IdCategory::kVar);
  EXPECT_EQ(AbstractionMap::parse(map.serialize()), map);
  EXPECT_THROW(AbstractionMap::parse("NOT_AN_ID\tx\n"), FormatError);
}

TEST(AbstractionTest, IdiomSetSerializationRoundTrip) {
  IdiomSet idioms({"0", "size", "\"a b\"", "x\ty"});
  EXPECT_EQ(IdiomSet::parse(idioms.serialize()), idioms);
}

TEST(AbstractionTest, AbstractIdRecognition) {
  EXPECT_TRUE(is_abstract_id("VAR_1"));
  EXPECT_TRUE(is_abstract_id("FLOAT_12"));
  EXPECT_FALSE(is_abstract_id("VAR_0"));
  EXPECT_FALSE(is_abstract_id("VAR_"));
  EXPECT_FALSE(is_abstract_id("FOO_1"));
  EXPECT_EQ(parse_abstract_id("TYPE_3")->second, 3);
}

TEST(AbstractionTest, ConcretizeRejectsUnknownId) {
  AbstractionMap map;
  map.intern("x", IdCategory::kVar);
  const std::vector<std::string> tokens = {"VAR_1", "+", "VAR_2"};
  try {
    concretize(std::span<const std::string>(tokens), map);
    FAIL();
  } catch (const UnmappableTokenError& e) {
    EXPECT_EQ(e.id(), "VAR_2");
  }
}

TEST(AbstractionTest, LexFailureIsAbstractionError) {
  AbstractionMap map;
  EXPECT_THROW(abstract_source("void f() { s = \"open; }", IdiomSet(), map), AbstractionError);
}

TEST(AbstractionTest, RoundTripOnFixtureCorpus) {
  const auto methods = fixture_methods();
  ASSERT_GE(methods.size(), 100u);
  const auto idioms = compute_idioms(methods, 30);
  for (const auto& m : methods) {
    AbstractionMap map;
    const auto a = abstract_source(m.source_text, idioms, map);
    EXPECT_EQ(concretize(a.tokens, map), code_token_texts(m.source_text)) << m.signature_key;
  }
}

TEST(AbstractionTest, ComputeIdiomsRanksByCountThenText) {
  const MethodRecord corpus[] = {method("int f(int b) { return b + a + a + 1; }"),
                                 method("int g(int b) { return a + 1 + \"x y\" + \"x y\"; }")};
  const auto idioms = compute_idioms(corpus, 3);
  // a: 3, b: 3, 1: 2, "x y": excluded, f/g: 1
  EXPECT_EQ(idioms.entries(), (std::set<std::string>{"1", "a", "b"}));
  EXPECT_THROW(compute_idioms({}, 3), InvalidArgument);
  EXPECT_THROW(compute_idioms(corpus, 0), InvalidArgument);
}

// The same raw token maps to the same ID on both sides of a pair and
// different raws never share an ID.
void check_pair_consistency(const MethodRecord& before, const MethodRecord& after,
                            const IdiomSet& idioms) {
  const auto pair = abstract_pair(before, after, idioms);
  std::map<std::string, std::string> id_of, raw_of;
  auto check_side = [&](const AbstractedMethod& side, const MethodRecord& src) {
    const auto raw = code_token_texts(src.source_text);
    ASSERT_EQ(raw.size(), side.tokens.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto& tok = side.tokens[i];
      if (tok.kind != TokenKind::kAbstractId) {
        EXPECT_EQ(tok.text, raw[i]);
        continue;
      }
      auto [it, fresh] = id_of.emplace(raw[i] + "\x1f" + tok.text.substr(0, tok.text.find('_')),
                                       tok.text);
      EXPECT_EQ(it->second, tok.text) << raw[i];
      auto [jt, fresh2] = raw_of.emplace(tok.text, raw[i]);
      EXPECT_EQ(jt->second, raw[i]) << tok.text;
    }
    EXPECT_EQ(concretize(side.tokens, pair.map), raw);
  };
  check_side(pair.before, before);
  check_side(pair.after, after);
}

TEST(AbstractionTest, PairConsistencyProperty) {
  const auto methods = fixture_methods();
  const auto idioms = compute_idioms(methods, 20);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, methods.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    check_pair_consistency(methods[pick(rng)], methods[pick(rng)], idioms);
  }
}

TEST(AbstractionTest, BeforeIsNumberedFirst) {
  const auto pair = abstract_pair(method("int f(int a) { return a; }"),
                                  method("int f(int b, int a) { return a + b; }"), IdiomSet());
  EXPECT_EQ(join_tokens(pair.after.texts()),
            "int METHOD_1 ( int VAR_2 , int VAR_1 ) { return VAR_1 + VAR_2 ; }");
}

TEST(AbstractionTest, CamelCase) {
  EXPECT_TRUE(is_camel_case("getName"));
  EXPECT_TRUE(is_camel_case("max_value"));
  EXPECT_FALSE(is_camel_case("Name"));
  EXPECT_FALSE(is_camel_case("value"));
  EXPECT_FALSE(is_camel_case("_x"));
}

TEST(AbstractionTest, AbstractCommentUsesMap) {
  AbstractionMap map;
  map.intern("count", IdCategory::kVar);
  map.intern("reset", IdCategory::kMethod);
  // Surrounding punctuation is kept; normalization strips it later.
  EXPECT_EQ(abstract_comment("Should `count` be cleared in reset()? see otherHelper", map),
            (std::vector<std::string>{"Should", "`VAR_1`", "be", "cleared", "in", "METHOD_1()?",
                                      "see", "_CODE_"}));
  EXPECT_EQ(abstract_comment("counter is not count", map),
            (std::vector<std::string>{"counter", "is", "not", "VAR_1"}));
}

TEST(AbstractionTest, FieldEscaping) {
  for (const std::string s : {"plain", "a\tb", "line\nbreak", "back\\slash", ""}) {
    EXPECT_EQ(unescape_field(escape_field(s)), s);
    EXPECT_EQ(escape_field(s).find('\t'), std::string::npos);
  }
}

}  // namespace
}  // namespace crev
