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

#include <unistd.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "crev/dataset.h"
#include "crev/decoder.h"
#include "crev/errors.h"
#include "crev/io.h"
#include "crev/pipeline.h"

namespace crev {
namespace {

namespace fs = std::filesystem;

const std::string kPipelineDir = std::string(CREV_FIXTURES_DIR) + "/pipeline";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("crev_pipeline_" + name);
  fs::remove_all(dir);
  return dir;
}

PipelineConfig fixture_config(const fs::path& out) {
  PipelineConfig c = load_config(kPipelineDir + "/config.json");
  c.out_dir = out;
  return c;
}

void run_all(const PipelineConfig& c) {
  for (auto name : kSubcommands) {
    run_subcommand(name, c, fs::path(kPipelineDir) / "gerrit");
  }
}

std::string slurp_tree(const fs::path& dir) {
  std::string out;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    out += fs::relative(f, dir).string() + "\n" + read_file(f) + "\n";
  }
  return out;
}

TEST(ConfigTest, DefaultsAndPaths) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.beam_sizes, (std::vector<int>{1, 3, 5, 10}));
  EXPECT_EQ(c.max_tokens, 100u);
  EXPECT_EQ(c.max_len, kDefaultMaxLen);
  const auto p = c.paths();
  EXPECT_EQ(p.archive, fs::path("crev-out") / "rounds.jsonl");
  EXPECT_EQ(p.predictions, fs::path("crev-out") / "predictions" / "copy_baseline.tsv");
  const auto o = parse_config(R"({"out_dir": "x", "paths": {"bundle": "/data/b"}})");
  EXPECT_EQ(o.paths().bundle, fs::path("/data/b"));
  EXPECT_EQ(o.paths().idioms, fs::path("x") / "idioms.txt");
}

TEST(ConfigTest, ReportsEveryProblem) {
  try {
    parse_config(R"({"bogus": 1, "split_ratios": [0.5, 0.1], "sources": [{"host_kind": "svn",
                    "base_url": "https://h", "project_id": "p"}]})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.problems().size(), 3u) << e.what();
  }
  PipelineConfig c;
  c.beam_sizes = {3, 1};
  c.max_len = 50;
  c.ratios = {0.7, 0.2, 0.2};
  c.relevance = "random-forest";
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.problems().size(), 4u) << e.what();
  }
  EXPECT_THROW(parse_config("[1, 2"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), Error);
}

TEST(OutputLockTest, ExclusiveAndStaleTakeover) {
  const auto dir = scratch("lock");
  {
    OutputLock lock(dir);
    EXPECT_TRUE(fs::exists(dir / ".crev.lock"));
    EXPECT_THROW(OutputLock second(dir), Error);
  }
  EXPECT_FALSE(fs::exists(dir / ".crev.lock"));
  write_file_atomic(dir / ".crev.lock", "2147483000\n");
  { OutputLock taken(dir); }
  fs::remove_all(dir);
}

TEST(StageTest, MissingInputsNameTheProducer) {
  const auto out = scratch("missing");
  const auto c = fixture_config(out);
  const std::pair<const char*, const char*> cases[] = {
      {"compute-idioms", "mine"},         {"filter-comments", "mine"},
      {"build-dataset", "mine"},          {"decode-baseline", "build-dataset"},
      {"evaluate", "build-dataset"},      {"report", "evaluate"},
  };
  for (const auto& [stage, producer] : cases) {
    try {
      run_subcommand(stage, c);
      ADD_FAILURE() << stage;
    } catch (const MissingArtifactError& e) {
      EXPECT_EQ(e.producer(), producer) << stage;
    }
  }
  EXPECT_THROW(run_subcommand("train", c), InvalidArgument);
  fs::remove_all(out);
}

TEST(StageTest, FixturePipelineMatchesRecordedAttrition) {
  const auto out = scratch("full");
  const auto c = fixture_config(out);
  run_all(c);
  const auto expected = nlohmann::json::parse(read_file(kPipelineDir + "/expected.json"));
  const auto bundle = read_bundle(c.paths().bundle);
  EXPECT_EQ(bundle.stats.candidates, expected.at("candidates").get<std::size_t>());
  EXPECT_EQ(bundle.stats.output, expected.at("output").get<std::size_t>());
  for (Filter f : kAllFilters) {
    const auto it = bundle.stats.removed.find(f);
    EXPECT_EQ(it == bundle.stats.removed.end() ? 0 : it->second,
              expected.at("removed").value(std::string(to_string(f)), 0u))
        << to_string(f);
  }
  for (Split s : kAllSplits) {
    EXPECT_EQ(bundle.triplets_of(s).size(),
              expected.at("splits").at(std::string(to_string(s))).get<std::size_t>());
  }

  const auto report = parse_report_json(read_file(c.paths().metrics));
  ASSERT_EQ(report.rows.size(), 4u);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.instance_count, bundle.triplets_of(Split::kTest).size());
    EXPECT_EQ(row.perfect_count, 0u);
    EXPECT_GT(row.bleu.mean, 0.0);
  }
  EXPECT_TRUE(fs::exists(c.paths().report));
  fs::remove_all(out);
}

TEST(StageTest, RerunsAreByteIdenticalAcrossThreadCounts) {
  const auto a = scratch("idem_a");
  const auto b = scratch("idem_b");
  auto ca = fixture_config(a);
  ca.threads = 1;
  auto cb = fixture_config(b);
  cb.threads = 6;
  run_all(ca);
  run_all(cb);
  const std::string first = slurp_tree(a);
  EXPECT_EQ(first, slurp_tree(b));
  run_all(ca);
  EXPECT_EQ(first, slurp_tree(a));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(StageTest, EvaluateRejectsPartialPredictions) {
  const auto out = scratch("partial");
  const auto c = fixture_config(out);
  for (auto name : {"mine", "compute-idioms", "filter-comments", "build-dataset"}) {
    run_subcommand(name, c, fs::path(kPipelineDir) / "gerrit");
  }
  fs::create_directories(c.paths().predictions.parent_path());
  write_file_atomic(c.paths().predictions, "# beam_size=1\n0\t1\tx\n");
  EXPECT_THROW(run_subcommand("evaluate", c), FormatError);
  write_file_atomic(c.paths().predictions, "# beam_size=1\n0\t2\tx\n");
  EXPECT_THROW(run_subcommand("evaluate", c), FormatError);
  fs::remove_all(out);
}

TEST(StageTest, ClassifierRelevanceUsesLabeledComments) {
  const auto out = scratch("classifier");
  auto c = fixture_config(out);
  c.relevance = "bayesian";
  c.labeled_comments = std::string(CREV_FIXTURES_DIR) + "/labeled_comments.tsv";
  validate(c);
  run_subcommand("mine", c, fs::path(kPipelineDir) / "gerrit");
  run_subcommand("filter-comments", c);
  const auto verdicts = parse_verdicts(read_file(c.paths().verdicts));
  ASSERT_FALSE(verdicts.empty());
  for (const auto& v : verdicts) {
    const auto h = heuristic_relevance(v.body);
    if (h.fired_rule) {
      EXPECT_EQ(v.rule, *h.fired_rule);
    } else {
      EXPECT_EQ(v.rule, "bayesian");
    }
  }
  fs::remove_all(out);
}

TEST(VerdictFormatTest, RoundTrip) {
  const std::vector<CommentVerdict> v = {{Relevance::kIrrelevant, "one-word", "nice"},
                                         {Relevance::kRelevant, "default", "tab\there\nnl"}};
  const auto back = parse_verdicts(format_verdicts(v));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].body, "tab\there\nnl");
  EXPECT_EQ(back[0].rule, "one-word");
  EXPECT_THROW(parse_verdicts("relevant\tonly-two\n"), FormatError);
  EXPECT_THROW(parse_labeled_comments("maybe\tsome text\n"), Error);
}

}  // namespace
}  // namespace crev
