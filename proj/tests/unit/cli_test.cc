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

// Runs the crev binary end to end and checks exit codes and outputs.

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>

#include "crev/io.h"

namespace {

namespace fs = std::filesystem;

const std::string kPipelineDir = std::string(CREV_FIXTURES_DIR) + "/pipeline";

struct Run {
  int code;
  std::string out;
};

Run crev(const std::string& args) {
  const std::string cmd = std::string(CREV_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  Run r{-1, ""};
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("crev_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(CliTest, FullPipeline) {
  const auto out = scratch("full");
  const std::string common = " --config " + kPipelineDir + "/config.json --out " + out.string();
  EXPECT_EQ(crev("mine" + common + " --fixture-dir " + kPipelineDir + "/gerrit").code, 0);
  for (const char* stage : {"compute-idioms", "filter-comments", "build-dataset",
                            "decode-baseline", "evaluate"}) {
    EXPECT_EQ(crev(std::string(stage) + common).code, 0) << stage;
  }
  const auto report = crev("report" + common);
  EXPECT_EQ(report.code, 0);
  EXPECT_NE(report.out.find("BLEU"), std::string::npos) << report.out;
  EXPECT_TRUE(fs::exists(out / "reports" / "metrics.txt"));
  EXPECT_FALSE(fs::exists(out / ".crev.lock"));
  fs::remove_all(out);
}

TEST(CliTest, ExitCodes) {
  const auto out = scratch("codes");
  EXPECT_EQ(crev("--help").code, 0);
  EXPECT_EQ(crev("").code, 2);
  EXPECT_EQ(crev("frobnicate").code, 2);
  EXPECT_EQ(crev("mine --no-such-flag").code, 2);

  fs::create_directories(out);
  crev::write_file_atomic(out / "bad.json", R"({"beam_sizes": [], "unknown": 1})");
  EXPECT_EQ(crev("report --config " + (out / "bad.json").string()).code, 2);
  crev::write_file_atomic(out / "broken.json", "{");
  EXPECT_EQ(crev("report --config " + (out / "broken.json").string()).code, 2);

  EXPECT_EQ(crev("build-dataset --out " + out.string()).code, 3);
  crev::write_file_atomic(out / "reports" / "metrics.json", "{\"model\": 1}");
  EXPECT_EQ(crev("report --out " + out.string()).code, 3);

  // A live lock held by this process.
  crev::write_file_atomic(out / ".crev.lock", std::to_string(::getpid()) + "\n");
  EXPECT_EQ(crev("report --out " + out.string()).code, 4);
  fs::remove_all(out);
}

TEST(CliTest, SeedFlagOverridesConfig) {
  const auto a = scratch("seed_a");
  const auto b = scratch("seed_b");
  for (const auto& [dir, seed] : {std::pair{a, "7"}, std::pair{b, "8"}}) {
    const std::string common = " --config " + kPipelineDir + "/config.json --out " +
                               dir.string() + " --seed " + seed;
    ASSERT_EQ(crev("mine" + common + " --fixture-dir " + kPipelineDir + "/gerrit").code, 0);
    for (const char* stage : {"compute-idioms", "filter-comments", "build-dataset"}) {
      ASSERT_EQ(crev(std::string(stage) + common).code, 0);
    }
  }
  EXPECT_EQ(crev::read_file(a / "rounds.jsonl"), crev::read_file(b / "rounds.jsonl"));
  EXPECT_NE(crev::read_file(a / "bundle" / "triplets" / "train.tsv"),
            crev::read_file(b / "bundle" / "triplets" / "train.tsv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace
