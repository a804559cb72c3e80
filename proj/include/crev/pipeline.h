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

#ifndef CREV_PIPELINE_H_
#define CREV_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crev/dataset.h"
#include "crev/decoder.h"
#include "crev/errors.h"
#include "crev/features.h"
#include "crev/review.h"

namespace crev {

// Every problem found in a configuration, not only the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// A stage input that does not exist yet.
class MissingArtifactError : public Error {
 public:
  MissingArtifactError(const std::filesystem::path& path, std::string_view producer)
      : Error("missing input " + path.string() + "; run `crev " + std::string(producer) +
              "` first"),
        producer_(producer) {}
  const std::string& producer() const { return producer_; }

 private:
  std::string producer_;
};

struct ArtifactPaths {
  std::filesystem::path archive;      // mine
  std::filesystem::path idioms;       // compute-idioms
  std::filesystem::path verdicts;     // filter-comments
  std::filesystem::path bundle;       // build-dataset
  std::filesystem::path predictions;  // decode-baseline, or external
  std::filesystem::path metrics;      // evaluate
  std::filesystem::path report;       // report
};

struct PipelineConfig {
  std::vector<ProjectRef> sources;
  std::size_t limit = 100;  // changes per source
  std::size_t idiom_top_n = 300;
  std::size_t max_tokens = 100;
  SplitRatios ratios;
  std::vector<int> beam_sizes{1, 3, 5, 10};
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::size_t max_len = kDefaultMaxLen;
  // "heuristic", or a classifier kind used where no heuristic rule fires.
  std::string relevance = "heuristic";
  std::optional<std::filesystem::path> labeled_comments;  // label<TAB>body
  std::filesystem::path out_dir = "crev-out";
  // Explicit overrides of the default locations under out_dir.
  std::optional<std::filesystem::path> archive, idioms, verdicts, bundle, predictions, metrics,
      report;

  ArtifactPaths paths() const;
};

// Parses a JSON configuration; unknown keys and invalid values are all
// reported in one ConfigError.
PipelineConfig parse_config(std::string_view json_text);
PipelineConfig load_config(const std::filesystem::path& path);
// Throws ConfigError listing every violated invariant.
void validate(const PipelineConfig& config);

inline constexpr std::string_view kSubcommands[] = {
    "mine", "compute-idioms", "filter-comments", "build-dataset", "decode-baseline", "evaluate",
    "report"};

struct StageResult {
  std::vector<std::filesystem::path> outputs;
  std::string summary;
};

// Holds <dir>/.crev.lock for the lifetime of the object. A lock left by a
// process that no longer exists is taken over.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

StageResult run_mine(const PipelineConfig& config,
                     const std::optional<std::filesystem::path>& fixture_dir);
StageResult run_compute_idioms(const PipelineConfig& config);
StageResult run_filter_comments(const PipelineConfig& config);
StageResult run_build_dataset(const PipelineConfig& config);
StageResult run_decode_baseline(const PipelineConfig& config);
StageResult run_evaluate(const PipelineConfig& config);
StageResult run_report(const PipelineConfig& config);

StageResult run_subcommand(std::string_view name, const PipelineConfig& config,
                           const std::optional<std::filesystem::path>& fixture_dir = {});

// Relevance verdict file: "relevance<TAB>rule<TAB>escaped body" per line.
struct CommentVerdict {
  Relevance relevance = Relevance::kRelevant;
  std::string rule;  // heuristic rule id, classifier kind, or "default"
  std::string body;
};
std::string format_verdicts(std::span<const CommentVerdict> verdicts);
std::vector<CommentVerdict> parse_verdicts(std::string_view text);

// Labeled comments: "relevant|irrelevant<TAB>body" per line.
std::vector<FeatureVector> parse_labeled_comments(std::string_view text);

}  // namespace crev

#endif  // CREV_PIPELINE_H_
