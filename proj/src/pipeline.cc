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

#include "crev/pipeline.h"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <set>

#include <nlohmann/json.hpp>

#include "crev/archive.h"
#include "crev/io.h"
#include "crev/metrics.h"
#include "crev/miner.h"
#include "crev/parallel.h"
#include "crev/relevance.h"

namespace crev {
namespace fs = std::filesystem;
namespace {

using nlohmann::json;

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration:";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}

class ConfigReader {
 public:
  explicit ConfigReader(std::vector<std::string>& problems) : problems_(problems) {}

  template <typename T>
  void read(const json& j, const std::string& key, T& out) {
    if (!j.contains(key)) return;
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception&) {
      problems_.push_back(key + ": expected " + expected<T>() + ", got " + j.at(key).dump());
    }
  }

  void read_path(const json& j, const std::string& key, std::optional<fs::path>& out,
                 const std::string& label) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string() || j.at(key).get<std::string>().empty()) {
      problems_.push_back(label + ": expected a non-empty path string");
      return;
    }
    out = j.at(key).get<std::string>();
  }

 private:
  template <typename T>
  static std::string expected() {
    if constexpr (std::is_same_v<T, std::string>) return "a string";
    if constexpr (std::is_same_v<T, std::vector<int>>) return "an array of integers";
    if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, std::size_t>) {
      return "a non-negative integer";
    }
    return "a value of another type";
  }

  std::vector<std::string>& problems_;
};

fs::path require(const fs::path& path, std::string_view producer) {
  if (!fs::exists(path)) throw MissingArtifactError(path, producer);
  return path;
}

std::vector<ReviewRound> load_archive(const PipelineConfig& config) {
  return load_rounds(require(config.paths().archive, "mine"));
}

bool uses_classifier(const PipelineConfig& c) { return c.relevance != "heuristic"; }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

ArtifactPaths PipelineConfig::paths() const {
  ArtifactPaths p;
  p.archive = archive.value_or(out_dir / "rounds.jsonl");
  p.idioms = idioms.value_or(out_dir / "idioms.txt");
  p.verdicts = verdicts.value_or(out_dir / "comment_verdicts.tsv");
  p.bundle = bundle.value_or(out_dir / "bundle");
  p.predictions = predictions.value_or(out_dir / "predictions" / "copy_baseline.tsv");
  p.metrics = metrics.value_or(out_dir / "reports" / "metrics.json");
  p.report = report.value_or(out_dir / "reports" / "metrics.txt");
  return p;
}

PipelineConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  if (!j.is_object()) throw ConfigError({"top level must be an object"});

  static const std::set<std::string> kKeys = {
      "sources", "limit", "idiom_top_n", "max_tokens", "split_ratios", "beam_sizes", "seed",
      "threads", "max_len", "relevance", "labeled_comments", "out_dir", "paths"};
  static const std::set<std::string> kPathKeys = {"archive", "idioms", "verdicts", "bundle",
                                                  "predictions", "metrics", "report"};
  std::vector<std::string> problems;
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) problems.push_back("unknown key '" + key + "'");
  }

  PipelineConfig c;
  ConfigReader r(problems);
  r.read(j, "limit", c.limit);
  r.read(j, "idiom_top_n", c.idiom_top_n);
  r.read(j, "max_tokens", c.max_tokens);
  r.read(j, "beam_sizes", c.beam_sizes);
  r.read(j, "seed", c.seed);
  r.read(j, "threads", c.threads);
  r.read(j, "max_len", c.max_len);
  r.read(j, "relevance", c.relevance);
  r.read_path(j, "labeled_comments", c.labeled_comments, "labeled_comments");
  std::optional<fs::path> out_dir;
  r.read_path(j, "out_dir", out_dir, "out_dir");
  if (out_dir) c.out_dir = *out_dir;

  if (j.contains("split_ratios")) {
    const json& s = j["split_ratios"];
    if (!s.is_array() || s.size() != 3 ||
        !std::all_of(s.begin(), s.end(), [](const json& v) { return v.is_number(); })) {
      problems.push_back("split_ratios: expected [train, eval, test] numbers");
    } else {
      c.ratios = SplitRatios{s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
    }
  }

  if (j.contains("sources")) {
    if (!j["sources"].is_array()) {
      problems.push_back("sources: expected an array");
    } else {
      for (std::size_t i = 0; i < j["sources"].size(); ++i) {
        const json& s = j["sources"][i];
        const std::string where = "sources[" + std::to_string(i) + "]";
        if (!s.is_object()) {
          problems.push_back(where + ": expected an object");
          continue;
        }
        ProjectRef p;
        bool ok = true;
        for (const char* key : {"host_kind", "base_url", "project_id"}) {
          if (!s.contains(key) || !s[key].is_string()) {
            problems.push_back(where + "." + key + ": expected a string");
            ok = false;
          }
        }
        for (const auto& [key, value] : s.items()) {
          if (key != "host_kind" && key != "base_url" && key != "project_id") {
            problems.push_back(where + ": unknown key '" + key + "'");
          }
        }
        if (!ok) continue;
        try {
          p.host_kind = host_kind_from_string(s["host_kind"].get<std::string>());
        } catch (const InvalidArgument& e) {
          problems.push_back(where + ".host_kind: " + e.what());
          continue;
        }
        p.base_url = s["base_url"].get<std::string>();
        p.project_id = s["project_id"].get<std::string>();
        c.sources.push_back(std::move(p));
      }
    }
  }

  if (j.contains("paths")) {
    const json& p = j["paths"];
    if (!p.is_object()) {
      problems.push_back("paths: expected an object");
    } else {
      for (const auto& [key, value] : p.items()) {
        if (!kPathKeys.count(key)) problems.push_back("paths: unknown key '" + key + "'");
      }
      r.read_path(p, "archive", c.archive, "paths.archive");
      r.read_path(p, "idioms", c.idioms, "paths.idioms");
      r.read_path(p, "verdicts", c.verdicts, "paths.verdicts");
      r.read_path(p, "bundle", c.bundle, "paths.bundle");
      r.read_path(p, "predictions", c.predictions, "paths.predictions");
      r.read_path(p, "metrics", c.metrics, "paths.metrics");
      r.read_path(p, "report", c.report, "paths.report");
    }
  }

  try {
    validate(c);
  } catch (const ConfigError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError({"config file not found: " + path.string()});
  return parse_config(read_file(path));
}

void validate(const PipelineConfig& c) {
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < c.sources.size(); ++i) {
    try {
      validate(c.sources[i]);
    } catch (const InvalidArgument& e) {
      problems.push_back("sources[" + std::to_string(i) + "]: " + e.what());
    }
  }
  const SplitRatios& r = c.ratios;
  if (r.train < 0 || r.eval < 0 || r.test < 0) problems.push_back("split_ratios: negative ratio");
  if (std::abs(r.train + r.eval + r.test - 1.0) > 1e-9) {
    problems.push_back("split_ratios: must sum to 1");
  }
  if (c.beam_sizes.empty()) problems.push_back("beam_sizes: must not be empty");
  for (std::size_t i = 0; i < c.beam_sizes.size(); ++i) {
    if (c.beam_sizes[i] < 1) {
      problems.push_back("beam_sizes: " + std::to_string(c.beam_sizes[i]) + " is not positive");
    }
    if (i > 0 && c.beam_sizes[i] <= c.beam_sizes[i - 1]) {
      problems.push_back("beam_sizes: must be strictly ascending");
    }
  }
  if (c.max_tokens == 0) problems.push_back("max_tokens: must be positive");
  if (c.max_len <= c.max_tokens) {
    problems.push_back("max_len: must exceed max_tokens to leave room for the end token");
  }
  if (c.relevance != "heuristic") {
    try {
      model_kind_from_string(c.relevance);
    } catch (const InvalidArgument&) {
      problems.push_back("relevance: unknown model '" + c.relevance + "'");
    }
    if (!c.labeled_comments) {
      problems.push_back("labeled_comments: required when relevance is a classifier");
    }
  }
  if (c.labeled_comments && !fs::exists(*c.labeled_comments)) {
    problems.push_back("labeled_comments: file not found: " + c.labeled_comments->string());
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

OutputLock::OutputLock(const fs::path& dir) : path_(dir / ".crev.lock") {
  fs::create_directories(dir);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      const std::string pid = std::to_string(::getpid()) + "\n";
      [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
      ::close(fd);
      return;
    }
    if (errno != EEXIST) {
      throw Error("cannot create lock " + path_.string() + ": " + std::strerror(errno));
    }
    long owner = 0;
    std::ifstream(path_) >> owner;
    if (owner > 0 && (::kill(static_cast<pid_t>(owner), 0) == 0 || errno != ESRCH)) {
      throw Error("output directory " + dir.string() + " is locked by process " +
                  std::to_string(owner));
    }
    fs::remove(path_);
  }
  throw Error("cannot acquire lock " + path_.string());
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

std::string format_verdicts(std::span<const CommentVerdict> verdicts) {
  std::string out;
  for (const auto& v : verdicts) {
    out += std::string(to_string(v.relevance)) + "\t" + v.rule + "\t" + escape_field(v.body) + "\n";
  }
  return out;
}

std::vector<CommentVerdict> parse_verdicts(std::string_view text) {
  std::vector<CommentVerdict> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_tabs(lines[i]);
    if (f.size() != 3) {
      throw FormatError("verdicts line " + std::to_string(i + 1) + ": expected 3 fields");
    }
    out.push_back(CommentVerdict{relevance_from_string(f[0]), f[1], unescape_field(f[2])});
  }
  return out;
}

std::vector<FeatureVector> parse_labeled_comments(std::string_view text) {
  std::vector<FeatureVector> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos) {
      throw FormatError("labeled comments line " + std::to_string(i + 1) + ": expected label<TAB>body");
    }
    Relevance label;
    try {
      label = relevance_from_string(lines[i].substr(0, tab));
    } catch (const Error& e) {
      throw FormatError("labeled comments line " + std::to_string(i + 1) + ": " + e.what());
    }
    FeatureVector v = extract_features(unescape_field(lines[i].substr(tab + 1)));
    v.label = label;
    out.push_back(std::move(v));
  }
  return out;
}

StageResult run_mine(const PipelineConfig& config, const std::optional<fs::path>& fixture_dir) {
  if (config.sources.empty()) throw ConfigError({"sources: mine needs at least one source"});
  std::unique_ptr<Transport> transport;
  if (fixture_dir) {
    transport = std::make_unique<FixtureTransport>(*fixture_dir);
  } else {
    transport = std::make_unique<HttpTransport>();
  }
  const MinerOptions options = MinerOptions::from_environment();
  std::vector<std::vector<ReviewRound>> per_source(config.sources.size());
  parallel_for(config.sources.size(), config.threads, [&](std::size_t i) {
    per_source[i] = fetch_rounds(*transport, config.sources[i], config.limit, options);
  });
  std::vector<ReviewRound> rounds;
  for (auto& batch : per_source) {
    for (auto& r : batch) rounds.push_back(std::move(r));
  }
  const fs::path out = config.paths().archive;
  persist_rounds(rounds, out);
  std::size_t comments = 0;
  for (const auto& r : rounds) comments += r.comments.size();
  return {{out}, "mined " + std::to_string(rounds.size()) + " rounds with " +
                     std::to_string(comments) + " comments from " +
                     std::to_string(config.sources.size()) + " sources"};
}

StageResult run_compute_idioms(const PipelineConfig& config) {
  const auto rounds = load_archive(config);
  std::set<std::string> seen;
  std::vector<MethodRecord> corpus;
  std::size_t skipped = 0;
  for (const auto& r : rounds) {
    for (const auto* files : {&r.submitted, &r.revised}) {
      for (const auto& f : *files) {
        if (!has_java_extension(f.path)) continue;
        if (!seen.insert(f.path + '\0' + f.revision_id + '\0' + fnv1a64_hex(f.content)).second) {
          continue;
        }
        try {
          for (auto& m : extract_methods(f)) corpus.push_back(std::move(m));
        } catch (const ExtractionError&) {
          ++skipped;
        }
      }
    }
  }
  const IdiomSet idioms = compute_idioms(corpus, config.idiom_top_n);
  const fs::path out = config.paths().idioms;
  write_file_atomic(out, idioms.serialize());
  return {{out}, std::to_string(idioms.size()) + " idioms from " + std::to_string(corpus.size()) +
                     " methods (" + std::to_string(skipped) + " unparseable files skipped)"};
}

StageResult run_filter_comments(const PipelineConfig& config) {
  const auto rounds = load_archive(config);
  std::optional<RelevanceModel> model;
  if (uses_classifier(config)) {
    const auto labeled = parse_labeled_comments(read_file(*config.labeled_comments));
    TrainingConfig tc;
    tc.seed = config.seed;
    tc.oversample = true;
    model = train_relevance_model(labeled, model_kind_from_string(config.relevance), tc);
  }
  std::set<std::string> bodies;
  for (const auto& r : rounds) {
    for (const auto& c : r.comments) bodies.insert(c.body);
  }
  std::vector<CommentVerdict> verdicts;
  std::size_t irrelevant = 0;
  for (const auto& body : bodies) {
    CommentVerdict v{Relevance::kRelevant, "default", body};
    const HeuristicVerdict h = heuristic_relevance(body);
    if (h.fired_rule) {
      v.relevance = h.relevance;
      v.rule = *h.fired_rule;
    } else if (model) {
      v.relevance = model->classify(std::string_view(body));
      v.rule = std::string(to_string(model->kind()));
    }
    if (v.relevance == Relevance::kIrrelevant) ++irrelevant;
    verdicts.push_back(std::move(v));
  }
  const fs::path out = config.paths().verdicts;
  write_file_atomic(out, format_verdicts(verdicts));
  return {{out}, std::to_string(verdicts.size()) + " distinct comments, " +
                     std::to_string(irrelevant) + " irrelevant"};
}

StageResult run_build_dataset(const PipelineConfig& config) {
  const ArtifactPaths paths = config.paths();
  const auto rounds = load_archive(config);
  const IdiomSet idioms = IdiomSet::parse(read_file(require(paths.idioms, "compute-idioms")));
  auto verdicts = std::make_shared<std::map<std::string, HeuristicVerdict>>();
  for (auto& v : parse_verdicts(read_file(require(paths.verdicts, "filter-comments")))) {
    (*verdicts)[v.body] = HeuristicVerdict{v.relevance, v.rule};
  }

  BuildOptions options;
  options.idioms = idioms;
  options.max_tokens = config.max_tokens;
  options.threads = config.threads;
  options.relevance = [verdicts](std::string_view body) {
    auto it = verdicts->find(std::string(body));
    return it != verdicts->end() ? it->second : heuristic_relevance(body);
  };
  BuildResult built = build_triplets(rounds, options);
  DatasetBundle bundle =
      split_and_dedup(std::move(built.triplets), config.ratios, config.seed, built.stats, idioms);
  bundle.max_tokens = config.max_tokens;
  write_bundle(bundle, paths.bundle);
  std::string skips;
  for (const auto& s : built.skips) skips += escape_field(s.path) + "\t" + escape_field(s.reason) + "\n";
  write_file_atomic(paths.bundle / "skipped.tsv", skips);
  return {{paths.bundle},
          std::to_string(bundle.size()) + " instances (train " +
              std::to_string(bundle.triplets_of(Split::kTrain).size()) + ", eval " +
              std::to_string(bundle.triplets_of(Split::kEval).size()) + ", test " +
              std::to_string(bundle.triplets_of(Split::kTest).size()) + ") from " +
              std::to_string(bundle.stats.candidates) + " candidates"};
}

StageResult run_decode_baseline(const PipelineConfig& config) {
  const ArtifactPaths paths = config.paths();
  require(paths.bundle / "manifest.json", "build-dataset");
  const DatasetBundle bundle = read_bundle(paths.bundle);
  std::vector<EncoderInputs> inputs;
  for (const auto& p : bundle.pairs_of(Split::kTest)) inputs.push_back(EncoderInputs{p.source, {}});
  const auto sets = decode_all(copy_baseline, inputs, config.beam_sizes, config.max_len, config.threads);
  write_file_atomic(paths.predictions, format_predictions(sets));
  return {{paths.predictions}, "decoded " + std::to_string(inputs.size()) +
                                   " test instances at " + std::to_string(sets.size()) +
                                   " beam sizes"};
}

StageResult run_evaluate(const PipelineConfig& config) {
  const ArtifactPaths paths = config.paths();
  require(paths.bundle / "manifest.json", "build-dataset");
  const DatasetBundle bundle = read_bundle(paths.bundle);
  std::vector<TokenSeq> references;
  for (const auto& p : bundle.pairs_of(Split::kTest)) references.push_back(p.target);
  auto sets = load_external_predictions(require(paths.predictions, "decode-baseline"));
  if (sets.empty()) throw FormatError("no predictions in " + paths.predictions.string());
  std::sort(sets.begin(), sets.end(),
            [](const PredictionSet& a, const PredictionSet& b) { return a.beam_size < b.beam_size; });

  MetricsReport report;
  report.model = paths.predictions.stem().string();
  for (const auto& set : sets) {
    if (set.predictions.size() != references.size()) {
      throw FormatError("beam " + std::to_string(set.beam_size) + ": predictions cover " +
                        std::to_string(set.predictions.size()) + " of " +
                        std::to_string(references.size()) + " test instances");
    }
    const auto instances = attach_references(set, references);
    report.rows.push_back(evaluate(instances, config.threads));
  }
  write_file_atomic(paths.metrics, render_json(report));
  return {{paths.metrics}, render_table(report)};
}

StageResult run_report(const PipelineConfig& config) {
  const ArtifactPaths paths = config.paths();
  const MetricsReport report = parse_report_json(read_file(require(paths.metrics, "evaluate")));
  const std::string table = render_table(report);
  write_file_atomic(paths.report, table);
  return {{paths.report}, table};
}

StageResult run_subcommand(std::string_view name, const PipelineConfig& config,
                           const std::optional<fs::path>& fixture_dir) {
  if (name == "mine") return run_mine(config, fixture_dir);
  if (name == "compute-idioms") return run_compute_idioms(config);
  if (name == "filter-comments") return run_filter_comments(config);
  if (name == "build-dataset") return run_build_dataset(config);
  if (name == "decode-baseline") return run_decode_baseline(config);
  if (name == "evaluate") return run_evaluate(config);
  if (name == "report") return run_report(config);
  throw InvalidArgument("unknown subcommand '" + std::string(name) + "'");
}

}  // namespace crev
