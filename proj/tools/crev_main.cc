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

// crev: review-mining and dataset pipeline driver.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "crev/errors.h"
#include "crev/pipeline.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitRuntime = 4;

struct Flags {
  std::string config;
  std::string fixture_dir;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run(const std::string& name, const Flags& flags) {
  crev::PipelineConfig config;
  if (!flags.config.empty()) config = crev::load_config(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.out_dir = flags.out;
  crev::validate(config);

  std::optional<std::filesystem::path> fixtures;
  if (!flags.fixture_dir.empty()) fixtures = flags.fixture_dir;

  crev::OutputLock lock(config.out_dir);
  const crev::StageResult result = crev::run_subcommand(name, config, fixtures);
  std::cout << result.summary;
  if (!result.summary.empty() && result.summary.back() != '\n') std::cout << '\n';
  for (const auto& p : result.outputs) std::cerr << "wrote " << p.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine code reviews, build abstracted datasets and evaluate predictions."};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;

  const std::pair<const char*, const char*> commands[] = {
      {"mine", "fetch review rounds into the round archive"},
      {"compute-idioms", "collect the most frequent identifiers and literals"},
      {"filter-comments", "classify review comments as relevant or irrelevant"},
      {"build-dataset", "build the split triplet and pair datasets"},
      {"decode-baseline", "decode the test split with the copy baseline"},
      {"evaluate", "score predictions against the test split"},
      {"report", "render the metrics table"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--fixture-dir", flags.fixture_dir, "replay HTTP responses from this directory")
        ->check(CLI::ExistingDirectory);
    sub->add_option("--seed", flags.seed, "seed for all randomness");
    sub->add_option("--out", flags.out, "output directory");
    sub->callback([&chosen, n = std::string(name)] { chosen = n; });
  }

  if (argc > 1 && argv[1][0] != '-') {
    const std::string_view first = argv[1];
    if (std::find(std::begin(crev::kSubcommands), std::end(crev::kSubcommands), first) ==
        std::end(crev::kSubcommands)) {
      std::cerr << "error: unknown subcommand '" << first << "'\n\n" << app.help();
      return kExitConfig;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    return run(chosen, flags);
  } catch (const crev::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const crev::MissingArtifactError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const crev::SchemaVersionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const crev::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const crev::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
