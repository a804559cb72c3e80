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

#ifndef CREV_ARCHIVE_H_
#define CREV_ARCHIVE_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crev/review.h"

namespace crev {

inline constexpr int kArchiveSchemaVersion = 1;

enum class LoadMode { kStrict, kLenient };

struct LoadIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

std::string round_to_json_line(const ReviewRound& round);
// Throws ParseError naming the offending field, or SchemaVersionError.
ReviewRound round_from_json_line(std::string_view line);

std::string serialize_rounds(std::span<const ReviewRound> rounds);
// Blank lines are ignored. In lenient mode malformed lines are skipped and
// reported through `issues`; a schema version mismatch always throws.
std::vector<ReviewRound> parse_rounds(std::string_view text, LoadMode mode = LoadMode::kStrict,
                                      std::vector<LoadIssue>* issues = nullptr);

std::size_t persist_rounds(std::span<const ReviewRound> rounds, const std::filesystem::path& path);
std::vector<ReviewRound> load_rounds(const std::filesystem::path& path,
                                     LoadMode mode = LoadMode::kStrict,
                                     std::vector<LoadIssue>* issues = nullptr);

}  // namespace crev

#endif  // CREV_ARCHIVE_H_
