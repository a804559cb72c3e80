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

#include "crev/review.h"

#include <algorithm>
#include <cctype>
#include <regex>

#include "crev/errors.h"

namespace crev {

std::string_view to_string(HostKind kind) {
  return kind == HostKind::kGerrit ? "gerrit" : "github";
}

HostKind host_kind_from_string(std::string_view s) {
  if (s == "gerrit") return HostKind::kGerrit;
  if (s == "github") return HostKind::kGithub;
  throw InvalidArgument("unknown host_kind '" + std::string(s) + "'");
}

const FileVersion* ReviewRound::find_submitted(std::string_view path) const {
  auto it = std::find_if(submitted.begin(), submitted.end(),
                         [&](const FileVersion& f) { return f.path == path; });
  return it == submitted.end() ? nullptr : &*it;
}

const FileVersion* ReviewRound::find_revised(std::string_view path) const {
  auto it = std::find_if(revised.begin(), revised.end(),
                         [&](const FileVersion& f) { return f.path == path; });
  return it == revised.end() ? nullptr : &*it;
}

bool is_valid_url(std::string_view url) {
  static const std::regex kUrl(R"(^https?://[A-Za-z0-9.\-]+(:[0-9]+)?(/[^\s]*)?$)",
                               std::regex::icase);
  return std::regex_match(url.begin(), url.end(), kUrl);
}

void validate(const ProjectRef& project) {
  if (!is_valid_url(project.base_url)) {
    throw InvalidArgument("invalid base_url '" + project.base_url + "'");
  }
  if (project.project_id.empty()) throw InvalidArgument("empty project_id");
}

void validate(const ReviewComment& comment) {
  if (comment.line_start < 1) throw InvalidArgument("line_start must be positive");
  if (comment.line_start > comment.line_end) {
    throw InvalidArgument("line_start > line_end");
  }
  if (std::all_of(comment.body.begin(), comment.body.end(),
                  [](unsigned char c) { return std::isspace(c); })) {
    throw InvalidArgument("empty comment body");
  }
  if (comment.round_index < 0) throw InvalidArgument("negative round_index");
}

void validate(const ReviewRound& round) {
  validate(round.project);
  if (round.round_index < 0) throw InvalidArgument("negative round_index");
  for (const auto& f : round.submitted) {
    if (f.path.empty()) throw InvalidArgument("file with empty path");
  }
  for (const auto& f : round.revised) {
    if (f.path.empty()) throw InvalidArgument("file with empty path");
  }
  for (const auto& c : round.comments) {
    validate(c);
    if (round.find_submitted(c.path) == nullptr) {
      throw InvalidArgument("comment references path not in submitted set: " +
                            c.path);
    }
  }
}

bool has_java_extension(std::string_view path) {
  return path.size() > 5 && path.substr(path.size() - 5) == ".java";
}

}  // namespace crev
