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

#ifndef CREV_REVIEW_H_
#define CREV_REVIEW_H_

#include <string>
#include <string_view>
#include <vector>

namespace crev {

enum class HostKind { kGerrit, kGithub };

std::string_view to_string(HostKind kind);
HostKind host_kind_from_string(std::string_view s);

struct ProjectRef {
  HostKind host_kind = HostKind::kGerrit;
  std::string base_url;
  std::string project_id;

  bool operator==(const ProjectRef&) const = default;
};

struct FileVersion {
  std::string path;
  std::string content;
  std::string revision_id;

  bool operator==(const FileVersion&) const = default;
};

struct ReviewComment {
  std::string author_id;
  bool is_contributor = false;
  std::string path;
  int line_start = 1;
  int line_end = 1;
  std::string body;
  int round_index = 0;

  bool operator==(const ReviewComment&) const = default;
};

// One review iteration: files submitted for review, the comments they
// received, and the files resubmitted in response. Files deleted by the
// revision are absent from `revised`.
struct ReviewRound {
  ProjectRef project;
  std::string change_id;
  int round_index = 0;
  std::vector<FileVersion> submitted;
  std::vector<ReviewComment> comments;
  std::vector<FileVersion> revised;

  bool operator==(const ReviewRound&) const = default;

  const FileVersion* find_submitted(std::string_view path) const;
  const FileVersion* find_revised(std::string_view path) const;
};

bool is_valid_url(std::string_view url);

// Throws InvalidArgument describing the first violated invariant.
void validate(const ProjectRef& project);
void validate(const ReviewComment& comment);
void validate(const ReviewRound& round);

bool has_java_extension(std::string_view path);

}  // namespace crev

#endif  // CREV_REVIEW_H_
