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

#include "crev/archive.h"

#include <nlohmann/json.hpp>

#include "crev/errors.h"
#include "crev/io.h"

namespace crev {
namespace {

using nlohmann::json;

template <typename T>
T get(const json& j, const std::string& field, const std::string& where) {
  const std::string name = where.empty() ? field : where + "." + field;
  if (!j.is_object() || !j.contains(field)) throw ParseError(name, "missing");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(name, e.what());
  }
}

const json& array_field(const json& j, const std::string& field, const std::string& where) {
  const std::string name = where.empty() ? field : where + "." + field;
  if (!j.contains(field)) throw ParseError(name, "missing");
  if (!j.at(field).is_array()) throw ParseError(name, "not an array");
  return j.at(field);
}

json files_to_json(const std::vector<FileVersion>& files) {
  json out = json::array();
  for (const auto& f : files) {
    out.push_back({{"path", f.path}, {"content", f.content}, {"revision_id", f.revision_id}});
  }
  return out;
}

std::vector<FileVersion> files_from_json(const json& j, const std::string& where) {
  std::vector<FileVersion> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    out.push_back(FileVersion{get<std::string>(j[i], "path", w), get<std::string>(j[i], "content", w),
                              get<std::string>(j[i], "revision_id", w)});
  }
  return out;
}

}  // namespace

std::string round_to_json_line(const ReviewRound& r) {
  json comments = json::array();
  for (const auto& c : r.comments) {
    comments.push_back({{"author_id", c.author_id},
                        {"is_contributor", c.is_contributor},
                        {"path", c.path},
                        {"line_start", c.line_start},
                        {"line_end", c.line_end},
                        {"body", c.body},
                        {"round_index", c.round_index}});
  }
  json j = {{"schema_version", kArchiveSchemaVersion},
            {"project",
             {{"host_kind", to_string(r.project.host_kind)},
              {"base_url", r.project.base_url},
              {"project_id", r.project.project_id}}},
            {"change_id", r.change_id},
            {"round_index", r.round_index},
            {"submitted", files_to_json(r.submitted)},
            {"comments", comments},
            {"revised", files_to_json(r.revised)}};
  return j.dump();
}

ReviewRound round_from_json_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError("<record>", e.what());
  }
  if (!j.is_object()) throw ParseError("<record>", "not an object");
  const int version = get<int>(j, "schema_version", "");
  if (version != kArchiveSchemaVersion) throw SchemaVersionError(version, kArchiveSchemaVersion);

  ReviewRound r;
  if (!j.contains("project") || !j["project"].is_object()) throw ParseError("project", "missing");
  const json& p = j["project"];
  try {
    r.project.host_kind = host_kind_from_string(get<std::string>(p, "host_kind", "project"));
  } catch (const InvalidArgument& e) {
    throw ParseError("project.host_kind", e.what());
  }
  r.project.base_url = get<std::string>(p, "base_url", "project");
  r.project.project_id = get<std::string>(p, "project_id", "project");
  r.change_id = get<std::string>(j, "change_id", "");
  r.round_index = get<int>(j, "round_index", "");
  r.submitted = files_from_json(array_field(j, "submitted", ""), "submitted");
  r.revised = files_from_json(array_field(j, "revised", ""), "revised");
  const json& comments = array_field(j, "comments", "");
  for (std::size_t i = 0; i < comments.size(); ++i) {
    const std::string w = "comments[" + std::to_string(i) + "]";
    const json& c = comments[i];
    r.comments.push_back(ReviewComment{get<std::string>(c, "author_id", w),
                                       get<bool>(c, "is_contributor", w),
                                       get<std::string>(c, "path", w),
                                       get<int>(c, "line_start", w),
                                       get<int>(c, "line_end", w),
                                       get<std::string>(c, "body", w),
                                       get<int>(c, "round_index", w)});
  }
  try {
    validate(r);
  } catch (const InvalidArgument& e) {
    throw ParseError("<record>", e.what());
  }
  return r;
}

std::string serialize_rounds(std::span<const ReviewRound> rounds) {
  std::string out;
  for (const auto& r : rounds) out += round_to_json_line(r) + "\n";
  return out;
}

std::vector<ReviewRound> parse_rounds(std::string_view text, LoadMode mode,
                                      std::vector<LoadIssue>* issues) {
  std::vector<ReviewRound> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(round_from_json_line(lines[i]));
    } catch (const ParseError& e) {
      if (mode == LoadMode::kStrict) {
        throw ParseError(e.field(), "line " + std::to_string(i + 1) + ": " + e.what());
      }
      if (issues) issues->push_back(LoadIssue{i + 1, e.what()});
    }
  }
  return out;
}

std::size_t persist_rounds(std::span<const ReviewRound> rounds, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_rounds(rounds));
  return rounds.size();
}

std::vector<ReviewRound> load_rounds(const std::filesystem::path& path, LoadMode mode,
                                     std::vector<LoadIssue>* issues) {
  return parse_rounds(read_file(path), mode, issues);
}

}  // namespace crev
