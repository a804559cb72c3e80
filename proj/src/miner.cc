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

#include "crev/miner.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "crev/errors.h"
#include "crev/io.h"

namespace crev {
namespace {

using nlohmann::json;

constexpr std::string_view kGerritXssiPrefix = ")]}'";

json parse_json(std::string_view body, const std::string& what) {
  if (body.substr(0, kGerritXssiPrefix.size()) == kGerritXssiPrefix) {
    body.remove_prefix(kGerritXssiPrefix.size());
  }
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ParseError(what, e.what());
  }
}

template <typename T>
T field(const json& j, const std::string& name, const std::string& where) {
  const std::string path = where + "." + name;
  if (!j.is_object() || !j.contains(name) || j.at(name).is_null()) {
    throw ParseError(path, "missing");
  }
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(path, e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const json& j, const std::string& name, const std::string& where) {
  if (!j.is_object() || !j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return field<T>(j, name, where);
}

std::string trim_url(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

std::string account_id(const json& author, const std::string& where) {
  if (author.contains("_account_id")) {
    return std::to_string(field<long long>(author, "_account_id", where));
  }
  return field<std::string>(author, "username", where);
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

// ---------------------------------------------------------------- Gerrit

class GerritClient {
 public:
  GerritClient(Transport& t, const ProjectRef& p, const MinerOptions& o)
      : transport_(t), project_(p), options_(o) {
    base_ = trim_url(p.base_url);
    if (o.gerrit_credentials) {
      base_ += "/a";
      headers_.emplace_back("Authorization", "Basic " + base64_encode(*o.gerrit_credentials));
    }
  }

  json get_json(const std::string& path, const std::string& what) {
    return parse_json(*fetch_body(transport_, base_ + path, headers_, options_.retry), what);
  }

  std::string get_raw(const std::string& path) {
    return *fetch_body(transport_, base_ + path, headers_, options_.retry);
  }

  std::vector<ReviewRound> rounds(std::size_t limit) {
    std::vector<ReviewRound> out;
    std::size_t taken = 0;
    std::size_t offset = 0;
    for (std::size_t page = 0; page < options_.max_listing_pages && taken < limit; ++page) {
      const json listing = get_json("/changes/?o=ALL_REVISIONS&o=DETAILED_ACCOUNTS&n=" +
                                        std::to_string(options_.page_size) +
                                        "&S=" + std::to_string(offset),
                                    "changes");
      if (!listing.is_array()) throw ParseError("changes", "not an array");
      bool more = false;
      for (std::size_t i = 0; i < listing.size(); ++i) {
        const json& change = listing[i];
        const std::string where = "changes[" + std::to_string(offset + i) + "]";
        more = change.value("_more_changes", false);
        if (field<std::string>(change, "project", where) != project_.project_id) continue;
        if (taken >= limit) break;
        ++taken;
        auto rounds = expand_change(change, where);
        for (auto& r : rounds) out.push_back(std::move(r));
      }
      offset += listing.size();
      if (!more || listing.empty()) break;
    }
    return out;
  }

 private:
  static std::string base64_encode(std::string_view s) {
    std::string out(4 * ((s.size() + 2) / 3) + 1, '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(s.data()),
                                  static_cast<int>(s.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
  }

  std::vector<ReviewRound> expand_change(const json& change, const std::string& where) {
    const std::string number = std::to_string(field<long long>(change, "_number", where));
    const std::string owner = account_id(field<json>(change, "owner", where), where + ".owner");
    const json revisions = field<json>(change, "revisions", where);
    if (!revisions.is_object()) throw ParseError(where + ".revisions", "not an object");

    struct PatchSet {
      int number;
      std::string sha;
    };
    std::vector<PatchSet> patch_sets;
    for (const auto& [sha, rev] : revisions.items()) {
      patch_sets.push_back({field<int>(rev, "_number", where + ".revisions." + sha), sha});
    }
    std::sort(patch_sets.begin(), patch_sets.end(),
              [](const PatchSet& a, const PatchSet& b) { return a.number < b.number; });

    std::vector<std::vector<FileVersion>> files;
    for (const auto& ps : patch_sets) files.push_back(fetch_files(number, ps.number, ps.sha));

    std::map<int, std::vector<ReviewComment>> comments_by_ps;
    const json comments = get_json("/changes/" + number + "/comments", "comments");
    if (!comments.is_object()) throw ParseError("comments", "not an object");
    for (const auto& [path, list] : comments.items()) {
      if (path.empty() || path.front() == '/') continue;  // /COMMIT_MSG, /PATCHSET_LEVEL
      if (!list.is_array()) throw ParseError("comments." + path, "not an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const json& c = list[i];
        const std::string w = "comments." + path + "[" + std::to_string(i) + "]";
        if (c.value("side", "REVISION") == "PARENT") continue;
        std::optional<int> start = optional_field<int>(c, "line", w);
        std::optional<int> end = start;
        if (c.contains("range") && c["range"].is_object()) {
          start = field<int>(c["range"], "start_line", w + ".range");
          end = field<int>(c["range"], "end_line", w + ".range");
        }
        if (!start || *start < 1) continue;  // file-level comment
        const std::string body = field<std::string>(c, "message", w);
        if (blank(body)) continue;
        const std::string author = account_id(field<json>(c, "author", w), w + ".author");
        ReviewComment rc{author, author == owner, path, *start, std::max(*start, *end), body, 0};
        comments_by_ps[field<int>(c, "patch_set", w)].push_back(std::move(rc));
      }
    }

    std::vector<ReviewRound> out;
    for (std::size_t r = 0; r < patch_sets.size(); ++r) {
      ReviewRound round;
      round.project = project_;
      round.change_id = number;
      round.round_index = static_cast<int>(r);
      round.submitted = files[r];
      if (r + 1 < patch_sets.size()) round.revised = files[r + 1];
      for (auto& c : comments_by_ps[patch_sets[r].number]) {
        if (round.find_submitted(c.path) == nullptr) continue;
        c.round_index = round.round_index;
        round.comments.push_back(std::move(c));
      }
      out.push_back(std::move(round));
    }
    return out;
  }

  std::vector<FileVersion> fetch_files(const std::string& change, int ps, const std::string& sha) {
    const std::string prefix = "/changes/" + change + "/revisions/" + std::to_string(ps);
    const json listing = get_json(prefix + "/files/", "files");
    if (!listing.is_object()) throw ParseError("files", "not an object");
    std::vector<FileVersion> out;
    for (const auto& [path, info] : listing.items()) {
      if (!has_java_extension(path)) continue;
      if (info.is_object() && info.value("status", "M") == "D") continue;
      const std::string raw = get_raw(prefix + "/files/" + percent_encode(path, false) + "/content");
      out.push_back(FileVersion{path, base64_decode(raw), sha});
    }
    return out;
  }

  Transport& transport_;
  ProjectRef project_;
  const MinerOptions& options_;
  std::string base_;
  HttpHeaders headers_;
};

// ---------------------------------------------------------------- GitHub

class GithubClient {
 public:
  GithubClient(Transport& t, const ProjectRef& p, const MinerOptions& o)
      : transport_(t), project_(p), options_(o) {
    base_ = trim_url(p.base_url) + "/repos/" + p.project_id;
    headers_.emplace_back("Accept", "application/vnd.github+json");
    if (o.github_token) headers_.emplace_back("Authorization", "Bearer " + *o.github_token);
  }

  std::vector<ReviewRound> rounds(std::size_t limit) {
    std::vector<ReviewRound> out;
    std::size_t taken = 0;
    for (std::size_t page = 1; page <= options_.max_listing_pages && taken < limit; ++page) {
      const json pulls = get_page("/pulls?state=all", page, "pulls");
      for (std::size_t i = 0; i < pulls.size() && taken < limit; ++i, ++taken) {
        auto rounds = expand_pull(pulls[i], "pulls[" + std::to_string(i) + "]");
        for (auto& r : rounds) out.push_back(std::move(r));
      }
      if (pulls.size() < options_.page_size) break;
    }
    return out;
  }

 private:
  json get_page(const std::string& path, std::size_t page, const std::string& what) {
    const char sep = path.find('?') == std::string::npos ? '?' : '&';
    const std::string url = base_ + path + sep + "per_page=" + std::to_string(options_.page_size) +
                            "&page=" + std::to_string(page);
    json j = parse_json(*fetch_body(transport_, url, headers_, options_.retry), what);
    if (!j.is_array()) throw ParseError(what, "not an array");
    return j;
  }

  json get_all(const std::string& path, const std::string& what) {
    json all = json::array();
    for (std::size_t page = 1; page <= options_.max_listing_pages; ++page) {
      const json items = get_page(path, page, what);
      for (const auto& item : items) all.push_back(item);
      if (items.size() < options_.page_size) break;
    }
    return all;
  }

  std::optional<std::string> file_at(const std::string& path, const std::string& sha) {
    auto body = fetch_body(transport_, base_ + "/contents/" + percent_encode(path, true) + "?ref=" + sha,
                           headers_, options_.retry, true);
    if (!body) return std::nullopt;
    const json j = parse_json(*body, "contents");
    const std::string where = "contents(" + path + ")";
    if (j.value("encoding", "base64") != "base64") throw ParseError(where + ".encoding", "not base64");
    return base64_decode(field<std::string>(j, "content", where));
  }

  std::vector<ReviewRound> expand_pull(const json& pull, const std::string& where) {
    const std::string number = std::to_string(field<long long>(pull, "number", where));
    const std::string author = field<std::string>(field<json>(pull, "user", where), "login",
                                                  where + ".user");
    const std::string prefix = "/pulls/" + number;

    struct Commit {
      std::string sha;
      std::string date;
    };
    std::vector<Commit> commits;
    const json raw_commits = get_all(prefix + "/commits", "commits");
    for (std::size_t i = 0; i < raw_commits.size(); ++i) {
      const std::string w = "commits[" + std::to_string(i) + "]";
      const json& c = raw_commits[i];
      const json& committer = field<json>(field<json>(c, "commit", w), "committer", w + ".commit");
      commits.push_back({field<std::string>(c, "sha", w),
                         field<std::string>(committer, "date", w + ".commit.committer")});
    }
    if (commits.empty()) return {};

    struct RawComment {
      ReviewComment comment;
      std::string created_at;
    };
    std::vector<RawComment> comments;
    const json raw_comments = get_all(prefix + "/comments", "comments");
    for (std::size_t i = 0; i < raw_comments.size(); ++i) {
      const std::string w = "comments[" + std::to_string(i) + "]";
      const json& c = raw_comments[i];
      if (c.value("side", "RIGHT") == "LEFT") continue;
      std::optional<int> line = optional_field<int>(c, "original_line", w);
      if (!line) line = optional_field<int>(c, "line", w);
      if (!line || *line < 1) continue;
      std::optional<int> start = optional_field<int>(c, "original_start_line", w);
      if (!start) start = optional_field<int>(c, "start_line", w);
      const std::string body = field<std::string>(c, "body", w);
      if (blank(body)) continue;
      const std::string login = field<std::string>(field<json>(c, "user", w), "login", w + ".user");
      const int first = std::min(start.value_or(*line), *line);
      comments.push_back({ReviewComment{login, login == author, field<std::string>(c, "path", w),
                                        first, *line, body, 0},
                          field<std::string>(c, "created_at", w)});
    }
    std::stable_sort(comments.begin(), comments.end(),
                     [](const RawComment& a, const RawComment& b) { return a.created_at < b.created_at; });

    // A push ends where a reviewer comment precedes the next commit.
    std::vector<std::size_t> push_first{0};
    for (std::size_t i = 1; i < commits.size(); ++i) {
      const bool reviewed = std::any_of(comments.begin(), comments.end(), [&](const RawComment& rc) {
        return !rc.comment.is_contributor && rc.created_at >= commits[i - 1].date &&
               rc.created_at < commits[i].date;
      });
      if (reviewed) push_first.push_back(i);
    }
    const std::size_t pushes = push_first.size();

    std::set<std::string> java_paths;
    for (const auto& f : get_all(prefix + "/files", "files")) {
      const std::string name = field<std::string>(f, "filename", "files[]");
      if (has_java_extension(name)) java_paths.insert(name);
    }
    std::vector<std::vector<FileVersion>> snapshots(pushes);
    for (std::size_t p = 0; p < pushes; ++p) {
      const std::size_t last = p + 1 < pushes ? push_first[p + 1] - 1 : commits.size() - 1;
      for (const auto& path : java_paths) {
        if (auto content = file_at(path, commits[last].sha)) {
          snapshots[p].push_back(FileVersion{path, std::move(*content), commits[last].sha});
        }
      }
    }

    std::vector<ReviewRound> out(pushes);
    for (std::size_t p = 0; p < pushes; ++p) {
      out[p].project = project_;
      out[p].change_id = number;
      out[p].round_index = static_cast<int>(p);
      out[p].submitted = snapshots[p];
      if (p + 1 < pushes) out[p].revised = snapshots[p + 1];
    }
    for (auto& rc : comments) {
      std::size_t p = 0;
      while (p + 1 < pushes && commits[push_first[p + 1]].date <= rc.created_at) ++p;
      if (out[p].find_submitted(rc.comment.path) == nullptr) continue;
      rc.comment.round_index = static_cast<int>(p);
      out[p].comments.push_back(std::move(rc.comment));
    }
    return out;
  }

  Transport& transport_;
  ProjectRef project_;
  const MinerOptions& options_;
  std::string base_;
  HttpHeaders headers_;
};

}  // namespace

// ---------------------------------------------------------------- transport

FixtureTransport::FixtureTransport(const std::filesystem::path& dir) : dir_(dir) {
  const auto lines = split_lines(read_file(dir / "routes.tsv"));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const auto fields = split_tabs(lines[i]);
    int status = 0;
    if (fields.size() != 3 ||
        std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), status).ec !=
            std::errc()) {
      throw FormatError("routes.tsv line " + std::to_string(i + 1) + ": expected request, status, file");
    }
    routes_[fields[0]].push_back(Route{status, fields[2]});
  }
}

HttpResponse FixtureTransport::get(const std::string& url, const HttpHeaders&) {
  const std::string target = request_target(url);
  Route route;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = routes_.find(target);
    if (it == routes_.end()) throw FetchError("no fixture for " + target, false);
    std::size_t& cursor = cursor_[target];
    route = it->second[std::min(cursor, it->second.size() - 1)];
    ++cursor;
    ++served_;
  }
  HttpResponse response;
  response.status = route.status;
  if (!route.file.empty() && route.file != "-") response.body = read_file(dir_ / route.file);
  return response;
}

std::size_t FixtureTransport::requests_served() const {
  std::lock_guard<std::mutex> lock(mu_);
  return served_;
}

std::string request_target(std::string_view url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string_view::npos) return std::string(url);
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string_view::npos) return "/";
  return std::string(url.substr(slash));
}

std::string percent_encode(std::string_view s, bool keep_slash) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || (keep_slash && c == '/')) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string base64_decode(std::string_view encoded) {
  std::string clean;
  for (char c : encoded) {
    if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
  }
  if (clean.size() % 4 != 0) throw ParseError("content", "base64 length not a multiple of 4");
  std::string out(clean.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(clean.data()),
                                static_cast<int>(clean.size()));
  if (n < 0) throw ParseError("content", "invalid base64");
  std::size_t pad = 0;
  if (!clean.empty() && clean.back() == '=') ++pad;
  if (clean.size() > 1 && clean[clean.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

MinerOptions MinerOptions::from_environment() {
  MinerOptions o;
  if (const char* t = std::getenv("GITHUB_TOKEN"); t && *t) o.github_token = t;
  if (const char* c = std::getenv("GERRIT_HTTP_CREDENTIALS"); c && *c) o.gerrit_credentials = c;
  return o;
}

std::optional<std::string> fetch_body(Transport& transport, const std::string& url,
                                      const HttpHeaders& headers, const RetryPolicy& policy,
                                      bool allow_missing) {
  std::chrono::milliseconds backoff = policy.initial_backoff;
  std::string last_error;
  const int attempts = std::max(1, policy.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    std::optional<std::chrono::milliseconds> wait;
    HttpResponse r;
    try {
      r = transport.get(url, headers);
    } catch (const FetchError& e) {
      if (!e.retryable()) throw;
      last_error = e.what();
      r.status = 0;
    }
    if (r.status != 0) {
      if (r.status >= 200 && r.status < 300) return r.body;
      if (r.status == 404 && allow_missing) return std::nullopt;
      auto header = [&](const std::string& name) -> std::string {
        auto it = r.headers.find(name);
        return it == r.headers.end() ? "" : it->second;
      };
      const bool rate_limited =
          r.status == 429 || (r.status == 403 && header("x-ratelimit-remaining") == "0");
      last_error = "HTTP " + std::to_string(r.status) + " for " + request_target(url);
      if (!rate_limited && r.status < 500) {
        // Credentials may be fixed and the call repeated; missing resources cannot.
        throw FetchError(last_error, r.status == 401 || r.status == 403);
      }
      if (const std::string ra = header("retry-after"); !ra.empty()) {
        long long seconds = 0;
        if (std::from_chars(ra.data(), ra.data() + ra.size(), seconds).ec == std::errc()) {
          wait = std::chrono::milliseconds(seconds * 1000);
        }
      }
    }
    if (attempt == attempts) break;
    const auto delay = std::min(wait.value_or(backoff), policy.max_backoff);
    if (policy.sleep) {
      policy.sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
    backoff = std::min(backoff * 2, policy.max_backoff);
  }
  throw FetchError("giving up after " + std::to_string(attempts) + " attempts: " +
                       last_error,
                   true);
}

std::vector<ReviewRound> fetch_gerrit_rounds(Transport& transport, const ProjectRef& project,
                                             std::size_t limit, const MinerOptions& options) {
  validate(project);
  if (project.host_kind != HostKind::kGerrit) throw InvalidArgument("not a gerrit project");
  if (limit == 0) return {};
  return GerritClient(transport, project, options).rounds(limit);
}

std::vector<ReviewRound> fetch_github_rounds(Transport& transport, const ProjectRef& project,
                                             std::size_t limit, const MinerOptions& options) {
  validate(project);
  if (project.host_kind != HostKind::kGithub) throw InvalidArgument("not a github project");
  if (limit == 0) return {};
  return GithubClient(transport, project, options).rounds(limit);
}

std::vector<ReviewRound> fetch_rounds(Transport& transport, const ProjectRef& project,
                                      std::size_t limit, const MinerOptions& options) {
  return project.host_kind == HostKind::kGerrit
             ? fetch_gerrit_rounds(transport, project, limit, options)
             : fetch_github_rounds(transport, project, limit, options);
}

}  // namespace crev
