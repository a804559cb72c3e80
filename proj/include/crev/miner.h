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

#ifndef CREV_MINER_H_
#define CREV_MINER_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crev/review.h"

namespace crev {

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;  // lowercase names
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws FetchError (retryable) when no response could be obtained.
  virtual HttpResponse get(const std::string& url, const HttpHeaders& headers) = 0;
};

// Replays responses recorded in <dir>/routes.tsv. Each line is
// "request<TAB>status<TAB>file" where request is the URL path and query.
// Repeated requests are answered in file order; the last answer repeats.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(const std::filesystem::path& dir);
  HttpResponse get(const std::string& url, const HttpHeaders& headers) override;
  std::size_t requests_served() const;

 private:
  struct Route {
    int status;
    std::filesystem::path file;
  };
  std::filesystem::path dir_;
  std::map<std::string, std::vector<Route>> routes_;
  std::map<std::string, std::size_t> cursor_;
  std::size_t served_ = 0;
  mutable std::mutex mu_;
};

// Live HTTP(S) client.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(30));
  HttpResponse get(const std::string& url, const HttpHeaders& headers) override;

 private:
  std::chrono::seconds timeout_;
};

// Path and query of a URL ("https://h/a?b" -> "/a?b").
std::string request_target(std::string_view url);
std::string percent_encode(std::string_view s, bool keep_slash);
std::string base64_decode(std::string_view encoded);

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{30000};
  std::function<void(std::chrono::milliseconds)> sleep;  // default: this_thread::sleep_for
};

struct MinerOptions {
  RetryPolicy retry;
  std::size_t page_size = 100;
  std::size_t max_listing_pages = 1000;
  std::optional<std::string> github_token;        // GITHUB_TOKEN
  std::optional<std::string> gerrit_credentials;  // GERRIT_HTTP_CREDENTIALS, "user:password"

  static MinerOptions from_environment();
};

// GET with backoff on 429, rate-limit 403 and 5xx. Returns nullopt on 404
// when `allow_missing` is set; other failures throw FetchError.
std::optional<std::string> fetch_body(Transport& transport, const std::string& url,
                                      const HttpHeaders& headers, const RetryPolicy& policy,
                                      bool allow_missing = false);

// Lists installation-wide changes, keeps those of `project` and expands each
// into one round per patch set.
std::vector<ReviewRound> fetch_gerrit_rounds(Transport& transport, const ProjectRef& project,
                                             std::size_t limit, const MinerOptions& options = {});

// One round per contributor push; pushes are separated by reviewer comments.
std::vector<ReviewRound> fetch_github_rounds(Transport& transport, const ProjectRef& project,
                                             std::size_t limit, const MinerOptions& options = {});

std::vector<ReviewRound> fetch_rounds(Transport& transport, const ProjectRef& project,
                                      std::size_t limit, const MinerOptions& options = {});

}  // namespace crev

#endif  // CREV_MINER_H_
