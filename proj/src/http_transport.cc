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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cctype>

#include "crev/errors.h"
#include "crev/miner.h"

namespace crev {

HttpTransport::HttpTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

HttpResponse HttpTransport::get(const std::string& url, const HttpHeaders& headers) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) throw FetchError("not an absolute URL: " + url, false);
  const std::size_t slash = url.find('/', scheme + 3);
  const std::string origin = url.substr(0, slash);
  const std::string target = request_target(url);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  h.emplace("User-Agent", "crev-miner");

  auto result = client.Get(target, h);
  if (!result) {
    throw FetchError("request to " + origin + target + " failed: " + httplib::to_string(result.error()),
                     true);
  }
  HttpResponse response;
  response.status = result->status;
  response.body = result->body;
  for (const auto& [k, v] : result->headers) {
    std::string key;
    for (char c : k) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    response.headers[key] = v;
  }
  return response;
}

}  // namespace crev
