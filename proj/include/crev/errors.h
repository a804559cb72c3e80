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

#ifndef CREV_ERRORS_H_
#define CREV_ERRORS_H_

#include <stdexcept>
#include <string>

namespace crev {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Network or transport failure. `retryable()` is true for failures that may
// succeed on a later attempt (timeouts, 5xx, rate limiting).
class FetchError : public Error {
 public:
  FetchError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// Malformed payload; `field()` names the offending field.
class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : Error("parse error in field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class SchemaVersionError : public Error {
 public:
  SchemaVersionError(int found, int expected)
      : Error("unsupported schema_version " + std::to_string(found) +
              " (expected " + std::to_string(expected) + ")"),
        found_(found) {}
  int found() const { return found_; }

 private:
  int found_;
};

class LexError : public Error {
 public:
  LexError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ExtractionError : public Error {
 public:
  ExtractionError(const std::string& path, const std::string& reason)
      : Error(path + ": " + reason), path_(path), reason_(reason) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

class AbstractionError : public Error {
 public:
  using Error::Error;
};

// An abstract ID with no entry in the abstraction map.
class UnmappableTokenError : public Error {
 public:
  explicit UnmappableTokenError(const std::string& id)
      : Error("unmappable abstract token " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace crev

#endif  // CREV_ERRORS_H_
