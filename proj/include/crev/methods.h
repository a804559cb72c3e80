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

#ifndef CREV_METHODS_H_
#define CREV_METHODS_H_

#include <span>
#include <string>
#include <vector>

#include "crev/review.h"

namespace crev {

// A method or constructor declaration. The span covers leading annotations
// and modifiers through the closing brace (or `;` for abstract methods).
struct MethodRecord {
  std::string file_path;
  std::string name;
  int parameter_arity = 0;
  // name + "(" + erased parameter types as written + ")", e.g. "put(Map,int[])".
  std::string signature_key;
  int line_start = 1;
  int line_end = 1;
  std::string source_text;
  bool has_body = true;

  bool operator==(const MethodRecord&) const = default;
};

struct MethodPairing {
  MethodRecord before;
  MethodRecord after;
};

struct SkipEntry {
  std::string path;
  std::string reason;

  bool operator==(const SkipEntry&) const = default;
};

using SkipLog = std::vector<SkipEntry>;

// Methods of one file in source order; methods of nested, local and
// anonymous classes are reported as their own records. Throws
// ExtractionError (carrying file.path) when the file cannot be parsed.
std::vector<MethodRecord> extract_methods(const FileVersion& file);

// Fraction of shared code tokens: |A ∩ B| / max(|A|, |B|) over token
// multisets. 0 when both are empty.
double token_overlap(const MethodRecord& a, const MethodRecord& b);

inline constexpr double kRenameOverlapThreshold = 0.6;

// Pairs methods of files present (by path) in both sets. Exact
// (file_path, signature_key) matches first; then, per file, a single
// leftover before-method is paired with the leftover after-method of equal
// arity with the highest token overlap, if that overlap is at least
// kRenameOverlapThreshold. Files that fail extraction are reported in
// `skips` (when given) and contribute no pairings.
std::vector<MethodPairing> match_method_versions(
    std::span<const FileVersion> before_files,
    std::span<const FileVersion> after_files, SkipLog* skips = nullptr);

}  // namespace crev

#endif  // CREV_METHODS_H_
