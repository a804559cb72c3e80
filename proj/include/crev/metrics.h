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

#ifndef CREV_METRICS_H_
#define CREV_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace crev {

using TokenSeq = std::vector<std::string>;

struct EvalInstance {
  TokenSeq reference;
  std::vector<TokenSeq> candidates;  // ranked, best first
  int beam_size = 1;
};

// BLEU-4 with uniform weights and brevity penalty. Orders the candidate and
// reference both lack count as precision 1; any other zero precision for
// n >= 2 is replaced by 1 / (2 * |candidate|). Empty candidate -> 0.
// Throws InvalidArgument on an empty reference.
double bleu4(std::span<const std::string> candidate, std::span<const std::string> reference);

std::size_t levenshtein(std::span<const std::string> a, std::span<const std::string> b);
// Edit distance over max(|a|, |b|); 0 when both are empty.
double normalized_levenshtein(std::span<const std::string> candidate,
                              std::span<const std::string> reference);

struct Summary {
  double mean = 0;
  double median = 0;
  double stdev = 0;  // sample standard deviation, 0 for one value
};
Summary summarize(std::vector<double> values);

struct MetricsRow {
  int beam_size = 0;
  std::size_t instance_count = 0;
  std::size_t perfect_count = 0;
  double perfect_pct = 0;  // 100 * perfect_count / instance_count
  Summary bleu;            // over each instance's best-BLEU candidate
  Summary levenshtein;     // over each instance's lowest-distance candidate
};

struct MetricsReport {
  std::string model;
  std::vector<MetricsRow> rows;  // ascending beam size
};

// Checks 1 <= |candidates| <= beam_size and candidate distinctness.
void validate(const EvalInstance& instance);

// Throws InvalidArgument on an empty set, mixed beam sizes or an invalid
// instance.
MetricsRow evaluate(std::span<const EvalInstance> instances, std::size_t threads = 0);

std::string render_table(const MetricsReport& report);
std::string render_json(const MetricsReport& report);
MetricsReport parse_report_json(std::string_view text);

}  // namespace crev

#endif  // CREV_METRICS_H_
