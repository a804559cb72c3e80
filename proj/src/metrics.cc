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

#include "crev/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "crev/errors.h"
#include "crev/parallel.h"

namespace crev {
namespace {

using NGram = std::vector<std::string>;

std::map<NGram, std::size_t> ngram_counts(std::span<const std::string> seq, std::size_t n) {
  std::map<NGram, std::size_t> counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    ++counts[NGram(seq.begin() + i, seq.begin() + i + n)];
  }
  return counts;
}

}  // namespace

double bleu4(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (reference.empty()) throw InvalidArgument("bleu4: empty reference");
  if (candidate.empty()) return 0.0;
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  double log_sum = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::size_t total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
    const std::size_t ref_total = reference.size() >= n ? reference.size() - n + 1 : 0;
    double p;
    if (total == 0 && ref_total == 0) {
      p = 1.0;
    } else {
      std::size_t matched = 0;
      if (total > 0) {
        const auto ref = ngram_counts(reference, n);
        for (const auto& [gram, count] : ngram_counts(candidate, n)) {
          auto it = ref.find(gram);
          if (it != ref.end()) matched += std::min(count, it->second);
        }
      }
      if (matched == 0) {
        if (n == 1) return 0.0;
        p = 1.0 / (2.0 * c);
      } else {
        p = static_cast<double>(matched) / static_cast<double>(total);
      }
    }
    log_sum += std::log(p);
  }
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / 4.0);
}

std::size_t levenshtein(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double normalized_levenshtein(std::span<const std::string> candidate,
                              std::span<const std::string> reference) {
  const std::size_t longest = std::max(candidate.size(), reference.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein(candidate, reference)) / static_cast<double>(longest);
}

Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
  if (values.size() > 1) {
    double sq = 0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(sq / (n - 1));
  }
  return s;
}

void validate(const EvalInstance& instance) {
  if (instance.beam_size < 1) throw InvalidArgument("beam size must be positive");
  if (instance.candidates.empty()) throw InvalidArgument("instance without candidates");
  if (instance.candidates.size() > static_cast<std::size_t>(instance.beam_size)) {
    throw InvalidArgument("more candidates than beam size " + std::to_string(instance.beam_size));
  }
  std::set<TokenSeq> seen;
  for (const auto& c : instance.candidates) {
    if (!seen.insert(c).second) throw InvalidArgument("duplicate candidate in instance");
  }
}

MetricsRow evaluate(std::span<const EvalInstance> instances, std::size_t threads) {
  if (instances.empty()) throw InvalidArgument("evaluate: no instances");
  const int k = instances.front().beam_size;
  for (const auto& inst : instances) {
    if (inst.beam_size != k) throw InvalidArgument("evaluate: instances mix beam sizes");
    validate(inst);
  }
  std::vector<double> bleu(instances.size()), lev(instances.size());
  std::vector<char> perfect(instances.size(), 0);
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    const EvalInstance& inst = instances[i];
    double best_bleu = 0, best_lev = 1;
    for (const auto& c : inst.candidates) {
      if (c == inst.reference) perfect[i] = 1;
      best_bleu = std::max(best_bleu, bleu4(c, inst.reference));
      best_lev = std::min(best_lev, normalized_levenshtein(c, inst.reference));
    }
    bleu[i] = best_bleu;
    lev[i] = best_lev;
  });
  MetricsRow row;
  row.beam_size = k;
  row.instance_count = instances.size();
  row.perfect_count = static_cast<std::size_t>(std::count(perfect.begin(), perfect.end(), 1));
  row.perfect_pct = 100.0 * static_cast<double>(row.perfect_count) /
                    static_cast<double>(row.instance_count);
  row.bleu = summarize(std::move(bleu));
  row.levenshtein = summarize(std::move(lev));
  return row;
}

std::string render_table(const MetricsReport& report) {
  std::string out;
  if (!report.model.empty()) out += "model: " + report.model + "\n";
  out += "scoring: best candidate per instance (max BLEU-4, min Levenshtein)\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %8s %8s | %8s %8s %8s | %8s %8s %8s\n", "beam", "#", "%",
                "BLEU", "median", "st.dev.", "Lev.", "median", "st.dev.");
  out += line;
  out += std::string(84, '-') + "\n";
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line,
                  "k=%-4d %8zu %7.2f%% | %8.3f %8.3f %8.3f | %8.3f %8.3f %8.3f\n", r.beam_size,
                  r.perfect_count, r.perfect_pct, r.bleu.mean, r.bleu.median, r.bleu.stdev,
                  r.levenshtein.mean, r.levenshtein.median, r.levenshtein.stdev);
    out += line;
  }
  if (!report.rows.empty()) {
    out += "instances: " + std::to_string(report.rows.front().instance_count) + "\n";
  }
  return out;
}

std::string render_json(const MetricsReport& report) {
  using nlohmann::json;
  auto summary = [](const Summary& s) {
    return json{{"mean", s.mean}, {"median", s.median}, {"stdev", s.stdev}};
  };
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"beam_size", r.beam_size},
                    {"instance_count", r.instance_count},
                    {"perfect_count", r.perfect_count},
                    {"perfect_pct", r.perfect_pct},
                    {"bleu", summary(r.bleu)},
                    {"levenshtein", summary(r.levenshtein)}});
  }
  return json{{"model", report.model}, {"scoring", "best_of_beam"}, {"rows", rows}}.dump(2) +
         "\n";
}

MetricsReport parse_report_json(std::string_view text) {
  using nlohmann::json;
  MetricsReport report;
  try {
    const json j = json::parse(text);
    report.model = j.value("model", "");
    auto summary = [](const json& s) {
      return Summary{s.at("mean").get<double>(), s.at("median").get<double>(),
                     s.at("stdev").get<double>()};
    };
    for (const auto& r : j.at("rows")) {
      MetricsRow row;
      row.beam_size = r.at("beam_size").get<int>();
      row.instance_count = r.at("instance_count").get<std::size_t>();
      row.perfect_count = r.at("perfect_count").get<std::size_t>();
      row.perfect_pct = r.at("perfect_pct").get<double>();
      row.bleu = summary(r.at("bleu"));
      row.levenshtein = summary(r.at("levenshtein"));
      report.rows.push_back(row);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("metrics record: ") + e.what());
  }
  return report;
}

}  // namespace crev
