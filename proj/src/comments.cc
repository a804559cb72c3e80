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

#include "crev/comments.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_set>

#include "crev/errors.h"

namespace crev {

extern const std::string_view kBundledRulesText;

namespace {

const std::vector<std::string> kStopwords = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
    "any", "are", "aren't", "as", "at", "be", "because", "been", "before", "being",
    "below", "between", "both", "but", "by", "can't", "cannot", "could", "couldn't",
    "did", "didn't", "do", "does", "doesn't", "doing", "don't", "down", "during",
    "each", "few", "for", "from", "further", "had", "hadn't", "has", "hasn't", "have",
    "haven't", "having", "he", "he'd", "he'll", "he's", "her", "here", "here's",
    "hers", "herself", "him", "himself", "his", "how", "how's", "i", "i'd", "i'll",
    "i'm", "i've", "if", "in", "into", "is", "isn't", "it", "it's", "its", "itself",
    "let's", "me", "more", "most", "mustn't", "my", "myself", "no", "nor", "not",
    "of", "off", "on", "once", "only", "or", "other", "ought", "our", "ours",
    "ourselves", "out", "over", "own", "same", "shan't", "she", "she'd", "she'll",
    "she's", "should", "shouldn't", "so", "some", "such", "than", "that", "that's",
    "the", "their", "theirs", "them", "themselves", "then", "there", "there's",
    "these", "they", "they'd", "they'll", "they're", "they've", "this", "those",
    "through", "to", "too", "under", "until", "up", "use", "very", "was", "wasn't",
    "we", "we'd", "we'll", "we're", "we've", "were", "weren't", "what", "what's",
    "when", "when's", "where", "where's", "which", "while", "who", "who's", "whom",
    "why", "why's", "with", "won't", "would", "wouldn't", "you", "you'd", "you'll",
    "you're", "you've", "your", "yours", "yourself", "yourselves"};

std::string strip_apostrophes(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != '\'') out += c;
  }
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::size_t word_count(std::string_view normalized) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : normalized) {
    if (c == ' ') {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

}  // namespace

std::string_view to_string(Relevance r) {
  switch (r) {
    case Relevance::kRelevant:
      return "relevant";
    case Relevance::kIrrelevant:
      return "irrelevant";
    default:
      return "unknown";
  }
}

Relevance relevance_from_string(std::string_view s) {
  if (s == "relevant") return Relevance::kRelevant;
  if (s == "irrelevant") return Relevance::kIrrelevant;
  if (s == "unknown") return Relevance::kUnknown;
  throw InvalidArgument("unknown relevance label '" + std::string(s) + "'");
}

MethodKey key_of(const MethodRecord& m) {
  return MethodKey{m.file_path, m.signature_key, m.line_start};
}

std::optional<std::size_t> link_comment(const ReviewComment& comment,
                                        std::span<const MethodRecord> methods) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const MethodRecord& m = methods[i];
    if (m.file_path != comment.path) continue;
    if (comment.line_start < m.line_start || comment.line_end > m.line_end) continue;
    if (!best) {
      best = i;
      continue;
    }
    const MethodRecord& b = methods[*best];
    const int width = m.line_end - m.line_start;
    const int best_width = b.line_end - b.line_start;
    // Innermost: narrowest span; on equal width the later-starting
    // declaration is the nested one.
    if (width < best_width || (width == best_width && m.line_start > b.line_start) ||
        (width == best_width && m.line_start == b.line_start && i > *best)) {
      best = i;
    }
  }
  return best;
}

const std::vector<std::string>& stopwords() { return kStopwords; }

bool is_stopword(std::string_view lowercase_word) {
  static const std::unordered_set<std::string> kSet = [] {
    std::unordered_set<std::string> s;
    for (const auto& w : kStopwords) {
      s.insert(w);
      s.insert(strip_apostrophes(w));
    }
    return s;
  }();
  return kSet.count(std::string(lowercase_word)) > 0;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (c == '\'') continue;
    if (std::isalnum(c) || c >= 0x80) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_space = true;
    }
  }
  return out;
}

RuleSet::RuleSet(std::vector<HeuristicRule> rules) : rules_(std::move(rules)) {
  for (auto& r : rules_) {
    if (r.kind == RuleKind::kRegex) {
      try {
        compiled_.emplace_back(std::regex(r.pattern, std::regex::ECMAScript | std::regex::icase));
      } catch (const std::regex_error& e) {
        throw FormatError("rule '" + r.id + "': invalid regex: " + e.what());
      }
    } else {
      if (r.kind == RuleKind::kKeyword) r.pattern = normalize_text(r.pattern);
      if (r.kind == RuleKind::kMaxWords) {
        if (r.pattern.empty() ||
            !std::all_of(r.pattern.begin(), r.pattern.end(),
                         [](unsigned char c) { return std::isdigit(c); })) {
          throw FormatError("rule '" + r.id + "': maxwords pattern must be an integer");
        }
      }
      compiled_.emplace_back(std::nullopt);
    }
  }
}

RuleSet RuleSet::parse(std::string_view text) {
  std::vector<HeuristicRule> rules;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw FormatError("rule line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    }
    const std::string_view kind = line.substr(t1 + 1, t2 - t1 - 1);
    RuleKind k;
    if (kind == "keyword") {
      k = RuleKind::kKeyword;
    } else if (kind == "regex") {
      k = RuleKind::kRegex;
    } else if (kind == "maxwords") {
      k = RuleKind::kMaxWords;
    } else {
      throw FormatError("rule line " + std::to_string(line_no) + ": unknown kind '" +
                        std::string(kind) + "'");
    }
    rules.push_back({std::string(line.substr(0, t1)), k, std::string(line.substr(t2 + 1))});
  }
  return RuleSet(std::move(rules));
}

std::string_view RuleSet::bundled_text() { return kBundledRulesText; }

const RuleSet& RuleSet::bundled() {
  static const RuleSet kRules = parse(kBundledRulesText);
  return kRules;
}

HeuristicVerdict RuleSet::classify(std::string_view body) const {
  const std::string normalized = normalize_text(body);
  const std::string padded = " " + normalized + " ";
  const std::string lowered = lowercase(body);
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const HeuristicRule& r = rules_[i];
    bool fired = false;
    switch (r.kind) {
      case RuleKind::kKeyword:
        fired = !r.pattern.empty() && padded.find(" " + r.pattern + " ") != std::string::npos;
        break;
      case RuleKind::kRegex:
        fired = std::regex_search(lowered, *compiled_[i]);
        break;
      case RuleKind::kMaxWords:
        fired = word_count(normalized) <= std::stoul(r.pattern);
        break;
    }
    if (fired) return {Relevance::kIrrelevant, r.id};
  }
  return {Relevance::kRelevant, std::nullopt};
}

HeuristicVerdict heuristic_relevance(std::string_view body) {
  return RuleSet::bundled().classify(body);
}

}  // namespace crev
