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

#include "crev/dataset.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "crev/errors.h"
#include "crev/io.h"
#include "crev/java_lexer.h"
#include "crev/parallel.h"
#include "crev/random.h"

namespace crev {
namespace {

using nlohmann::json;

constexpr int kBundleSchemaVersion = 1;

bool is_url(std::string_view w) {
  return w.find("://") != std::string_view::npos || w.rfind("www.", 0) == 0;
}

bool is_code_word(std::string_view w) { return is_abstract_id(w) || w == kCodePlaceholder; }

// Lowercases letters outside abstract-ID runs ("VAR_1.Foo" -> "VAR_1.foo").
std::string lowercase_except_ids(std::string_view word) {
  std::string out;
  std::size_t p = 0;
  while (p < word.size()) {
    const unsigned char c = word[p];
    if (std::isalnum(c) || c == '_') {
      std::size_t q = p;
      while (q < word.size() &&
             (std::isalnum(static_cast<unsigned char>(word[q])) || word[q] == '_')) {
        ++q;
      }
      const std::string_view run = word.substr(p, q - p);
      if (is_code_word(run)) {
        out += run;
      } else {
        for (unsigned char r : run) out += static_cast<char>(std::tolower(r));
      }
      p = q;
    } else {
      out += static_cast<char>(c);
      ++p;
    }
  }
  return out;
}

bool strippable(unsigned char c) { return std::ispunct(c) && c != '_'; }

// Lines [first, last] of `source` classified by token content.
struct LineClasses {
  std::vector<bool> code;
  std::vector<bool> comment;

  bool only_comments(int first, int last) const {
    bool any_comment = false;
    for (int l = first; l <= last; ++l) {
      if (l < static_cast<int>(code.size()) && code[l]) return false;
      if (l < static_cast<int>(comment.size()) && comment[l]) any_comment = true;
    }
    return any_comment;
  }
};

LineClasses classify_lines(std::string_view source) {
  LineClasses lc;
  for (const auto& t : lex_java(source, true)) {
    auto& target = t.kind == LexKind::kComment ? lc.comment : lc.code;
    if (static_cast<int>(target.size()) <= t.end_line) target.resize(t.end_line + 1);
    for (int l = t.line; l <= t.end_line; ++l) target[l] = true;
  }
  return lc;
}

struct RoundOutput {
  std::vector<MethodTriplet> triplets;
  AttritionStats stats;
  SkipLog skips;
};

void process_file(const ReviewRound& round, const FileVersion& file, const BuildOptions& options,
                  RoundOutput& out) {
  std::vector<const ReviewComment*> comments;
  for (const auto& c : round.comments) {
    if (c.path == file.path) comments.push_back(&c);
  }
  if (comments.empty()) return;

  std::vector<MethodRecord> methods;
  LineClasses lines;
  try {
    methods = extract_methods(file);
    lines = classify_lines(file.content);
  } catch (const ExtractionError& e) {
    out.skips.push_back({e.path(), e.reason()});
    out.stats.comments.unparseable_file += comments.size();
    return;
  }

  std::map<std::size_t, std::vector<const ReviewComment*>> groups;
  for (const ReviewComment* c : comments) {
    if (auto idx = link_comment(*c, methods)) {
      groups[*idx].push_back(c);
      ++out.stats.comments.linked;
    } else {
      ++out.stats.comments.unlinked;
    }
  }
  if (groups.empty()) return;

  std::vector<MethodPairing> pairings;
  if (const FileVersion* revised = round.find_revised(file.path)) {
    const FileVersion before[] = {file};
    const FileVersion after[] = {*revised};
    pairings = match_method_versions(before, after, &out.skips);
  }

  auto drop = [&](Filter f) { ++out.stats.removed[f]; };

  for (auto& [idx, group] : groups) {
    ++out.stats.candidates;
    const MethodRecord& method = methods[idx];

    std::vector<const ReviewComment*> kept;
    for (const ReviewComment* c : group) {
      if (options.relevance(c->body).relevance == Relevance::kIrrelevant) {
        ++out.stats.comments.irrelevant;
      } else {
        kept.push_back(c);
      }
    }
    if (kept.empty()) {
      drop(Filter::kIrrelevantComments);
      continue;
    }
    std::erase_if(kept, [&](const ReviewComment* c) {
      if (!c->is_contributor) return false;
      ++out.stats.comments.contributor;
      return true;
    });
    if (kept.empty()) {
      drop(Filter::kContributorComments);
      continue;
    }
    std::erase_if(kept, [&](const ReviewComment* c) {
      if (!lines.only_comments(c->line_start, c->line_end)) return false;
      ++out.stats.comments.code_comment_line;
      return true;
    });
    if (kept.empty()) {
      drop(Filter::kCodeCommentLines);
      continue;
    }

    const MethodKey key = key_of(method);
    auto pairing = std::find_if(pairings.begin(), pairings.end(),
                                [&](const MethodPairing& p) { return key_of(p.before) == key; });
    if (pairing == pairings.end()) {
      drop(Filter::kUnmatchedMethod);
      continue;
    }

    AbstractedPair abstracted;
    try {
      abstracted = abstract_pair(pairing->before, pairing->after, options.idioms);
    } catch (const AbstractionError& e) {
      out.skips.push_back({file.path, std::string("abstraction: ") + e.what()});
      drop(Filter::kAbstractionError);
      continue;
    }
    if (abstracted.before.texts() == abstracted.after.texts()) {
      drop(Filter::kUnchanged);
      continue;
    }
    if (abstracted.before.token_count() > options.max_tokens ||
        abstracted.after.token_count() > options.max_tokens) {
      drop(Filter::kTooLong);
      continue;
    }
    std::unordered_set<std::string> source_ids;
    for (const auto& t : abstracted.before.tokens) {
      if (t.kind == TokenKind::kAbstractId) source_ids.insert(t.text);
    }
    const bool introduces = std::any_of(
        abstracted.after.tokens.begin(), abstracted.after.tokens.end(), [&](const Token& t) {
          return t.kind == TokenKind::kAbstractId && !source_ids.count(t.text);
        });
    if (introduces) {
      drop(Filter::kNewIdentifier);
      continue;
    }
    if (kept.size() != 1) {
      drop(Filter::kNotSingleton);
      continue;
    }
    const ReviewComment& comment = *kept.front();
    auto r_nl = normalize_comment(abstract_comment(comment.body, abstracted.map));
    if (r_nl.empty()) {
      drop(Filter::kEmptyComment);
      continue;
    }

    MethodTriplet t;
    t.span = locate_span(abstracted.before, comment, method);
    t.m_s = std::move(abstracted.before);
    t.m_r = std::move(abstracted.after);
    t.r_nl = std::move(r_nl);
    t.map = std::move(abstracted.map);
    t.provenance = Provenance{round.project.project_id, round.change_id, round.round_index,
                              file.path, method.signature_key, method.line_start,
                              t.span.approximate};
    out.triplets.push_back(std::move(t));
  }
}

RoundOutput process_round(const ReviewRound& round, const BuildOptions& options) {
  RoundOutput out;
  out.stats.comments.total = round.comments.size();
  for (const auto& c : round.comments) {
    const FileVersion* f = round.find_submitted(c.path);
    if (f == nullptr || !has_java_extension(c.path)) ++out.stats.comments.outside_submitted_java;
  }
  for (const auto& file : round.submitted) {
    if (has_java_extension(file.path)) process_file(round, file, options, out);
  }
  return out;
}

void merge(AttritionStats& into, const AttritionStats& from) {
  into.candidates += from.candidates;
  for (const auto& [f, n] : from.removed) into.removed[f] += n;
  into.output += from.output;
  auto& a = into.comments;
  const auto& b = from.comments;
  a.total += b.total;
  a.outside_submitted_java += b.outside_submitted_java;
  a.unparseable_file += b.unparseable_file;
  a.unlinked += b.unlinked;
  a.linked += b.linked;
  a.irrelevant += b.irrelevant;
  a.contributor += b.contributor;
  a.code_comment_line += b.code_comment_line;
}

auto provenance_key(const Provenance& p) {
  return std::tie(p.project, p.change_id, p.round_index, p.file_path, p.method_line_start,
                  p.signature_key);
}

TokenKind guess_kind(const std::string& text) {
  if (is_abstract_id(text)) return TokenKind::kAbstractId;
  if (text == kSpanStart || text == kSpanEnd || text == kCodePlaceholder) return TokenKind::kSpecial;
  if (is_java_keyword(text)) return TokenKind::kKeyword;
  const unsigned char c = text[0];
  if (std::isalpha(c) || c == '_' || c == '$') return TokenKind::kIdentifier;
  if (std::isdigit(c) || c == '"' || c == '\'') return TokenKind::kLiteral;
  return TokenKind::kPunctuation;
}

AbstractedMethod method_from_texts(const std::vector<std::string>& texts) {
  AbstractedMethod m;
  for (const auto& t : texts) m.tokens.push_back(Token{t, guess_kind(t), 0});
  return m;
}

json stats_to_json(const AttritionStats& s) {
  json removed = json::array();
  for (Filter f : kAllFilters) {
    auto it = s.removed.find(f);
    removed.push_back({{"filter", to_string(f)}, {"removed", it == s.removed.end() ? 0 : it->second}});
  }
  const auto& c = s.comments;
  return {{"candidates", s.candidates},
          {"removed", removed},
          {"output", s.output},
          {"comments",
           {{"total", c.total},
            {"outside_submitted_java", c.outside_submitted_java},
            {"unparseable_file", c.unparseable_file},
            {"unlinked", c.unlinked},
            {"linked", c.linked},
            {"irrelevant", c.irrelevant},
            {"contributor", c.contributor},
            {"code_comment_line", c.code_comment_line}}}};
}

AttritionStats stats_from_json(const json& j) {
  AttritionStats s;
  s.candidates = j.at("candidates").get<std::size_t>();
  s.output = j.at("output").get<std::size_t>();
  for (const auto& r : j.at("removed")) {
    const auto name = r.at("filter").get<std::string>();
    for (Filter f : kAllFilters) {
      if (to_string(f) == name) {
        const auto n = r.at("removed").get<std::size_t>();
        if (n) s.removed[f] = n;
      }
    }
  }
  const auto& c = j.at("comments");
  s.comments.total = c.at("total");
  s.comments.outside_submitted_java = c.at("outside_submitted_java");
  s.comments.unparseable_file = c.at("unparseable_file");
  s.comments.unlinked = c.at("unlinked");
  s.comments.linked = c.at("linked");
  s.comments.irrelevant = c.at("irrelevant");
  s.comments.contributor = c.at("contributor");
  s.comments.code_comment_line = c.at("code_comment_line");
  return s;
}

}  // namespace

std::string_view to_string(Filter f) {
  switch (f) {
    case Filter::kIrrelevantComments: return "irrelevant_comments";
    case Filter::kContributorComments: return "contributor_comments";
    case Filter::kCodeCommentLines: return "code_comment_lines";
    case Filter::kUnmatchedMethod: return "unmatched_method";
    case Filter::kAbstractionError: return "abstraction_error";
    case Filter::kUnchanged: return "unchanged";
    case Filter::kTooLong: return "too_long";
    case Filter::kNewIdentifier: return "new_identifier";
    case Filter::kNotSingleton: return "not_singleton";
    case Filter::kEmptyComment: return "empty_comment";
    case Filter::kDuplicate: return "duplicate";
  }
  return "?";
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kEval: return "eval";
    default: return "test";
  }
}

std::size_t AttritionStats::total_removed() const {
  std::size_t n = 0;
  for (const auto& [f, count] : removed) n += count;
  return n;
}

std::vector<std::string> MethodTriplet::marked_source() const { return apply_markers(m_s, span); }

std::vector<std::string> normalize_comment(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  for (const auto& raw : tokens) {
    if (is_url(raw)) continue;
    if (is_code_word(raw)) {
      out.push_back(raw);
      continue;
    }
    std::size_t b = 0, e = raw.size();
    while (b < e && strippable(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && strippable(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (b == e) continue;
    const std::string word = lowercase_except_ids(std::string_view(raw).substr(b, e - b));
    if (!is_code_word(word) && is_stopword(word)) continue;
    out.push_back(word);
  }
  return out;
}

TokenSpan locate_span(const AbstractedMethod& m_s, const ReviewComment& comment,
                      const MethodRecord& method) {
  const auto& toks = m_s.tokens;
  if (toks.empty()) return TokenSpan{0, 0, true};
  auto file_line = [&](std::size_t i) { return method.line_start + toks[i].line - 1; };
  std::optional<std::size_t> first;
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const int l = file_line(i);
    if (l >= comment.line_start && l <= comment.line_end) {
      if (!first) first = i;
      last = i;
    }
  }
  if (first) return TokenSpan{*first, *last + 1, false};
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (file_line(i) >= comment.line_start) return TokenSpan{i, i + 1, true};
  }
  return TokenSpan{toks.size() - 1, toks.size(), true};
}

std::vector<std::string> apply_markers(const AbstractedMethod& m_s, const TokenSpan& span) {
  std::vector<std::string> out;
  out.reserve(m_s.tokens.size() + 2);
  for (std::size_t i = 0; i <= m_s.tokens.size(); ++i) {
    if (i == span.start) out.emplace_back(kSpanStart);
    if (i == span.end) out.emplace_back(kSpanEnd);
    if (i < m_s.tokens.size()) out.push_back(m_s.tokens[i].text);
  }
  return out;
}

std::vector<std::string> mark_span(const AbstractedMethod& m_s, const ReviewComment& comment,
                                   const MethodRecord& method) {
  return apply_markers(m_s, locate_span(m_s, comment, method));
}

BuildResult build_triplets(std::span<const ReviewRound> rounds, const BuildOptions& options) {
  std::vector<RoundOutput> outputs(rounds.size());
  parallel_for(rounds.size(), options.threads,
               [&](std::size_t i) { outputs[i] = process_round(rounds[i], options); });

  BuildResult result;
  for (auto& o : outputs) {
    merge(result.stats, o.stats);
    for (auto& t : o.triplets) result.triplets.push_back(std::move(t));
    for (auto& s : o.skips) result.skips.push_back(std::move(s));
  }
  std::stable_sort(result.triplets.begin(), result.triplets.end(),
                   [](const MethodTriplet& a, const MethodTriplet& b) {
                     return provenance_key(a.provenance) < provenance_key(b.provenance);
                   });
  result.stats.output = result.triplets.size();
  return result;
}

PairInstance to_pair(const MethodTriplet& t) { return PairInstance{t.m_s.texts(), t.m_r.texts()}; }

std::string triplet_line(const MethodTriplet& t) {
  return join_tokens(t.marked_source()) + "\t" + join_tokens(t.r_nl) + "\t" +
         join_tokens(t.m_r.texts());
}

std::string pair_line(const PairInstance& p) {
  return join_tokens(p.source) + "\t" + join_tokens(p.target);
}

std::size_t DatasetBundle::size() const {
  return triplets[0].size() + triplets[1].size() + triplets[2].size();
}

DatasetBundle split_and_dedup(std::vector<MethodTriplet> triplets, const SplitRatios& ratios,
                              std::uint64_t seed, AttritionStats stats, IdiomSet idioms) {
  if (ratios.train < 0 || ratios.eval < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.eval + ratios.test - 1.0) > 1e-9) {
    throw InvalidArgument("split ratios must be non-negative and sum to 1");
  }
  std::vector<MethodTriplet> unique;
  std::unordered_set<std::string> seen_triplets, seen_pairs;
  std::size_t duplicates = 0;
  for (auto& t : triplets) {
    const bool new_triplet = seen_triplets.insert(triplet_line(t)).second;
    const bool new_pair = seen_pairs.insert(pair_line(to_pair(t))).second;
    if (new_triplet && new_pair) {
      unique.push_back(std::move(t));
    } else {
      ++duplicates;
    }
  }
  if (unique.size() < 3) {
    throw InvalidArgument("need at least 3 unique instances to split, got " +
                          std::to_string(unique.size()));
  }

  Rng rng(seed);
  shuffle_in_place(unique, rng);
  const std::size_t n = unique.size();
  // Tolerance guards against 0.1 * 100 landing just below 10.
  auto floor_count = [n](double r) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };
  const std::size_t n_eval = floor_count(ratios.eval);
  const std::size_t n_test = floor_count(ratios.test);
  const std::size_t n_train = n - n_eval - n_test;

  DatasetBundle bundle;
  bundle.ratios = ratios;
  bundle.seed = seed;
  bundle.idioms = std::move(idioms);
  bundle.stats = std::move(stats);
  if (duplicates) bundle.stats.removed[Filter::kDuplicate] += duplicates;
  bundle.stats.output = n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = i < n_train ? 0 : i < n_train + n_eval ? 1 : 2;
    bundle.pairs[s].push_back(to_pair(unique[i]));
    bundle.triplets[s].push_back(std::move(unique[i]));
  }
  return bundle;
}

std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  std::set<std::string> vocabulary;
  json counts = json::object();
  for (Split s : kAllSplits) {
    const auto& triplets = bundle.triplets_of(s);
    const auto& pairs = bundle.pairs_of(s);
    std::string dt, dp, maps, prov;
    for (std::size_t i = 0; i < triplets.size(); ++i) {
      const MethodTriplet& t = triplets[i];
      dt += triplet_line(t) + "\n";
      dp += pair_line(pairs[i]) + "\n";
      maps += "# " + std::to_string(i) + "\n" + t.map.serialize();
      const Provenance& p = t.provenance;
      prov += json{{"project", p.project},
                   {"change_id", p.change_id},
                   {"round_index", p.round_index},
                   {"file_path", p.file_path},
                   {"signature_key", p.signature_key},
                   {"method_line_start", p.method_line_start},
                   {"span_approximate", p.span_approximate},
                   {"span", {t.span.start, t.span.end}}}
                  .dump() +
              "\n";
      for (const auto& tok : t.marked_source()) vocabulary.insert(tok);
      for (const auto& tok : t.r_nl) vocabulary.insert(tok);
      for (const auto& tok : t.m_r.tokens) vocabulary.insert(tok.text);
    }
    const std::string name = std::string(to_string(s)) + ".tsv";
    write_file_atomic(dir / "triplets" / name, dt);
    write_file_atomic(dir / "pairs" / name, dp);
    write_file_atomic(dir / "maps" / name, maps);
    write_file_atomic(dir / "provenance" / (std::string(to_string(s)) + ".jsonl"), prov);
    counts[std::string(to_string(s))] = triplets.size();
  }
  const std::string idioms = bundle.idioms.serialize();
  write_file_atomic(dir / "idioms.txt", idioms);
  json manifest = {
      {"schema_version", kBundleSchemaVersion},
      {"seed", bundle.seed},
      {"ratios", {bundle.ratios.train, bundle.ratios.eval, bundle.ratios.test}},
      {"max_tokens", bundle.max_tokens},
      {"counts", counts},
      {"idiom_count", bundle.idioms.size()},
      {"idiom_digest", "fnv1a64:" + fnv1a64_hex(idioms)},
      {"attrition", stats_to_json(bundle.stats)},
      {"vocabulary", vocabulary},
  };
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

DatasetBundle read_bundle(const std::filesystem::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw FormatError("bad manifest: " + std::string(e.what()));
  }
  const int version = manifest.value("schema_version", 0);
  if (version != kBundleSchemaVersion) throw SchemaVersionError(version, kBundleSchemaVersion);

  DatasetBundle bundle;
  bundle.seed = manifest.at("seed").get<std::uint64_t>();
  const auto& r = manifest.at("ratios");
  bundle.ratios = SplitRatios{r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()};
  bundle.max_tokens = manifest.at("max_tokens").get<std::size_t>();
  bundle.stats = stats_from_json(manifest.at("attrition"));
  bundle.idioms = IdiomSet::parse(read_file(dir / "idioms.txt"));

  for (Split s : kAllSplits) {
    const std::size_t si = static_cast<std::size_t>(s);
    const std::string name = std::string(to_string(s)) + ".tsv";
    const auto dt = split_lines(read_file(dir / "triplets" / name));
    const auto dp = split_lines(read_file(dir / "pairs" / name));
    const auto prov = split_lines(read_file(dir / "provenance" / (std::string(to_string(s)) + ".jsonl")));
    if (dt.size() != dp.size() || dt.size() != prov.size()) {
      throw FormatError("split " + std::string(to_string(s)) + ": D_t/D_p/provenance sizes differ");
    }
    std::vector<AbstractionMap> maps;
    std::string block;
    for (const auto& line : split_lines(read_file(dir / "maps" / name))) {
      if (line.rfind("# ", 0) == 0) {
        if (!maps.empty() || !block.empty()) maps.push_back(AbstractionMap::parse(block));
        block.clear();
        if (maps.empty() && line != "# 0") throw FormatError("map blocks out of order");
        continue;
      }
      block += line + "\n";
    }
    if (!dt.empty()) maps.push_back(AbstractionMap::parse(block));
    if (maps.size() != dt.size()) throw FormatError("map count does not match instances");

    for (std::size_t i = 0; i < dt.size(); ++i) {
      const auto fields = split_tabs(dt[i]);
      if (fields.size() != 3) throw FormatError("D_t line without 3 fields");
      MethodTriplet t;
      std::vector<std::string> source;
      std::optional<std::size_t> start, end;
      for (const auto& tok : split_tokens(fields[0])) {
        if (tok == kSpanStart) {
          start = source.size();
        } else if (tok == kSpanEnd) {
          end = source.size();
        } else {
          source.push_back(tok);
        }
      }
      if (!start || !end) throw FormatError("D_t source without span markers");
      t.m_s = method_from_texts(source);
      t.r_nl = split_tokens(fields[1]);
      t.m_r = method_from_texts(split_tokens(fields[2]));
      t.map = std::move(maps[i]);
      const json p = json::parse(prov[i]);
      t.provenance = Provenance{p.at("project"),       p.at("change_id"),
                                p.at("round_index"),   p.at("file_path"),
                                p.at("signature_key"), p.at("method_line_start"),
                                p.at("span_approximate")};
      t.span = TokenSpan{*start, *end, t.provenance.span_approximate};
      const auto pf = split_tabs(dp[i]);
      if (pf.size() != 2) throw FormatError("D_p line without 2 fields");
      bundle.pairs[si].push_back(PairInstance{split_tokens(pf[0]), split_tokens(pf[1])});
      bundle.triplets[si].push_back(std::move(t));
    }
  }
  return bundle;
}

}  // namespace crev
