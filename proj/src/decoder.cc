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

#include "crev/decoder.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "crev/abstraction.h"
#include "crev/errors.h"
#include "crev/io.h"
#include "crev/parallel.h"

namespace crev {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool ranks_before(const BeamHypothesis& a, const BeamHypothesis& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  return a.tokens < b.tokens;
}

void check_distribution(const std::vector<double>& logp, std::size_t vocab, std::size_t step) {
  const std::string where = "step " + std::to_string(step) + ": ";
  if (logp.size() != vocab) {
    throw Error(where + "model returned " + std::to_string(logp.size()) + " scores for " +
                std::to_string(vocab) + " tokens");
  }
  double total = 0;
  for (double v : logp) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw Error(where + "model returned a non-finite log-probability");
    }
    total += std::exp(v);
  }
  if (std::abs(total - 1.0) > 1e-6) throw Error(where + "model distribution does not sum to 1");
}

class CopyModel : public SequenceModel {
 public:
  explicit CopyModel(const TokenSeq& source) : vocab_(source) {
    for (const auto& t : source) ids_.push_back(*vocab_.find(t));
  }
  const Vocabulary& vocabulary() const override { return vocab_; }
  std::vector<double> score(const EncoderInputs&, std::span<const int> prefix) const override {
    std::vector<double> out(vocab_.size(), kNegInf);
    out[prefix.size() < ids_.size() ? ids_[prefix.size()] : vocab_.eos()] = 0.0;
    return out;
  }

 private:
  Vocabulary vocab_;
  std::vector<int> ids_;
};

std::size_t parse_size(std::string_view s, std::string_view what, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw FormatError("line " + std::to_string(line) + ": bad " + std::string(what) + " '" +
                      std::string(s) + "'");
  }
  return v;
}

struct RawBlock {
  std::optional<int> beam_size;
  std::map<std::size_t, std::map<std::size_t, TokenSeq>> ranks;
};

PredictionSet finish_block(RawBlock& raw) {
  PredictionSet set;
  std::size_t max_rank = 0;
  for (auto& [id, ranks] : raw.ranks) {
    Prediction p;
    p.instance_id = id;
    std::size_t expected = 1;
    std::set<TokenSeq> distinct;
    for (auto& [rank, tokens] : ranks) {
      if (rank != expected) {
        throw FormatError("instance " + std::to_string(id) + ": rank gap at " +
                          std::to_string(expected));
      }
      ++expected;
      if (!distinct.insert(tokens).second) {
        throw FormatError("instance " + std::to_string(id) + ": duplicate candidate");
      }
      p.candidates.push_back(std::move(tokens));
    }
    max_rank = std::max(max_rank, ranks.size());
    set.predictions.push_back(std::move(p));
  }
  set.beam_size = raw.beam_size ? *raw.beam_size : static_cast<int>(std::max<std::size_t>(1, max_rank));
  if (max_rank > static_cast<std::size_t>(set.beam_size)) {
    throw FormatError("rank " + std::to_string(max_rank) + " exceeds beam size " +
                      std::to_string(set.beam_size));
  }
  return set;
}

}  // namespace

Vocabulary::Vocabulary() { eos_ = add(std::string(kEndOfSequence)); }

Vocabulary::Vocabulary(std::span<const std::string> tokens) : Vocabulary() {
  for (const auto& t : tokens) add(t);
}

int Vocabulary::add(const std::string& token) {
  auto [it, inserted] = index_.emplace(token, static_cast<int>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<BeamHypothesis> beam_search(const SequenceModel& model, const EncoderInputs& inputs,
                                        std::size_t k, std::size_t max_len) {
  if (k == 0) throw InvalidArgument("beam size must be positive");
  if (max_len == 0) throw InvalidArgument("max_len must be positive");
  const Vocabulary& vocab = model.vocabulary();
  const int eos = vocab.eos();

  std::vector<BeamHypothesis> pool{BeamHypothesis{}};
  for (std::size_t step = 1; step <= max_len; ++step) {
    std::vector<BeamHypothesis> next;
    bool expanded = false;
    for (const auto& h : pool) {
      if (h.finished) {
        next.push_back(h);
        continue;
      }
      expanded = true;
      std::vector<double> logp;
      try {
        logp = model.score(inputs, h.tokens);
      } catch (const std::exception& e) {
        throw Error("step " + std::to_string(step) + ": model scoring failed: " + e.what());
      }
      check_distribution(logp, vocab.size(), step);
      for (std::size_t id = 0; id < logp.size(); ++id) {
        if (logp[id] == kNegInf) continue;
        BeamHypothesis child;
        child.tokens = h.tokens;
        child.tokens.push_back(static_cast<int>(id));
        child.log_prob = h.log_prob + logp[id];
        child.finished = static_cast<int>(id) == eos || child.tokens.size() >= max_len;
        next.push_back(std::move(child));
      }
    }
    if (!expanded) break;
    std::sort(next.begin(), next.end(), ranks_before);
    if (next.size() > k) next.resize(k);
    pool = std::move(next);
  }
  return pool;
}

TokenSeq detokenize(const Vocabulary& vocab, const BeamHypothesis& h) {
  TokenSeq out;
  for (int id : h.tokens) {
    if (id != vocab.eos()) out.push_back(vocab.token(id));
  }
  return out;
}

std::unique_ptr<SequenceModel> copy_baseline(const EncoderInputs& inputs) {
  return std::make_unique<CopyModel>(inputs.source);
}

std::vector<PredictionSet> decode_all(
    const std::function<std::unique_ptr<SequenceModel>(const EncoderInputs&)>& make_model,
    std::span<const EncoderInputs> inputs, std::span<const int> beam_sizes, std::size_t max_len,
    std::size_t threads) {
  std::vector<PredictionSet> sets;
  for (int k : beam_sizes) {
    if (k < 1) throw InvalidArgument("beam size must be positive");
    PredictionSet set;
    set.beam_size = k;
    set.predictions.resize(inputs.size());
    sets.push_back(std::move(set));
  }
  parallel_for(inputs.size(), threads, [&](std::size_t i) {
    const auto model = make_model(inputs[i]);
    for (auto& set : sets) {
      Prediction& p = set.predictions[i];
      p.instance_id = i;
      for (const auto& h : beam_search(*model, inputs[i], set.beam_size, max_len)) {
        p.candidates.push_back(detokenize(model->vocabulary(), h));
      }
    }
  });
  return sets;
}

std::string format_predictions(std::span<const PredictionSet> sets) {
  std::string out;
  for (const auto& set : sets) {
    out += "# beam_size=" + std::to_string(set.beam_size) + "\n";
    for (const auto& p : set.predictions) {
      for (std::size_t r = 0; r < p.candidates.size(); ++r) {
        out += std::to_string(p.instance_id) + "\t" + std::to_string(r + 1) + "\t" +
               join_tokens(p.candidates[r]) + "\n";
      }
    }
  }
  return out;
}

std::vector<PredictionSet> parse_predictions(std::string_view text) {
  std::vector<PredictionSet> sets;
  std::optional<RawBlock> block;
  std::set<int> beams_seen;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    const std::size_t lineno = n + 1;
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view kKey = "# beam_size=";
      if (line.rfind(kKey, 0) != 0) continue;
      if (block) sets.push_back(finish_block(*block));
      const std::size_t k = parse_size(std::string_view(line).substr(kKey.size()), "beam size", lineno);
      if (k == 0) throw FormatError("line " + std::to_string(lineno) + ": beam size 0");
      if (!beams_seen.insert(static_cast<int>(k)).second) {
        throw FormatError("beam size " + std::to_string(k) + " appears twice");
      }
      block = RawBlock{static_cast<int>(k), {}};
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw FormatError("line " + std::to_string(lineno) + ": expected 3 tab-separated fields");
    }
    const std::size_t id = parse_size(fields[0], "instance id", lineno);
    const std::size_t rank = parse_size(fields[1], "rank", lineno);
    if (rank == 0) throw FormatError("line " + std::to_string(lineno) + ": ranks start at 1");
    if (!block) block = RawBlock{};
    auto [it, inserted] = block->ranks[id].emplace(rank, split_tokens(fields[2]));
    if (!inserted) {
      throw FormatError("line " + std::to_string(lineno) + ": duplicate (instance " +
                        std::to_string(id) + ", rank " + std::to_string(rank) + ")");
    }
  }
  if (block) sets.push_back(finish_block(*block));
  return sets;
}

std::vector<PredictionSet> load_external_predictions(const std::filesystem::path& path) {
  return parse_predictions(read_file(path));
}

std::vector<EvalInstance> attach_references(const PredictionSet& set,
                                            std::span<const TokenSeq> references) {
  std::vector<EvalInstance> out;
  out.reserve(set.predictions.size());
  for (const auto& p : set.predictions) {
    if (p.instance_id >= references.size()) {
      throw FormatError("prediction for unknown instance " + std::to_string(p.instance_id));
    }
    out.push_back(EvalInstance{references[p.instance_id], p.candidates, set.beam_size});
  }
  return out;
}

}  // namespace crev
