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

#ifndef CREV_DECODER_H_
#define CREV_DECODER_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "crev/metrics.h"

namespace crev {

inline constexpr std::string_view kEndOfSequence = "</s>";
inline constexpr std::size_t kDefaultMaxLen = 110;

class Vocabulary {
 public:
  // The end-of-sequence token is always present.
  Vocabulary();
  explicit Vocabulary(std::span<const std::string> tokens);

  int add(const std::string& token);
  std::optional<int> find(std::string_view token) const;
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  int eos() const { return eos_; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  int eos_ = 0;
};

struct EncoderInputs {
  TokenSeq source;                // m_s
  std::optional<TokenSeq> comment;  // r_nl, for two-encoder models
};

// Next-token distribution. score() must be safe to call concurrently.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;
  virtual const Vocabulary& vocabulary() const = 0;
  // Log-probability for every vocabulary id given the decoded prefix.
  virtual std::vector<double> score(const EncoderInputs& inputs,
                                    std::span<const int> prefix) const = 0;
};

struct BeamHypothesis {
  std::vector<int> tokens;  // includes the end token when one was emitted
  double log_prob = 0;
  bool finished = false;

  bool operator==(const BeamHypothesis&) const = default;
};

// Keeps the k best hypotheses by total log-probability at every step.
// Finished hypotheses stay in the pool and compete for slots. Ties go to the
// lexicographically smaller id sequence. No length normalization. A
// hypothesis is finished on the end token or at max_len tokens.
std::vector<BeamHypothesis> beam_search(const SequenceModel& model, const EncoderInputs& inputs,
                                        std::size_t k, std::size_t max_len = kDefaultMaxLen);

// Drops the end token and maps ids to strings.
TokenSeq detokenize(const Vocabulary& vocab, const BeamHypothesis& h);

// Emits the source tokens, then the end token, with probability 1.
std::unique_ptr<SequenceModel> copy_baseline(const EncoderInputs& inputs);

struct Prediction {
  std::size_t instance_id = 0;
  std::vector<TokenSeq> candidates;  // rank order

  bool operator==(const Prediction&) const = default;
};

struct PredictionSet {
  int beam_size = 1;
  std::vector<Prediction> predictions;  // ascending instance id

  bool operator==(const PredictionSet&) const = default;
};

// Decodes every input at every beam size; inputs are decoded in parallel.
std::vector<PredictionSet> decode_all(
    const std::function<std::unique_ptr<SequenceModel>(const EncoderInputs&)>& make_model,
    std::span<const EncoderInputs> inputs, std::span<const int> beam_sizes,
    std::size_t max_len = kDefaultMaxLen, std::size_t threads = 0);

// Wire format: blocks opened by "# beam_size=K", then one line per
// candidate "instance_id<TAB>rank<TAB>tokens" with 1-based ranks. A file
// without headers is one block whose beam size is the largest rank seen.
std::string format_predictions(std::span<const PredictionSet> sets);
std::vector<PredictionSet> parse_predictions(std::string_view text);
std::vector<PredictionSet> load_external_predictions(const std::filesystem::path& path);

// Pairs predictions with references indexed by instance id.
std::vector<EvalInstance> attach_references(const PredictionSet& set,
                                            std::span<const TokenSeq> references);

}  // namespace crev

#endif  // CREV_DECODER_H_
