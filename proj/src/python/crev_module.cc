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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "crev/abstraction.h"
#include "crev/comments.h"
#include "crev/dataset.h"
#include "crev/decoder.h"
#include "crev/errors.h"
#include "crev/java_lexer.h"
#include "crev/methods.h"
#include "crev/metrics.h"
#include "crev/pipeline.h"
#include "crev/porter.h"

namespace py = pybind11;

namespace {

using Entries = std::vector<std::pair<std::string, std::string>>;

crev::AbstractionMap map_from_entries(const Entries& entries) {
  std::string text;
  for (const auto& [id, raw] : entries) text += id + "\t" + crev::escape_field(raw) + "\n";
  return crev::AbstractionMap::parse(text);
}

// Adapts a Python callable (prefix ids -> log-probabilities) to the model
// interface. Decoding through it is single-threaded.
class CallableModel : public crev::SequenceModel {
 public:
  CallableModel(const std::vector<std::string>& tokens,
                std::function<std::vector<double>(const std::vector<int>&)> fn)
      : vocab_(tokens), fn_(std::move(fn)) {}
  const crev::Vocabulary& vocabulary() const override { return vocab_; }
  std::vector<double> score(const crev::EncoderInputs&, std::span<const int> prefix) const override {
    py::gil_scoped_acquire gil;
    return fn_(std::vector<int>(prefix.begin(), prefix.end()));
  }

 private:
  crev::Vocabulary vocab_;
  std::function<std::vector<double>(const std::vector<int>&)> fn_;
};

py::dict row_to_dict(const crev::MetricsRow& r) {
  auto summary = [](const crev::Summary& s) {
    py::dict d;
    d["mean"] = s.mean;
    d["median"] = s.median;
    d["stdev"] = s.stdev;
    return d;
  };
  py::dict d;
  d["beam_size"] = r.beam_size;
  d["instance_count"] = r.instance_count;
  d["perfect_count"] = r.perfect_count;
  d["perfect_pct"] = r.perfect_pct;
  d["bleu"] = summary(r.bleu);
  d["levenshtein"] = summary(r.levenshtein);
  return d;
}

}  // namespace

PYBIND11_MODULE(_crev, m) {
  m.doc() = "Code review mining, abstraction, dataset and evaluation primitives.";

  auto& error = py::register_exception<crev::Error>(m, "CrevError");
  py::register_exception<crev::ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<crev::FormatError>(m, "FormatError", error.ptr());
  py::register_exception<crev::UnmappableTokenError>(m, "UnmappableTokenError", error.ptr());

  m.attr("END_OF_SEQUENCE") = std::string(crev::kEndOfSequence);
  m.attr("DEFAULT_MAX_LEN") = crev::kDefaultMaxLen;

  m.def("code_tokens", &crev::code_token_texts, py::arg("source"),
        "Java tokens of `source` with comments removed.");
  m.def("porter_stem", &crev::porter_stem, py::arg("word"));

  m.def(
      "extract_methods",
      [](const std::string& path, const std::string& content) {
        py::list out;
        for (const auto& r : crev::extract_methods(crev::FileVersion{path, content, ""})) {
          py::dict d;
          d["name"] = r.name;
          d["signature_key"] = r.signature_key;
          d["parameter_arity"] = r.parameter_arity;
          d["line_start"] = r.line_start;
          d["line_end"] = r.line_end;
          d["source_text"] = r.source_text;
          d["has_body"] = r.has_body;
          out.append(d);
        }
        return out;
      },
      py::arg("path"), py::arg("content"));

  m.def(
      "abstract_method",
      [](const std::string& source, const std::vector<std::string>& idioms) {
        crev::AbstractionMap map;
        const crev::IdiomSet set(std::set<std::string>(idioms.begin(), idioms.end()));
        auto method = crev::abstract_source(source, set, map);
        return std::make_tuple(method.texts(), map.entries());
      },
      py::arg("source"), py::arg("idioms") = std::vector<std::string>{},
      "Returns (abstract tokens, [(id, raw), ...]).");

  m.def(
      "concretize",
      [](const std::vector<std::string>& tokens, const Entries& entries) {
        return crev::concretize(std::span<const std::string>(tokens), map_from_entries(entries));
      },
      py::arg("tokens"), py::arg("entries"));

  m.def(
      "abstract_comment",
      [](const std::string& body, const Entries& entries) {
        return crev::normalize_comment(crev::abstract_comment(body, map_from_entries(entries)));
      },
      py::arg("body"), py::arg("entries"), "Abstracted and normalized comment words.");

  m.def(
      "heuristic_relevance",
      [](const std::string& body) {
        const auto v = crev::heuristic_relevance(body);
        return std::make_tuple(std::string(crev::to_string(v.relevance)), v.fired_rule);
      },
      py::arg("body"));

  m.def(
      "bleu4",
      [](const std::vector<std::string>& c, const std::vector<std::string>& r) {
        return crev::bleu4(c, r);
      },
      py::arg("candidate"), py::arg("reference"));
  m.def(
      "normalized_levenshtein",
      [](const std::vector<std::string>& c, const std::vector<std::string>& r) {
        return crev::normalized_levenshtein(c, r);
      },
      py::arg("candidate"), py::arg("reference"));

  m.def(
      "evaluate",
      [](const std::vector<std::vector<std::string>>& references,
         const std::vector<std::vector<std::vector<std::string>>>& candidates, int beam_size) {
        if (references.size() != candidates.size()) {
          throw crev::InvalidArgument("references and candidates differ in length");
        }
        std::vector<crev::EvalInstance> instances;
        for (std::size_t i = 0; i < references.size(); ++i) {
          instances.push_back(crev::EvalInstance{references[i], candidates[i], beam_size});
        }
        return row_to_dict(crev::evaluate(instances));
      },
      py::arg("references"), py::arg("candidates"), py::arg("beam_size"));

  m.def(
      "beam_search",
      [](const std::vector<std::string>& vocabulary,
         std::function<std::vector<double>(const std::vector<int>&)> score, std::size_t k,
         std::size_t max_len) {
        CallableModel model(vocabulary, std::move(score));
        py::list out;
        for (const auto& h : crev::beam_search(model, crev::EncoderInputs{}, k, max_len)) {
          out.append(py::make_tuple(h.tokens, h.log_prob));
        }
        return out;
      },
      py::arg("vocabulary"), py::arg("score"), py::arg("k"),
      py::arg("max_len") = crev::kDefaultMaxLen,
      "Id 0 is the end token; vocabulary lists the remaining tokens. Returns "
      "[(ids, log_prob), ...] best first.");

  m.def(
      "parse_predictions",
      [](const std::string& text) {
        py::dict out;
        for (const auto& set : crev::parse_predictions(text)) {
          py::dict block;
          for (const auto& p : set.predictions) block[py::int_(p.instance_id)] = p.candidates;
          out[py::int_(set.beam_size)] = block;
        }
        return out;
      },
      py::arg("text"), "Returns {beam_size: {instance_id: [candidate tokens, ...]}}.");

  m.def(
      "format_predictions",
      [](const std::map<int, std::map<std::size_t, std::vector<std::vector<std::string>>>>& blocks) {
        std::vector<crev::PredictionSet> sets;
        for (const auto& [k, preds] : blocks) {
          crev::PredictionSet set;
          set.beam_size = k;
          for (const auto& [id, cands] : preds) set.predictions.push_back({id, cands});
          sets.push_back(std::move(set));
        }
        return crev::format_predictions(sets);
      },
      py::arg("blocks"));

  m.def(
      "read_pairs",
      [](const std::filesystem::path& bundle, const std::string& split) {
        const auto b = crev::read_bundle(bundle);
        for (auto s : crev::kAllSplits) {
          if (crev::to_string(s) != split) continue;
          std::vector<std::tuple<std::vector<std::string>, std::vector<std::string>>> out;
          for (const auto& p : b.pairs_of(s)) out.emplace_back(p.source, p.target);
          return out;
        }
        throw crev::InvalidArgument("unknown split '" + split + "'");
      },
      py::arg("bundle"), py::arg("split"), "[(m_s tokens, m_r tokens), ...] of one split.");

  m.def(
      "run_subcommand",
      [](const std::string& name, std::optional<std::filesystem::path> config,
         std::optional<std::filesystem::path> out, std::optional<std::uint64_t> seed,
         std::optional<std::filesystem::path> fixture_dir) {
        crev::PipelineConfig c;
        if (config) c = crev::load_config(*config);
        if (out) c.out_dir = *out;
        if (seed) c.seed = *seed;
        crev::validate(c);
        crev::OutputLock lock(c.out_dir);
        return crev::run_subcommand(name, c, fixture_dir).summary;
      },
      py::arg("name"), py::arg("config") = py::none(), py::arg("out") = py::none(),
      py::arg("seed") = py::none(), py::arg("fixture_dir") = py::none());
}
