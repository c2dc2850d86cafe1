// Copyright 2026 The Perio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Records are plain dicts keyed like the corpus JSON
// ("status", "stage", "grade", "extent", "subtype"); corpora travel as JSONL
// strings so that Python code can reuse the on-disk format directly.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "perio/corpus.h"
#include "perio/error.h"
#include "perio/evaluation.h"
#include "perio/extraction.h"
#include "perio/normalization.h"
#include "perio/pipeline.h"
#include "perio/synthesis.h"
#include "perio/tokenizer.h"

namespace py = pybind11;

namespace perio {
namespace {

py::object RecordToPy(const std::optional<DiagnosisRecord>& record) {
  if (!record) return py::none();
  py::dict d;
  for (Dimension dim : kAllDimensions) {
    auto v = record->Get(dim);
    d[py::str(std::string(DimensionKey(dim)))] =
        v ? py::object(py::str(std::string(Name(*v)))) : py::none();
  }
  return std::move(d);
}

Dimension DimensionArg(const std::string& key) {
  auto d = ParseDimension(key);
  if (!d) throw ConfigError("unknown dimension \"" + key + "\"");
  return *d;
}

DiagnosisRecord RecordFromPy(const py::dict& d) {
  DiagnosisRecord r;
  bool has_status = false;
  for (auto item : d) {
    const std::string key = py::cast<std::string>(item.first);
    const Dimension dim = DimensionArg(key);
    if (item.second.is_none()) continue;
    const std::string value = py::cast<std::string>(item.second);
    auto label = ParseLabel(dim, value);
    if (!label) throw ConfigError("bad " + key + " value \"" + value + "\"");
    switch (dim) {
      case Dimension::kStatus:
        r.status = std::get<PeriodontalStatus>(*label);
        has_status = true;
        break;
      case Dimension::kStage:
        r.stage = std::get<Stage>(*label);
        break;
      case Dimension::kGrade:
        r.grade = std::get<Grade>(*label);
        break;
      case Dimension::kExtent:
        r.extent = std::get<Extent>(*label);
        break;
      case Dimension::kSubtype:
        r.subtype = std::get<Subtype>(*label);
        break;
    }
  }
  if (!has_status) throw ConfigError("record has no status");
  const Validation v = ValidateRecord(r);
  if (!v.ok()) throw DataError(v.violations.front());
  return r;
}

ExtractorConfig ModeArg(const std::string& mode) {
  auto m = ParseExtractionMode(mode);
  if (!m) throw ConfigError("unknown extraction mode \"" + mode + "\"");
  ExtractorConfig c;
  c.mode = *m;
  return c;
}

py::dict Extract(const std::string& text, const std::string& mode) {
  const Extraction e = ExtractEntities(text, ModeArg(mode));
  py::list spans;
  for (const auto& s : e.spans) {
    py::dict span;
    span["dimension"] = std::string(DimensionKey(s.dimension()));
    span["value"] = std::string(Name(s.value));
    span["start"] = s.start;
    span["end"] = s.end;
    span["text"] = s.raw_text;
    spans.append(std::move(span));
  }
  py::dict out;
  out["spans"] = std::move(spans);
  out["hedged"] = e.hedged();
  out["record"] = RecordToPy(DeriveRecord(text, e.spans));
  return out;
}

std::vector<RecordPair> Pairs(const std::string& gold, const std::string& pred) {
  const auto g = ParseCorpus(gold, "gold");
  const auto p = ParseCorpus(pred, "pred");
  std::vector<RecordPair> out;
  for (const auto& a : AlignCorpora(g, p)) out.push_back(a.records);
  return out;
}

}  // namespace
}  // namespace perio

PYBIND11_MODULE(_perio, m) {
  using namespace perio;
  m.doc() = "Periodontal diagnosis extraction, synthesis and evaluation";

  auto base = py::register_exception<Error>(m, "PerioError");
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<TransportError>(m, "TransportError", base.ptr());

  m.def(
      "tokenize",
      [](const std::string& text) {
        std::vector<std::tuple<std::size_t, std::size_t, std::string>> out;
        for (const auto& t : Tokenize(text)) out.emplace_back(t.start, t.end, t.text);
        return out;
      },
      py::arg("text"), "Tokens as (start, end, text) with UTF-8 byte offsets.");

  m.def("extract", &Extract, py::arg("text"), py::arg("mode") = "strict",
        "Spans, hedge flag and adjudicated record for one note.");

  m.def(
      "normalize_value",
      [](const std::string& dimension, const std::string& raw) -> py::object {
        auto v = NormalizeValue(DimensionArg(dimension), raw);
        if (!v) return py::none();
        return py::str(std::string(Name(*v)));
      },
      py::arg("dimension"), py::arg("raw"));

  m.def(
      "adjudicate",
      [](const std::vector<py::dict>& records) {
        std::vector<DiagnosisRecord> rs;
        for (const auto& d : records) rs.push_back(RecordFromPy(d));
        return RecordToPy(Adjudicate(rs));
      },
      py::arg("records"));

  m.def(
      "classify_guideline",
      [](const py::dict& record) {
        return std::string(Name(ClassifyGuidelineVersion(RecordFromPy(record))));
      },
      py::arg("record"));

  m.def(
      "select_templates",
      [](const std::string& corpus, std::size_t per_category, std::uint64_t seed) {
        const auto notes = ParseCorpus(corpus, "corpus");
        return SerializeCorpus(TemplatesToCorpus(SelectSeedTemplates(notes, per_category, seed)));
      },
      py::arg("corpus"), py::arg("per_category") = 15, py::arg("seed"));

  m.def(
      "generate_offline",
      [](const std::string& templates, std::size_t variants, std::uint64_t seed,
         double typo_rate, double informal_format_rate, double anchor_variation_rate,
         double multi_diagnosis_rate, double distractor_extent_rate) {
        PerturbationSpec spec{typo_rate,          informal_format_rate,
                              anchor_variation_rate, multi_diagnosis_rate,
                              distractor_extent_rate, seed};
        const auto t = TemplatesFromCorpus(ParseCorpus(templates, "templates"));
        return SerializeCorpus(GenerateOffline(t, variants, spec));
      },
      py::arg("templates"), py::arg("variants") = 10, py::arg("seed"),
      py::arg("typo_rate") = 0.0, py::arg("informal_format_rate") = 0.0,
      py::arg("anchor_variation_rate") = 0.0, py::arg("multi_diagnosis_rate") = 0.0,
      py::arg("distractor_extent_rate") = 0.0);

  m.def(
      "predict",
      [](const std::string& corpus, const std::string& mode, std::size_t jobs) {
        const auto notes = ParseCorpus(corpus, "corpus");
        GrammarExtractor extractor(ModeArg(mode));
        py::gil_scoped_release release;
        return SerializeCorpus(PredictCorpus(notes, extractor, jobs));
      },
      py::arg("corpus"), py::arg("mode") = "strict", py::arg("jobs") = 1);

  m.def(
      "split",
      [](const std::string& corpus, const std::string& ratios, std::uint64_t seed) {
        const auto notes = ParseCorpus(corpus, "corpus");
        return ManifestToJson(SplitCorpus(notes, ParseRatios(ratios), seed));
      },
      py::arg("corpus"), py::arg("ratios") = "8:1:1", py::arg("seed"));

  m.def(
      "evaluate",
      [](const std::string& gold, const std::string& pred, const std::string& format) {
        const auto g = ParseCorpus(gold, "gold");
        const auto p = ParseCorpus(pred, "pred");
        const auto tables = EvaluateBySite(AlignCorpora(g, p));
        return RenderReport(tables, ParseReportFormat(format));
      },
      py::arg("gold"), py::arg("pred"), py::arg("format") = "json");

  m.def(
      "learning_curve",
      [](const std::string& gold, const std::string& pred, std::size_t step,
         double epsilon, std::size_t window, const std::string& dimension,
         std::uint64_t seed) {
        CurveOptions o;
        o.step = step;
        o.epsilon = epsilon;
        o.window = window;
        o.dimension = DimensionArg(dimension);
        o.seed = seed;
        return RenderCurveData(ComputeLearningCurve(Pairs(gold, pred), o));
      },
      py::arg("gold"), py::arg("pred"), py::arg("step") = 30, py::arg("epsilon") = 0.01,
      py::arg("window") = 2, py::arg("dimension") = "status", py::arg("seed"));
}
