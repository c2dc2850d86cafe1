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

#include "perio/corpus.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "perio/error.h"
#include "perio/random.h"

namespace perio {
namespace {

using Json = nlohmann::ordered_json;

template <typename E, std::size_t N>
std::optional<E> FindName(std::string_view s, const E (&values)[N]) {
  for (E v : values) {
    if (Name(v) == s) return v;
  }
  return std::nullopt;
}

constexpr Provenance kProvenances[] = {
    Provenance::kReal, Provenance::kLlmGenerated,
    Provenance::kOfflineGenerated};
constexpr AnnotationSource kSources[] = {AnnotationSource::kGold,
                                         AnnotationSource::kPredicted,
                                         AnnotationSource::kEmbedded};

Json LabelOrNull(const std::optional<Label>& label) {
  if (!label) return nullptr;
  return std::string(Name(*label));
}

Json RecordToJson(const DiagnosisRecord& r) {
  Json j = Json::object();
  for (Dimension d : kAllDimensions) {
    j[std::string(DimensionKey(d))] = LabelOrNull(r.Get(d));
  }
  return j;
}

Json MetaToJson(const PatientMeta& m) {
  return Json{{"age", m.age},
              {"natural_teeth_count", m.natural_teeth_count},
              {"has_full_mouth_radiographs", m.has_full_mouth_radiographs},
              {"has_periodontal_charting", m.has_periodontal_charting}};
}

Json QaToJson(const QaVerdict& qa) {
  Json items = Json::array();
  for (const auto& d : qa.discrepancies) {
    items.push_back({{"dimension", std::string(DimensionKey(d.dimension))},
                     {"embedded", LabelOrNull(d.embedded)},
                     {"observed", LabelOrNull(d.observed)},
                     {"proposed", LabelOrNull(d.proposed)}});
  }
  return Json{{"consistent", qa.consistent()},
              {"autofixed", qa.autofixed},
              {"discrepancies", std::move(items)}};
}

// Reads fields of one corpus line and reports problems with line context.
class LineReader {
 public:
  LineReader(const std::string& source, std::size_t line)
      : source_(source), line_(line) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw FormatError(source_, line_, what);
  }

  const Json& Field(const Json& obj, const char* key) const {
    auto it = obj.find(key);
    if (it == obj.end()) Fail(std::string("missing key \"") + key + "\"");
    return *it;
  }

  std::string String(const Json& obj, const char* key) const {
    const Json& v = Field(obj, key);
    if (!v.is_string()) Fail(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
  }

  template <typename T>
  T Number(const Json& obj, const char* key) const {
    const Json& v = Field(obj, key);
    if (!v.is_number_integer()) {
      Fail(std::string("\"") + key + "\" must be an integer");
    }
    return v.get<T>();
  }

  bool Bool(const Json& obj, const char* key) const {
    const Json& v = Field(obj, key);
    if (!v.is_boolean()) Fail(std::string("\"") + key + "\" must be a boolean");
    return v.get<bool>();
  }

  Dimension ParseDim(const Json& v) const {
    if (!v.is_string()) Fail("dimension must be a string");
    auto d = ParseDimension(v.get<std::string>());
    if (!d) Fail("unknown dimension \"" + v.get<std::string>() + "\"");
    return *d;
  }

  std::optional<Label> OptLabel(Dimension d, const Json& obj,
                                const char* key) const {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) Fail(std::string("\"") + key + "\" must be a string");
    auto label = ParseLabel(d, it->get<std::string>());
    if (!label) {
      Fail("unknown " + std::string(DimensionKey(d)) + " value \"" +
           it->get<std::string>() + "\"");
    }
    return label;
  }

  DiagnosisRecord Record(const Json& j) const {
    if (!j.is_object()) Fail("record must be an object or null");
    auto status = OptLabel(Dimension::kStatus, j, "status");
    if (!status) Fail("record is missing \"status\"");
    DiagnosisRecord r;
    r.status = std::get<PeriodontalStatus>(*status);
    if (auto v = OptLabel(Dimension::kStage, j, "stage")) {
      r.stage = std::get<Stage>(*v);
    }
    if (auto v = OptLabel(Dimension::kGrade, j, "grade")) {
      r.grade = std::get<Grade>(*v);
    }
    if (auto v = OptLabel(Dimension::kExtent, j, "extent")) {
      r.extent = std::get<Extent>(*v);
    }
    if (auto v = OptLabel(Dimension::kSubtype, j, "subtype")) {
      r.subtype = std::get<Subtype>(*v);
    }
    Validation val = ValidateRecord(r);
    if (!val.ok()) Fail("invalid record: " + val.violations.front());
    return r;
  }

  PatientMeta Meta(const Json& j) const {
    if (!j.is_object()) Fail("meta must be an object");
    PatientMeta m;
    m.age = Number<int>(j, "age");
    m.natural_teeth_count = Number<int>(j, "natural_teeth_count");
    m.has_full_mouth_radiographs = Bool(j, "has_full_mouth_radiographs");
    m.has_periodontal_charting = Bool(j, "has_periodontal_charting");
    if (auto err = CheckMeta(m)) Fail(*err);
    return m;
  }

  EntitySpan Span(const Json& j, std::string_view text,
                  const std::string& note_id) const {
    if (!j.is_object()) Fail("span must be an object");
    Dimension d = ParseDim(Field(j, "dimension"));
    auto value = OptLabel(d, j, "value");
    if (!value) Fail("span is missing \"value\"");
    EntitySpan span{*value, Number<std::size_t>(j, "start"),
                    Number<std::size_t>(j, "end"), {}};
    auto it = j.find("text");
    bool has_text = it != j.end() && !it->is_null();
    if (has_text) {
      if (!it->is_string()) Fail("span \"text\" must be a string");
      span.raw_text = it->get<std::string>();
    } else if (span.start < span.end && span.end <= text.size()) {
      span.raw_text = std::string(text.substr(span.start, span.end - span.start));
    }
    if (auto err = CheckSpan(text, span)) {
      throw DataError(source_ + ":" + std::to_string(line_) + ": note \"" +
                      note_id + "\": " + *err);
    }
    return span;
  }

  QaVerdict Qa(const Json& j) const {
    if (!j.is_object()) Fail("qa must be an object");
    QaVerdict qa;
    if (auto it = j.find("autofixed"); it != j.end()) {
      qa.autofixed = it->is_boolean() && it->get<bool>();
    }
    auto it = j.find("discrepancies");
    if (it == j.end()) return qa;
    if (!it->is_array()) Fail("qa.discrepancies must be an array");
    for (const Json& item : *it) {
      LabelDiscrepancy d;
      d.dimension = ParseDim(Field(item, "dimension"));
      d.embedded = OptLabel(d.dimension, item, "embedded");
      d.observed = OptLabel(d.dimension, item, "observed");
      d.proposed = OptLabel(d.dimension, item, "proposed");
      qa.discrepancies.push_back(std::move(d));
    }
    return qa;
  }

 private:
  const std::string& source_;
  std::size_t line_;
};

}  // namespace

std::string_view Name(Provenance p) {
  switch (p) {
    case Provenance::kReal: return "Real";
    case Provenance::kLlmGenerated: return "LLMGenerated";
    case Provenance::kOfflineGenerated: return "OfflineGenerated";
  }
  return "";
}

std::string_view Name(AnnotationSource s) {
  switch (s) {
    case AnnotationSource::kGold: return "Gold";
    case AnnotationSource::kPredicted: return "Predicted";
    case AnnotationSource::kEmbedded: return "Embedded";
  }
  return "";
}

std::string_view Name(Partition p) {
  switch (p) {
    case Partition::kTrain: return "train";
    case Partition::kValidation: return "validation";
    case Partition::kTest: return "test";
  }
  return "";
}

bool CohortEligible(const PatientMeta& m) {
  return m.age >= 16 && m.natural_teeth_count >= 10 &&
         m.has_full_mouth_radiographs && m.has_periodontal_charting;
}

std::optional<std::string> CheckMeta(const PatientMeta& m) {
  if (m.age < 0) return "age must be non-negative";
  if (m.natural_teeth_count < 0 || m.natural_teeth_count > 32) {
    return "natural_teeth_count must be within [0, 32]";
  }
  return std::nullopt;
}

std::string ToJsonLine(const AnnotatedNote& n) {
  Json spans = Json::array();
  for (const auto& s : n.spans) {
    spans.push_back({{"dimension", std::string(DimensionKey(s.dimension()))},
                     {"value", std::string(Name(s.value))},
                     {"start", s.start},
                     {"end", s.end},
                     {"text", s.raw_text}});
  }
  Json j = {{"note_id", n.note.note_id},
            {"site_id", n.note.site_id},
            {"text", n.note.text},
            {"provenance", std::string(Name(n.note.provenance))},
            {"annotation_source", std::string(Name(n.annotation_source))},
            {"spans", std::move(spans)},
            {"record", n.record ? RecordToJson(*n.record) : Json(nullptr)}};
  if (n.meta) j["meta"] = MetaToJson(*n.meta);
  if (n.guideline) j["guideline"] = std::string(Name(*n.guideline));
  if (n.qa) j["qa"] = QaToJson(*n.qa);
  if (!n.flags.empty()) j["flags"] = n.flags;
  return j.dump();
}

AnnotatedNote ParseJsonLine(std::string_view line, const std::string& source,
                            std::size_t line_number) {
  LineReader in(source, line_number);
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    in.Fail(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) in.Fail("record must be a JSON object");

  AnnotatedNote out;
  out.note.note_id = in.String(j, "note_id");
  if (out.note.note_id.empty()) in.Fail("note_id must be non-empty");
  out.note.site_id = in.String(j, "site_id");
  out.note.text = in.String(j, "text");

  std::string prov = in.String(j, "provenance");
  auto p = FindName(prov, kProvenances);
  if (!p) in.Fail("unknown provenance \"" + prov + "\"");
  out.note.provenance = *p;

  std::string src = in.String(j, "annotation_source");
  auto s = FindName(src, kSources);
  if (!s) in.Fail("unknown annotation_source \"" + src + "\"");
  out.annotation_source = *s;

  const Json& spans = in.Field(j, "spans");
  if (!spans.is_array()) in.Fail("\"spans\" must be an array");
  for (const Json& sj : spans) {
    out.spans.push_back(in.Span(sj, out.note.text, out.note.note_id));
  }
  if (auto err = CheckSpans(out.note.text, out.spans)) {
    throw DataError(source + ":" + std::to_string(line_number) + ": note \"" +
                    out.note.note_id + "\": " + *err);
  }

  if (auto it = j.find("record"); it != j.end() && !it->is_null()) {
    out.record = in.Record(*it);
  }
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    out.meta = in.Meta(*it);
  }
  if (auto it = j.find("guideline"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) in.Fail("\"guideline\" must be a string");
    out.guideline = ParseGuidelineVersion(it->get<std::string>());
    if (!out.guideline) in.Fail("unknown guideline version");
  }
  if (auto it = j.find("qa"); it != j.end() && !it->is_null()) {
    out.qa = in.Qa(*it);
  }
  if (auto it = j.find("flags"); it != j.end()) {
    if (!it->is_array()) in.Fail("\"flags\" must be an array");
    for (const Json& f : *it) {
      if (!f.is_string()) in.Fail("flags must be strings");
      out.flags.push_back(f.get<std::string>());
    }
  }
  return out;
}

std::vector<AnnotatedNote> ParseCorpus(std::string_view contents,
                                       const std::string& source) {
  std::vector<AnnotatedNote> notes;
  std::set<std::string, std::less<>> seen;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    AnnotatedNote note = ParseJsonLine(line, source, line_number);
    if (!seen.insert(note.note.note_id).second) {
      throw DataError(source + ":" + std::to_string(line_number) +
                      ": duplicate note_id \"" + note.note.note_id + "\"");
    }
    notes.push_back(std::move(note));
  }
  return notes;
}

std::vector<AnnotatedNote> ReadCorpus(const std::filesystem::path& path) {
  return ParseCorpus(ReadFile(path), path.string());
}

std::string SerializeCorpus(std::span<const AnnotatedNote> notes) {
  std::string out;
  for (const auto& n : notes) {
    out += ToJsonLine(n);
    out += '\n';
  }
  return out;
}

void WriteCorpus(std::span<const AnnotatedNote> notes,
                 const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeCorpus(notes));
}

std::map<std::string, PatientMeta> ReadMetaFile(
    const std::filesystem::path& path) {
  const std::string source = path.string();
  const std::string contents = ReadFile(path);
  std::map<std::string, PatientMeta> out;
  std::istringstream in(contents);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    LineReader reader(source, line_number);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      reader.Fail(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) reader.Fail("metadata line must be a JSON object");
    std::string id = reader.String(j, "note_id");
    if (!out.emplace(id, reader.Meta(j)).second) {
      throw DataError(source + ":" + std::to_string(line_number) +
                      ": duplicate note_id \"" + id + "\"");
    }
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() +
                ": " + ec.message());
  }
}

SplitRatios ParseRatios(std::string_view spec) {
  std::vector<double> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t colon = spec.find(':', pos);
    std::string_view part = spec.substr(
        pos, colon == std::string_view::npos ? spec.npos : colon - pos);
    double v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw ConfigError("invalid ratio specification \"" + std::string(spec) +
                        "\"");
    }
    parts.push_back(v);
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() != 3) {
    throw ConfigError("ratios need three parts (train:validation:test)");
  }
  for (double p : parts) {
    if (!(p > 0)) {
      throw ConfigError("every split ratio must be positive, got \"" +
                        std::string(spec) + "\"");
    }
  }
  double total = parts[0] + parts[1] + parts[2];
  return {parts[0] / total, parts[1] / total, parts[2] / total};
}

std::array<std::size_t, 3> SplitManifest::Counts() const {
  std::array<std::size_t, 3> counts{};
  for (const auto& [id, p] : membership) ++counts[static_cast<int>(p)];
  return counts;
}

SplitManifest SplitCorpus(std::span<const AnnotatedNote> notes,
                          const SplitRatios& ratios, std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.validation > 0 && ratios.test > 0)) {
    throw ConfigError("every split ratio must be positive");
  }
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
  const std::size_t n = notes.size();
  if (n < 3) {
    throw DataError("cannot split " + std::to_string(n) +
                    " notes into 3 partitions");
  }
  // The epsilon keeps exact products such as 0.1 * 450 from flooring to 44.
  auto floor_count = [n](double r) {
    return static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9));
  };
  const std::size_t n_val = floor_count(ratios.validation);
  const std::size_t n_test = floor_count(ratios.test);
  const std::size_t n_train = n - n_val - n_test;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(&order);

  SplitManifest m;
  m.seed = seed;
  m.ratios = ratios;
  for (std::size_t i = 0; i < n; ++i) {
    Partition p = i < n_train            ? Partition::kTrain
                  : i < n_train + n_val  ? Partition::kValidation
                                         : Partition::kTest;
    const std::string& id = notes[order[i]].note.note_id;
    if (!m.membership.emplace(id, p).second) {
      throw DataError("duplicate note_id \"" + id + "\"");
    }
  }
  return m;
}

std::string ManifestToJson(const SplitManifest& m) {
  Json membership = Json::object();
  for (const auto& [id, p] : m.membership) membership[id] = std::string(Name(p));
  auto counts = m.Counts();
  Json j = {{"seed", m.seed},
            {"ratios",
             {{"train", m.ratios.train},
              {"validation", m.ratios.validation},
              {"test", m.ratios.test}}},
            {"counts",
             {{"train", counts[0]},
              {"validation", counts[1]},
              {"test", counts[2]}}},
            {"membership", std::move(membership)}};
  return j.dump(2) + "\n";
}

SplitManifest ManifestFromJson(std::string_view json) {
  SplitManifest m;
  try {
    Json j = Json::parse(json);
    m.seed = j.at("seed").get<std::uint64_t>();
    const Json& r = j.at("ratios");
    m.ratios = {r.at("train").get<double>(), r.at("validation").get<double>(),
                r.at("test").get<double>()};
    for (const auto& [id, p] : j.at("membership").items()) {
      std::string name = p.get<std::string>();
      Partition part;
      if (name == "train") {
        part = Partition::kTrain;
      } else if (name == "validation") {
        part = Partition::kValidation;
      } else if (name == "test") {
        part = Partition::kTest;
      } else {
        throw DataError("unknown partition \"" + name + "\"");
      }
      m.membership.emplace(id, part);
    }
  } catch (const Json::exception& e) {
    throw FormatError("manifest", 1, e.what());
  }
  return m;
}

}  // namespace perio
