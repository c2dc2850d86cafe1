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

#include "perio/synthesis.h"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lexicon.h"
#include "perio/error.h"
#include "perio/extraction.h"
#include "perio/normalization.h"
#include "perio/random.h"

namespace perio {
namespace {

constexpr std::array<PeriodontalStatus, 3> kCategoryOrder = {
    PeriodontalStatus::kPeriodontitis, PeriodontalStatus::kGingivitis,
    PeriodontalStatus::kHealth};

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Dimension> PermittedDimensions(PeriodontalStatus status) {
  switch (status) {
    case PeriodontalStatus::kPeriodontitis:
      return {Dimension::kStatus, Dimension::kStage, Dimension::kGrade,
              Dimension::kExtent};
    case PeriodontalStatus::kGingivitis:
      return {Dimension::kStatus, Dimension::kExtent, Dimension::kSubtype};
    case PeriodontalStatus::kHealth:
      return {Dimension::kStatus, Dimension::kSubtype};
  }
  return {};
}

ExtractorConfig InformalConfig() {
  ExtractorConfig config;
  config.mode = ExtractionMode::kInformal;
  return config;
}

}  // namespace

std::vector<SeedTemplate> SelectSeedTemplates(
    std::span<const AnnotatedNote> corpus, std::size_t per_category,
    std::uint64_t seed) {
  std::array<std::vector<std::size_t>, 3> buckets;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto status = DetectStatusRuleBased(corpus[i].note.text);
    if (!status) continue;
    for (std::size_t c = 0; c < kCategoryOrder.size(); ++c) {
      if (kCategoryOrder[c] == *status) buckets[c].push_back(i);
    }
  }
  for (std::size_t c = 0; c < kCategoryOrder.size(); ++c) {
    if (buckets[c].size() < per_category) {
      throw DataError("not enough " + std::string(Name(kCategoryOrder[c])) +
                      " notes for seed templates: need " +
                      std::to_string(per_category) + ", found " +
                      std::to_string(buckets[c].size()) + " (short by " +
                      std::to_string(per_category - buckets[c].size()) + ")");
    }
  }

  const ExtractorConfig config = InformalConfig();
  std::vector<SeedTemplate> out;
  for (std::size_t c = 0; c < kCategoryOrder.size(); ++c) {
    const PeriodontalStatus status = kCategoryOrder[c];
    Rng rng(DeriveSeed(seed, c));
    std::vector<std::size_t> picks = buckets[c];
    rng.Shuffle(&picks);
    picks.resize(per_category);
    for (std::size_t i : picks) {
      const AnnotatedNote& a = corpus[i];
      SeedTemplate t{a.note, status, {}};
      t.embedded_record.status = status;
      if (a.record && a.record->status == status) {
        t.embedded_record = *a.record;
      } else if (auto derived = DeriveRecord(
                     a.note.text, ExtractEntities(a.note.text, config).spans);
                 derived && derived->status == status) {
        t.embedded_record = *derived;
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<AnnotatedNote> TemplatesToCorpus(
    std::span<const SeedTemplate> templates) {
  std::vector<AnnotatedNote> out;
  for (const SeedTemplate& t : templates) {
    AnnotatedNote a;
    a.note = t.note;
    a.record = t.embedded_record;
    a.annotation_source = AnnotationSource::kEmbedded;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<SeedTemplate> TemplatesFromCorpus(
    std::span<const AnnotatedNote> notes) {
  std::vector<SeedTemplate> out;
  for (const AnnotatedNote& a : notes) {
    if (!a.record) {
      throw DataError("template \"" + a.note.note_id + "\" has no record");
    }
    out.push_back(SeedTemplate{a.note, a.record->status, *a.record});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prompt

PromptConfig PromptConfig::Default() {
  PromptConfig c;
  c.rules =
      "- Write one new clinical note for a different, fictional patient, "
      "modeled on the template below.\n"
      "- Vary wording, sentence order and clinical details; do not copy "
      "sentences from the template.\n"
      "- Use the terse charting style of a dental clinic record.\n"
      "- Do not include names, dates of birth, addresses or any other "
      "identifiers.\n"
      "- Output plain text only, with no headings or commentary.";
  c.components =
      "- Reason for visit.\n"
      "- Relevant medical and dental history.\n"
      "- Clinical and radiographic findings.\n"
      "- A diagnosis line starting with \"D:\".\n"
      "- Treatment plan.";
  c.labeling =
      "Use the canonical spellings shown above inside the trailer. The "
      "trailer must be the last line and must not be repeated.";
  return c;
}

PromptConfig ParsePromptConfig(std::string_view contents,
                               const std::string& source) {
  PromptConfig config = PromptConfig::Default();
  std::string* current = nullptr;
  std::set<std::string*> seen;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string line(contents.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = Trim(line);
    if (trimmed.size() > 2 && trimmed.front() == '[' && trimmed.back() == ']') {
      const std::string name = trimmed.substr(1, trimmed.size() - 2);
      if (name == "rules") {
        current = &config.rules;
      } else if (name == "components") {
        current = &config.components;
      } else if (name == "labeling") {
        current = &config.labeling;
      } else {
        throw FormatError(source, line_number,
                          "unknown prompt section [" + name + "]");
      }
      if (!seen.insert(current).second) {
        throw FormatError(source, line_number,
                          "duplicate prompt section [" + name + "]");
      }
      current->clear();
      continue;
    }
    if (!current) {
      if (trimmed.empty()) continue;
      throw FormatError(source, line_number, "text before the first section");
    }
    *current += line;
    *current += '\n';
  }
  for (std::string* s : seen) *s = Trim(*s);
  return config;
}

PromptConfig LoadPromptConfig(const std::filesystem::path& path) {
  return ParsePromptConfig(ReadFile(path), path.string());
}

std::string FormatTrailer(const DiagnosisRecord& record) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (Dimension d : PermittedDimensions(record.status)) {
    auto v = record.Get(d);
    j[std::string(DimensionKey(d))] =
        v ? nlohmann::ordered_json(std::string(Name(*v))) : nullptr;
  }
  return std::string(kTrailerPrefix) + " " + j.dump();
}

std::string BuildPrompt(const SeedTemplate& seed, const PromptConfig& config) {
  const DiagnosisRecord& r = seed.embedded_record;
  std::ostringstream labeling;
  labeling << "Keep the template's diagnosis unchanged and state it in the "
              "diagnosis line.\n";
  labeling << "Label these dimensions:";
  for (Dimension d : PermittedDimensions(r.status)) {
    auto v = r.Get(d);
    labeling << "\n- " << DimensionTitle(d) << ": "
             << (v ? std::string(Name(*v)) : std::string("blank (null)"));
  }
  labeling << "\nFinish with a single line of the form:\n"
           << FormatTrailer(r);
  if (!config.labeling.empty()) labeling << "\n" << config.labeling;

  std::ostringstream out;
  out << kSectionRules << "\n" << config.rules << "\n\n"
      << kSectionComponents << "\n" << config.components << "\n\n"
      << kSectionLabeling << "\n" << labeling.str() << "\n\n"
      << kSectionTemplate << "\n" << seed.note.text << "\n";
  return out.str();
}

std::string PromptSection(std::string_view prompt, std::string_view header) {
  std::size_t pos = 0;
  bool inside = false;
  std::string body;
  while (pos < prompt.size()) {
    std::size_t eol = prompt.find('\n', pos);
    if (eol == std::string_view::npos) eol = prompt.size();
    std::string_view line = prompt.substr(pos, eol - pos);
    pos = eol + 1;
    if (inside) {
      // The template is the last section and may itself contain "### ".
      if (header != kSectionTemplate && line.substr(0, 4) == "### ") break;
      body.append(line);
      body += '\n';
    } else if (line == header) {
      inside = true;
    }
  }
  return Trim(body);
}

ParsedCompletion ParseCompletion(std::string_view completion) {
  ParsedCompletion out;
  std::string text = Trim(completion);
  const std::size_t nl = text.rfind('\n');
  const std::size_t line_start = nl == std::string::npos ? 0 : nl + 1;
  std::string last = Trim(std::string_view(text).substr(line_start));
  if (last.rfind(kTrailerPrefix, 0) != 0) {
    out.text = text;
    return out;
  }
  out.text = Trim(std::string_view(text).substr(0, line_start));
  nlohmann::json j = nlohmann::json::parse(last.substr(kTrailerPrefix.size()),
                                           nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || !j.contains("status") || !j["status"].is_string()) {
    return out;
  }
  DiagnosisRecord record;
  for (Dimension d : kAllDimensions) {
    const std::string key(DimensionKey(d));
    if (!j.contains(key) || j[key].is_null()) continue;
    if (!j[key].is_string()) return out;
    auto value = ParseLabel(d, j[key].get<std::string>());
    if (!value) value = NormalizeValue(d, j[key].get<std::string>());
    if (!value) return out;
    switch (d) {
      case Dimension::kStatus:
        record.status = std::get<PeriodontalStatus>(*value);
        break;
      case Dimension::kStage:
        record.stage = std::get<Stage>(*value);
        break;
      case Dimension::kGrade:
        record.grade = std::get<Grade>(*value);
        break;
      case Dimension::kExtent:
        record.extent = std::get<Extent>(*value);
        break;
      case Dimension::kSubtype:
        record.subtype = std::get<Subtype>(*value);
        break;
    }
  }
  if (ValidateRecord(record).ok()) out.record = record;
  return out;
}

void PerturbationSpec::Validate() const {
  const std::pair<const char*, double> rates[] = {
      {"typo_rate", typo_rate},
      {"informal_format_rate", informal_format_rate},
      {"anchor_variation_rate", anchor_variation_rate},
      {"multi_diagnosis_rate", multi_diagnosis_rate},
      {"distractor_extent_rate", distractor_extent_rate},
  };
  for (const auto& [name, rate] : rates) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw ConfigError(std::string(name) + " must be in [0, 1], got " +
                        std::to_string(rate));
    }
  }
}

// ---------------------------------------------------------------------------
// Offline generator

namespace {

const std::vector<std::string> kOpeners = {
    "Patient presents for periodic oral evaluation.",
    "Pt here for comprehensive exam.",
    "Patient returns for recall visit.",
    "New patient exam requested by referring dentist.",
    "Patient reports sensitivity on the lower left.",
    "Patient presents with bleeding when brushing.",
    "Patient here for evaluation of loose lower incisors.",
    "Patient reports food impaction between upper molars.",
};

const std::vector<std::string> kHistory = {
    "Medical history reviewed, no changes.",
    "Reports smoking half a pack per day.",
    "Takes metformin for type 2 diabetes.",
    "Takes lisinopril for blood pressure.",
    "No known drug allergies.",
    "Last cleaning was over a year ago.",
    "Former smoker, quit five years ago.",
};

const std::vector<std::string> kFindings = {
    "Full mouth series reviewed.",
    "Probing depths recorded on the chart.",
    "Bleeding on probing noted at several sites.",
    "Calculus present on lower anterior teeth.",
    "Plaque score recorded.",
    "Occlusion checked, no interferences.",
    "Charting completed for all teeth.",
    "Mobility noted on the lower incisors.",
    "Soft tissue exam within normal limits.",
};

const std::vector<std::string> kPlans = {
    "Plan: scaling and root planing, re-evaluate in six weeks.",
    "Plan: prophylaxis and recall in six months.",
    "Plan: oral hygiene instruction and re-evaluation.",
    "Plan: refer to periodontist for evaluation.",
    "Plan: full mouth debridement, then reassess.",
    "Plan: continue home care, recall in six months.",
};

const std::vector<std::string> kAnchors = {"D: ", "D- ", "Diagnosis: ",
                                           "Dx: ", ""};

const std::vector<std::string> kDistractorHeads = {
    "Recession", "bleeding on probing", "bone loss", "calculus deposits"};

// Every word the lexicon knows exactly; a typo must not land on one.
const std::set<std::string> kVocabulary = {
    "periodontitis", "gingivitis", "health",      "healthy",
    "localized",     "localised",  "generalized", "generalised",
    "stage",         "grade"};

std::string_view RomanName(Stage s) { return Name(s); }

char ArabicStage(Stage s) { return static_cast<char>('1' + static_cast<int>(s)); }

std::string ExtentWordFor(Extent e) {
  return e == Extent::kGeneralized ? "Generalized" : "Localized";
}

// Accumulates note text and records spans for entity pieces.
class NoteBuilder {
 public:
  void Text(std::string_view s) { text_ += s; }

  // `typo` indexes into the entity pieces that may receive a typo.
  void Entity(std::string_view s, std::optional<Label> value,
              bool typo_candidate) {
    Piece p{text_.size(), std::string(s), value, typo_candidate};
    text_ += s;
    pieces_.push_back(std::move(p));
  }

  std::string& text() { return text_; }

  struct Piece {
    std::size_t start;
    std::string word;
    std::optional<Label> value;  // Empty for keywords inside a span.
    bool typo_candidate;
  };
  std::vector<Piece>& pieces() { return pieces_; }

 private:
  std::string text_;
  std::vector<Piece> pieces_;
};

// One edit keeping the first letter. Returns nullopt when no attempt lands
// on a word the lexicon maps back to the original.
std::optional<std::string> MakeTypo(const std::string& word, Rng* rng) {
  auto recovers = [&](const std::string& candidate) {
    const std::string lower = lexicon::Lower(candidate);
    if (kVocabulary.count(lower) || lower == lexicon::Lower(word)) return false;
    if (auto s = lexicon::StatusWord(word)) {
      return lexicon::StatusWord(candidate) == s;
    }
    if (auto e = lexicon::ExtentWord(word)) {
      return lexicon::ExtentWord(candidate) == e;
    }
    if (lexicon::IsStageKeyword(word)) {
      return lexicon::IsStageKeyword(candidate) &&
             !lexicon::IsGradeKeyword(candidate);
    }
    if (lexicon::IsGradeKeyword(word)) {
      return lexicon::IsGradeKeyword(candidate) &&
             !lexicon::IsStageKeyword(candidate);
    }
    return false;
  };
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::string c = word;
    const std::size_t n = c.size();
    const char letter = static_cast<char>('a' + rng->Index(26));
    switch (rng->Index(4)) {
      case 0:  // Deletion.
        c.erase(1 + rng->Index(n - 1), 1);
        break;
      case 1:  // Insertion.
        c.insert(1 + rng->Index(n), 1, letter);
        break;
      case 2:  // Substitution.
        c[1 + rng->Index(n - 1)] = letter;
        break;
      default: {  // Adjacent transposition.
        if (n < 3) continue;
        const std::size_t i = 1 + rng->Index(n - 2);
        std::swap(c[i], c[i + 1]);
        break;
      }
    }
    if (recovers(c)) return c;
  }
  return std::nullopt;
}

struct SentencePlan {
  std::string anchor;
  bool informal = false;
  bool multi = false;
  bool distractor = false;
};

void AppendSubtype(NoteBuilder* b, Subtype subtype) {
  switch (subtype) {
    case Subtype::kIntactPeriodontium:
      b->Text(" on an ");
      b->Entity("intact periodontium", subtype, false);
      break;
    case Subtype::kReducedStablePeriodontitis:
      b->Text(" on a ");
      b->Entity("reduced periodontium in a stable periodontitis", subtype,
                false);
      b->Text(" patient");
      break;
    case Subtype::kReducedNonPeriodontitis:
      b->Text(" on a ");
      b->Entity("reduced periodontium in a non-periodontitis", subtype, false);
      b->Text(" patient");
      break;
  }
}

void AppendPeriodontitis(NoteBuilder* b, const DiagnosisRecord& r,
                         bool informal, Rng* rng) {
  auto space_if_needed = [&] {
    if (!b->text().empty() && b->text().back() != ' ') b->Text(" ");
  };
  if (r.extent) b->Entity(ExtentWordFor(*r.extent), *r.extent, true);
  if (!informal) {
    space_if_needed();
    b->Entity("Periodontitis", PeriodontalStatus::kPeriodontitis, true);
    if (r.stage) {
      b->Text(" ");
      b->Entity("Stage", std::nullopt, true);
      b->Entity(std::string(" ") + std::string(RomanName(*r.stage)), *r.stage,
                false);
    }
    if (r.grade) {
      b->Text(" ");
      b->Entity("Grade", std::nullopt, true);
      b->Entity(std::string(" ") + std::string(Name(*r.grade)), *r.grade,
                false);
    }
    return;
  }
  const std::size_t form = (r.stage && r.grade) ? rng->Index(3) : 1;
  if (form == 0) {  // "Generalized III B"
    space_if_needed();
    b->Entity(RomanName(*r.stage), *r.stage, false);
    b->Text(" ");
    b->Entity(Name(*r.grade), *r.grade, false);
    return;
  }
  if (form == 1) {  // "Generalized Periodontitis Stage 3 B"
    space_if_needed();
    b->Entity("Periodontitis", PeriodontalStatus::kPeriodontitis, true);
    if (r.stage) {
      b->Text(" ");
      b->Entity("Stage", std::nullopt, true);
      b->Entity(std::string(" ") + ArabicStage(*r.stage), *r.stage, false);
    }
    if (r.grade && r.stage) {
      b->Text(" ");
      b->Entity(Name(*r.grade), *r.grade, false);
    } else if (r.grade) {
      b->Text(" ");
      b->Entity("Grade", std::nullopt, true);
      b->Entity(std::string(" ") + std::string(Name(*r.grade)), *r.grade,
                false);
    }
    return;
  }
  // "Generalized Stage 3 Grade B"
  space_if_needed();
  b->Entity("Stage", std::nullopt, true);
  b->Entity(std::string(" ") + ArabicStage(*r.stage), *r.stage, false);
  b->Text(" ");
  b->Entity("Grade", std::nullopt, true);
  b->Entity(std::string(" ") + std::string(Name(*r.grade)), *r.grade, false);
}

// Collapses builder pieces into spans: a keyword piece merges with the
// value piece that follows it ("Stage" + " III").
std::vector<EntitySpan> PiecesToSpans(const std::string& text,
                                      const std::vector<NoteBuilder::Piece>& ps) {
  std::vector<EntitySpan> spans;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!ps[i].value) continue;
    std::size_t start = ps[i].start;
    if (i > 0 && !ps[i - 1].value &&
        ps[i - 1].start + ps[i - 1].word.size() == ps[i].start) {
      start = ps[i - 1].start;
    } else if (!ps[i].word.empty() && ps[i].word.front() == ' ') {
      ++start;
    }
    const std::size_t end = ps[i].start + ps[i].word.size();
    spans.push_back(EntitySpan{*ps[i].value, start, end,
                               text.substr(start, end - start)});
  }
  return spans;
}

AnnotatedNote GenerateOne(const SeedTemplate& t, std::size_t variant,
                          const PerturbationSpec& spec, Rng* rng) {
  const DiagnosisRecord& r = t.embedded_record;
  SentencePlan plan;
  plan.anchor = rng->Bernoulli(spec.anchor_variation_rate) ? rng->Pick(kAnchors)
                                                           : "D: ";
  plan.informal = r.status == PeriodontalStatus::kPeriodontitis &&
                  (r.stage || r.grade) &&
                  rng->Bernoulli(spec.informal_format_rate);
  const bool typo = rng->Bernoulli(spec.typo_rate);
  plan.multi = rng->Bernoulli(spec.multi_diagnosis_rate);
  plan.distractor = rng->Bernoulli(spec.distractor_extent_rate);

  NoteBuilder b;
  b.Text(rng->Pick(kOpeners));
  if (rng->Bernoulli(0.7)) b.Text(" " + rng->Pick(kHistory));
  b.Text("\n");
  b.Text(rng->Pick(kFindings));
  if (rng->Bernoulli(0.5)) b.Text(" " + rng->Pick(kFindings));
  b.Text("\n");

  const std::size_t first_piece = b.pieces().size();
  b.Text(plan.anchor);
  switch (r.status) {
    case PeriodontalStatus::kPeriodontitis:
      AppendPeriodontitis(&b, r, plan.informal, rng);
      break;
    case PeriodontalStatus::kGingivitis:
      if (r.extent) {
        b.Entity(ExtentWordFor(*r.extent), *r.extent, true);
        b.Text(" ");
      }
      b.Entity("Gingivitis", PeriodontalStatus::kGingivitis, true);
      if (r.subtype) AppendSubtype(&b, *r.subtype);
      break;
    case PeriodontalStatus::kHealth:
      b.Text(rng->Bernoulli(0.5) ? "Gingival " : "Periodontal ");
      b.Entity("health", PeriodontalStatus::kHealth, true);
      if (r.subtype) AppendSubtype(&b, *r.subtype);
      break;
  }
  const std::size_t main_end = b.pieces().size();

  if (plan.distractor) {
    b.Text(" with ");
    b.Text(ExtentWordFor(rng->Bernoulli(0.5) ? Extent::kGeneralized
                                             : Extent::kLocalized));
    b.Text(" " + rng->Pick(kDistractorHeads));
  }
  if (plan.multi) {
    // A less severe (or equal, for health) secondary diagnosis that leaves
    // the adjudicated record unchanged.
    b.Text(" and ");
    switch (r.status) {
      case PeriodontalStatus::kPeriodontitis: {
        const Extent e =
            rng->Bernoulli(0.5) ? Extent::kGeneralized : Extent::kLocalized;
        b.Entity(ExtentWordFor(e), e, false);
        b.Text(" ");
        b.Entity("Gingivitis", PeriodontalStatus::kGingivitis, false);
        break;
      }
      case PeriodontalStatus::kGingivitis:
      case PeriodontalStatus::kHealth:
        b.Text("gingival ");
        b.Entity("health", PeriodontalStatus::kHealth, false);
        b.Text(" elsewhere");
        break;
    }
  }
  b.Text(".\n");

  if (typo) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = first_piece; i < main_end; ++i) {
      if (b.pieces()[i].typo_candidate) candidates.push_back(i);
    }
    rng->Shuffle(&candidates);
    for (std::size_t i : candidates) {
      auto& piece = b.pieces()[i];
      if (auto typoed = MakeTypo(piece.word, rng)) {
        // Text after the piece shifts by the length change.
        const std::ptrdiff_t delta = static_cast<std::ptrdiff_t>(typoed->size()) -
                                     static_cast<std::ptrdiff_t>(piece.word.size());
        b.text().replace(piece.start, piece.word.size(), *typoed);
        piece.word = *typoed;
        for (std::size_t k = i + 1; k < b.pieces().size(); ++k) {
          b.pieces()[k].start = static_cast<std::size_t>(
              static_cast<std::ptrdiff_t>(b.pieces()[k].start) + delta);
        }
        break;
      }
    }
  }

  b.Text(rng->Pick(kPlans));
  b.Text("\n");

  AnnotatedNote out;
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "-off%02zu", variant);
  out.note.note_id = t.note.note_id + suffix;
  out.note.site_id = t.note.site_id;
  out.note.text = b.text();
  out.note.provenance = Provenance::kOfflineGenerated;
  out.annotation_source = AnnotationSource::kEmbedded;
  out.spans = PiecesToSpans(out.note.text, b.pieces());
  out.record = r;
  out.guideline = ClassifyGuidelineVersion(r);
  return out;
}

}  // namespace

std::vector<AnnotatedNote> GenerateOffline(
    std::span<const SeedTemplate> templates, std::size_t variants_per_template,
    const PerturbationSpec& spec) {
  spec.Validate();
  std::vector<AnnotatedNote> out;
  out.reserve(templates.size() * variants_per_template);
  for (std::size_t ti = 0; ti < templates.size(); ++ti) {
    for (std::size_t v = 0; v < variants_per_template; ++v) {
      Rng rng(DeriveSeed(spec.rng_seed, ti, v));
      out.push_back(GenerateOne(templates[ti], v, spec, &rng));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// QA

QaVerdict ValidateLabels(const AnnotatedNote& note) {
  const std::string& text = note.note.text;
  const auto observed =
      DeriveRecord(text, ExtractEntities(text, InformalConfig()).spans);
  QaVerdict verdict;
  for (Dimension d : kAllDimensions) {
    std::optional<Label> embedded;
    std::optional<Label> seen;
    if (note.record) embedded = note.record->Get(d);
    if (observed) seen = observed->Get(d);
    if (embedded == seen) continue;
    verdict.discrepancies.push_back(LabelDiscrepancy{d, embedded, seen, seen});
  }
  return verdict;
}

void ApplyCorrections(AnnotatedNote* note, QaVerdict verdict) {
  std::optional<DiagnosisRecord> r = note->record;
  for (const LabelDiscrepancy& d : verdict.discrepancies) {
    if (d.dimension == Dimension::kStatus) {
      if (!d.proposed) {
        r.reset();
        break;
      }
      if (!r) r = DiagnosisRecord{};
      r->status = std::get<PeriodontalStatus>(*d.proposed);
    }
  }
  if (r) {
    for (const LabelDiscrepancy& d : verdict.discrepancies) {
      switch (d.dimension) {
        case Dimension::kStatus:
          break;
        case Dimension::kStage:
          r->stage = d.proposed ? std::optional(std::get<Stage>(*d.proposed))
                                : std::nullopt;
          break;
        case Dimension::kGrade:
          r->grade = d.proposed ? std::optional(std::get<Grade>(*d.proposed))
                                : std::nullopt;
          break;
        case Dimension::kExtent:
          r->extent = d.proposed ? std::optional(std::get<Extent>(*d.proposed))
                                 : std::nullopt;
          break;
        case Dimension::kSubtype:
          r->subtype = d.proposed
                           ? std::optional(std::get<Subtype>(*d.proposed))
                           : std::nullopt;
          break;
      }
    }
    r = Sanitize(*r);
  }
  note->record = r;
  note->guideline =
      r ? std::optional(ClassifyGuidelineVersion(*r)) : std::nullopt;
  verdict.autofixed = true;
  note->qa = std::move(verdict);
}

}  // namespace perio
