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

#include <algorithm>
#include <set>

#include "fixtures.h"
#include "gtest/gtest.h"
#include "perio/error.h"
#include "perio/extraction.h"
#include "perio/normalization.h"
#include "perio/pipeline.h"

namespace perio {
namespace {

using testing::LegalRecordTemplates;
using testing::UniformRates;

ExtractorConfig Mode(ExtractionMode m) {
  ExtractorConfig c;
  c.mode = m;
  return c;
}

const ExtractorConfig kStrict = Mode(ExtractionMode::kStrict);
const ExtractorConfig kInformal = Mode(ExtractionMode::kInformal);

// (dimension key, value name, surface text) triples for compact asserts.
std::vector<std::string> Describe(const std::vector<EntitySpan>& spans) {
  std::vector<std::string> out;
  for (const auto& s : spans) {
    out.push_back(std::string(DimensionKey(s.dimension())) + "=" +
                  std::string(Name(s.value)) + "@" + s.raw_text);
  }
  return out;
}

DiagnosisRecord Perio(Stage s, Grade g, std::optional<Extent> e) {
  DiagnosisRecord r;
  r.status = PeriodontalStatus::kPeriodontitis;
  r.stage = s;
  r.grade = g;
  r.extent = e;
  return r;
}

std::optional<DiagnosisRecord> Derive(const std::string& text,
                                      const ExtractorConfig& config) {
  return DeriveRecord(text, ExtractEntities(text, config).spans);
}

TEST(ExtractEntitiesTest, EmptyText) {
  EXPECT_TRUE(ExtractEntities("").spans.empty());
  EXPECT_TRUE(ExtractEntities("", kInformal).spans.empty());
}

TEST(ExtractEntitiesTest, DistractorExtentIsIgnored) {
  const std::string t =
      "D: Localized Periodontitis Stage I Grade A with Generalized Recession";
  EXPECT_EQ(Describe(ExtractEntities(t).spans),
            (std::vector<std::string>{"extent=Localized@Localized",
                                      "status=Periodontitis@Periodontitis",
                                      "stage=I@Stage I", "grade=A@Grade A"}));
  EXPECT_EQ(Derive(t, kStrict), Perio(Stage::kI, Grade::kA, Extent::kLocalized));
}

TEST(ExtractEntitiesTest, SentenceInitialDiagnosis) {
  const std::string t = "Generalized Stage 3 Grade B";
  EXPECT_EQ(Describe(ExtractEntities(t).spans),
            (std::vector<std::string>{"extent=Generalized@Generalized",
                                      "stage=III@Stage 3", "grade=B@Grade B"}));
  EXPECT_EQ(Derive(t, kStrict), Perio(Stage::kIII, Grade::kB, Extent::kGeneralized));
}

TEST(ExtractEntitiesTest, InformalBareForm) {
  const std::string t = "Generalized III B";
  EXPECT_EQ(Describe(ExtractEntities(t, kInformal).spans),
            (std::vector<std::string>{"extent=Generalized@Generalized",
                                      "stage=III@III", "grade=B@B"}));
  EXPECT_EQ(Derive(t, kInformal), Perio(Stage::kIII, Grade::kB, Extent::kGeneralized));
  EXPECT_TRUE(ExtractEntities(t, kStrict).spans.empty());
  EXPECT_EQ(Derive(t, kStrict), std::nullopt);
}

TEST(ExtractEntitiesTest, InformalStageWithBareGrade) {
  const std::string t = "D: Generalized Periodontitis Stage 3 B";
  EXPECT_EQ(Derive(t, kInformal), Perio(Stage::kIII, Grade::kB, Extent::kGeneralized));
  // Strict mode reads the stage but not the loose letter.
  DiagnosisRecord partial;
  partial.status = PeriodontalStatus::kPeriodontitis;
  partial.stage = Stage::kIII;
  partial.extent = Extent::kGeneralized;
  EXPECT_EQ(Derive(t, kStrict), partial);
}

TEST(ExtractEntitiesTest, InformalCombinedToken) {
  const std::string t = "Dx: Localized Stage IIIB";
  const auto spans = ExtractEntities(t, kInformal).spans;
  EXPECT_EQ(Describe(spans),
            (std::vector<std::string>{"extent=Localized@Localized",
                                      "stage=III@Stage III", "grade=B@B"}));
  EXPECT_EQ(CheckSpans(t, spans), std::nullopt);
}

TEST(ExtractEntitiesTest, MultipleDiagnosesAdjudicate) {
  EXPECT_EQ(Derive("D: Localized Periodontitis Stage I Grade A and Generalized "
                   "Periodontitis Stage II Grade B",
                   kStrict),
            Perio(Stage::kII, Grade::kB, Extent::kGeneralized));
  EXPECT_EQ(Derive("D- Localized Periodontitis Stage I Grade A and Generalized "
                   "Gingivitis",
                   kStrict),
            Perio(Stage::kI, Grade::kA, Extent::kLocalized));
}

TEST(ExtractEntitiesTest, HedgedStatementStillYieldsSpans) {
  const std::string t =
      "Diagnosis: Stage III Grade B but to be confirmed with radiographs";
  const Extraction e = ExtractEntities(t);
  EXPECT_EQ(Describe(e.spans),
            (std::vector<std::string>{"stage=III@Stage III", "grade=B@Grade B"}));
  ASSERT_EQ(e.statements.size(), 1u);
  EXPECT_TRUE(e.statements[0].hedged);
  EXPECT_TRUE(e.statements[0].anchored);
  EXPECT_TRUE(e.hedged());
  EXPECT_FALSE(ExtractEntities("D: Stage III Grade B").hedged());
  EXPECT_TRUE(ExtractEntities("D: Generalized Stage III Grade B r/o aggressive").hedged());
}

TEST(ExtractEntitiesTest, SubtypePhrases) {
  EXPECT_EQ(Describe(ExtractEntities("D: Localized Gingivitis on an intact periodontium").spans),
            (std::vector<std::string>{"extent=Localized@Localized",
                                      "status=Gingivitis@Gingivitis",
                                      "subtype=IntactPeriodontium@intact periodontium"}));
  auto r = Derive("Dx: Gingival health on a reduced periodontium, history of periodontitis",
                  kStrict);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->status, PeriodontalStatus::kHealth);
  EXPECT_EQ(r->subtype, Subtype::kReducedStablePeriodontitis);
  // Without a qualifier the reduced periodontium is not classified, and its
  // "periodontitis" never turns into a status.
  r = Derive("D: Gingivitis on a reduced periodontium", kStrict);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->status, PeriodontalStatus::kGingivitis);
  EXPECT_EQ(r->subtype, std::nullopt);
}

TEST(ExtractEntitiesTest, HealthNeedsPeriodontalContext) {
  EXPECT_EQ(Derive("D: Health", kStrict)->status, PeriodontalStatus::kHealth);
  EXPECT_EQ(Derive("Generalized periodontal health.", kStrict)->status,
            PeriodontalStatus::kHealth);
  EXPECT_EQ(Derive("D: Generalized Gingivitis, overall health good", kStrict)->status,
            PeriodontalStatus::kGingivitis);
}

TEST(ExtractEntitiesTest, TyposAreRecovered) {
  EXPECT_EQ(Derive("D: Generalzied Periodontitsi Stgae III Grdae B", kStrict),
            Perio(Stage::kIII, Grade::kB, Extent::kGeneralized));
}

TEST(ExtractEntitiesTest, UnanchoredProseIsIgnored) {
  EXPECT_TRUE(ExtractEntities("Patient presents for recall. Stable since last visit.").spans.empty());
  EXPECT_TRUE(ExtractEntities("Discussed periodontitis risk with smoking.").spans.empty());
  EXPECT_TRUE(ExtractEntities("Probing 3.5 mm on tooth 3 B.", kInformal).spans.empty());
}

TEST(ExtractEntitiesTest, AnchorsAreConfigurable) {
  ExtractorConfig c;
  c.anchors = {"Assessment"};
  EXPECT_FALSE(ExtractEntities("Assessment: Periodontitis Stage II", c).spans.empty());
  EXPECT_TRUE(ExtractEntities("The D: Stage II", c).spans.empty());
}

TEST(ExtractEntitiesTest, StatementSplitsOnNewlines) {
  const std::string t = "Dx: Localized Gingivitis\nGeneralized Recession noted";
  EXPECT_EQ(Describe(ExtractEntities(t).spans),
            (std::vector<std::string>{"extent=Localized@Localized",
                                      "status=Gingivitis@Gingivitis"}));
}

TEST(ExtractEntitiesTest, EveryLegalRecordPhraseRoundTrips) {
  for (const auto& t : LegalRecordTemplates()) {
    EXPECT_EQ(Derive(t.note.text, kStrict), t.embedded_record) << t.note.text;
    EXPECT_EQ(Derive(t.note.text, kInformal), t.embedded_record) << t.note.text;
  }
}

std::vector<AnnotatedNote> GeneratedCorpus(double rate, std::uint64_t seed) {
  return GenerateOffline(LegalRecordTemplates(), 4, UniformRates(rate, seed));
}

TEST(ExtractEntitiesTest, StrictSpansAreSubsetOfInformal) {
  for (double rate : {0.0, 0.5, 1.0}) {
    for (const auto& n : GeneratedCorpus(rate, 3)) {
      const auto strict = ExtractEntities(n.note.text, kStrict).spans;
      const auto informal = ExtractEntities(n.note.text, kInformal).spans;
      for (const auto& s : strict) {
        EXPECT_NE(std::find(informal.begin(), informal.end(), s), informal.end())
            << n.note.text;
      }
    }
  }
}

TEST(ExtractEntitiesTest, OutputSpansAreValidAndDisjoint) {
  for (const auto& n : GeneratedCorpus(1.0, 8)) {
    for (const auto* c : {&kStrict, &kInformal}) {
      const auto spans = ExtractEntities(n.note.text, *c).spans;
      EXPECT_EQ(CheckSpans(n.note.text, spans), std::nullopt);
      EXPECT_TRUE(std::is_sorted(spans.begin(), spans.end(),
                                 [](const auto& a, const auto& b) {
                                   return a.start < b.start;
                                 }));
    }
  }
}

TEST(ExtractEntitiesTest, AppendingUnrelatedTextKeepsSpans) {
  const std::vector<std::string> tails = {
      " Patient tolerated the visit well.", "\nPlan: recall in six months.",
      "\nGeneralized bleeding on probing noted."};
  for (const auto& n : GeneratedCorpus(0.5, 4)) {
    const auto before = ExtractEntities(n.note.text, kInformal).spans;
    for (const auto& tail : tails) {
      const auto after = ExtractEntities(n.note.text + tail, kInformal).spans;
      ASSERT_GE(after.size(), before.size());
      EXPECT_TRUE(std::equal(before.begin(), before.end(), after.begin()))
          << n.note.text << tail;
    }
  }
}

TEST(ExtractEntitiesTest, PrependingShiftsOffsetsOnly) {
  const std::string t = "D: Generalized Periodontitis Stage II Grade C";
  const std::string prefix = "Patient seen today.\n";
  const auto a = ExtractEntities(t).spans;
  const auto b = ExtractEntities(prefix + t).spans;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].value, b[i].value);
    EXPECT_EQ(a[i].start + prefix.size(), b[i].start);
  }
}

TEST(DetectStatusRuleBasedTest, Examples) {
  EXPECT_EQ(DetectStatusRuleBased("generalized gingivitis on an intact periodontium"),
            PeriodontalStatus::kGingivitis);
  EXPECT_EQ(DetectStatusRuleBased("Gingivitis noted.\nD: Periodontitis Stage II"),
            PeriodontalStatus::kPeriodontitis);
  EXPECT_EQ(DetectStatusRuleBased("patient presents for recall"), std::nullopt);
  EXPECT_EQ(DetectStatusRuleBased("D: gingival health on a reduced periodontium in a "
                                  "stable periodontitis patient"),
            PeriodontalStatus::kHealth);
  EXPECT_EQ(DetectStatusRuleBased("General health is good."), std::nullopt);
  EXPECT_EQ(DetectStatusRuleBased("PERIODONTITIS"), PeriodontalStatus::kPeriodontitis);
}

AnnotatedNote Note(const std::string& id, const std::string& text) {
  AnnotatedNote a;
  a.note.note_id = id;
  a.note.site_id = "s";
  a.note.text = text;
  return a;
}

std::vector<AnnotatedNote> ThreeNotes() {
  return {Note("a", "D: Stage II Grade A"), Note("b", "D: Gingival health"),
          Note("c", "Generalized Stage 3 Grade B")};
}

TEST(ExternalPredictionsTest, HappyPath) {
  const std::string file =
      R"({"note_id":"a","spans":[{"dimension":"stage","value":"II","start":3,"end":11,"text":"Stage II"}]})"
      "\n"
      R"({"note_id":"b","spans":[{"dimension":"status","value":"Health","start":12,"end":18}]})"
      "\n"
      R"({"note_id":"c","spans":[]})"
      "\n";
  const auto notes = ThreeNotes();
  const auto preds = ParseExternalPredictions(file, "p.jsonl", notes);
  ASSERT_EQ(preds.size(), 3u);
  EXPECT_EQ(preds.at("b")[0].raw_text, "health");

  PrecomputedExtractor ex(preds);
  const auto out = PredictCorpus(notes, ex);
  ASSERT_TRUE(out[0].record.has_value());
  EXPECT_EQ(out[0].record->stage, Stage::kII);
  EXPECT_EQ(out[0].guideline, GuidelineVersion::kLegacy);
  EXPECT_EQ(out[2].record, std::nullopt);
  EXPECT_EQ(out[0].annotation_source, AnnotationSource::kPredicted);
}

TEST(ExternalPredictionsTest, Errors) {
  const auto notes = ThreeNotes();
  EXPECT_THROW(ParseExternalPredictions(R"({"note_id":"zzz","spans":[]})", "p", notes),
               DataError);
  EXPECT_THROW(
      ParseExternalPredictions(
          R"({"note_id":"a","spans":[{"dimension":"stage","value":"II","start":3,"end":99}]})",
          "p", notes),
      DataError);
  // One character of the quoted text differs from the note.
  EXPECT_THROW(
      ParseExternalPredictions(
          R"({"note_id":"a","spans":[{"dimension":"stage","value":"II","start":3,"end":11,"text":"Stage Il"}]})",
          "p", notes),
      DataError);
  EXPECT_THROW(ParseExternalPredictions("{oops", "p", notes), FormatError);
  EXPECT_THROW(
      ParseExternalPredictions(
          R"({"note_id":"a","spans":[{"dimension":"stage","value":"IX","start":3,"end":11}]})",
          "p", notes),
      FormatError);
  try {
    ParseExternalPredictions(
        R"({"note_id":"a","spans":[{"dimension":"stage","value":"II","start":3,"end":99}]})",
        "p", notes);
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("\"a\""), std::string::npos);
  }
}

TEST(PredictCorpusTest, ThreadCountDoesNotChangeOutput) {
  const auto notes = GeneratedCorpus(0.5, 12);
  GrammarExtractor ex(kInformal);
  const auto one = PredictCorpus(notes, ex, 1);
  EXPECT_EQ(PredictCorpus(notes, ex, 4), one);
  EXPECT_EQ(PredictCorpus(notes, ex, 1000), one);
}

TEST(PredictCorpusTest, HedgedFlag) {
  GrammarExtractor ex;
  const auto out = PredictNote(Note("h", "Diagnosis: Stage III Grade B, to be confirmed"), ex);
  EXPECT_EQ(out.flags, std::vector<std::string>{"hedged"});
}

}  // namespace
}  // namespace perio
