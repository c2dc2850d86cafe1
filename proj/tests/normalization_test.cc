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
#include <map>
#include <set>

#include "gtest/gtest.h"
#include "oracles.h"
#include "perio/normalization.h"

namespace perio {
namespace {

using testing::OracleAdjudicate;

DiagnosisRecord Rec(PeriodontalStatus status, std::optional<Stage> stage = {},
                    std::optional<Grade> grade = {},
                    std::optional<Extent> extent = {},
                    std::optional<Subtype> subtype = {}) {
  DiagnosisRecord r;
  r.status = status;
  r.stage = stage;
  r.grade = grade;
  r.extent = extent;
  r.subtype = subtype;
  return r;
}

constexpr auto kP = PeriodontalStatus::kPeriodontitis;
constexpr auto kG = PeriodontalStatus::kGingivitis;
constexpr auto kH = PeriodontalStatus::kHealth;

// Plain Levenshtein with transpositions via full recursion; only used on
// short strings.
std::size_t SlowOsa(const std::string& a, const std::string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  std::size_t best = std::min(SlowOsa(a.substr(1), b) + 1, SlowOsa(a, b.substr(1)) + 1);
  best = std::min(best, SlowOsa(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1));
  if (a.size() > 1 && b.size() > 1 && a[0] == b[1] && a[1] == b[0]) {
    best = std::min(best, SlowOsa(a.substr(2), b.substr(2)) + 1);
  }
  return best;
}

TEST(EditDistanceTest, MatchesRecursiveOracle) {
  const std::vector<std::string> words = {"", "a", "ab", "ba", "abc", "acb",
                                          "stage", "stgae", "grade", "Grade",
                                          "health", "heath"};
  for (const auto& a : words) {
    for (const auto& b : words) {
      std::string la = a, lb = b;
      for (auto& c : la) c = static_cast<char>(std::tolower(c));
      for (auto& c : lb) c = static_cast<char>(std::tolower(c));
      EXPECT_EQ(EditDistance(a, b), SlowOsa(la, lb)) << a << " vs " << b;
    }
  }
  EXPECT_EQ(EditDistance("Periodontitiss", "periodontitis"), 1u);
  EXPECT_EQ(EditDistance("ab", "ba"), 1u);
}

TEST(NormalizeValueTest, Examples) {
  EXPECT_EQ(NormalizeValue(Dimension::kStage, "3"), Label(Stage::kIII));
  EXPECT_EQ(NormalizeValue(Dimension::kStage, "Stage 3"), Label(Stage::kIII));
  EXPECT_EQ(NormalizeValue(Dimension::kStage, "Stage IV"), Label(Stage::kIV));
  EXPECT_EQ(NormalizeValue(Dimension::kStage, "stage ii"), Label(Stage::kII));
  EXPECT_EQ(NormalizeValue(Dimension::kStage, "5"), std::nullopt);
  EXPECT_EQ(NormalizeValue(Dimension::kGrade, "b"), Label(Grade::kB));
  EXPECT_EQ(NormalizeValue(Dimension::kGrade, "Grade C"), Label(Grade::kC));
  EXPECT_EQ(NormalizeValue(Dimension::kGrade, "D"), std::nullopt);
  EXPECT_EQ(NormalizeValue(Dimension::kStatus, "Periodontitiss"), Label(kP));
  EXPECT_EQ(NormalizeValue(Dimension::kStatus, "gingival health"), Label(kH));
  EXPECT_EQ(NormalizeValue(Dimension::kExtent, "generalised"),
            Label(Extent::kGeneralized));
  EXPECT_EQ(NormalizeValue(Dimension::kStatus, "recession"), std::nullopt);
  EXPECT_EQ(NormalizeValue(Dimension::kSubtype, "intact periodontium"),
            Label(Subtype::kIntactPeriodontium));
  EXPECT_EQ(NormalizeValue(Dimension::kSubtype,
                           "reduced periodontium in a stable periodontitis"),
            Label(Subtype::kReducedStablePeriodontitis));
  EXPECT_EQ(NormalizeValue(Dimension::kSubtype,
                           "reduced periodontium in a non-periodontitis"),
            Label(Subtype::kReducedNonPeriodontitis));
  EXPECT_EQ(NormalizeValue(Dimension::kSubtype, "reduced periodontium"),
            std::nullopt);
}

TEST(NormalizeValueTest, IdempotentOnCanonicalNames) {
  for (Dimension d : kAllDimensions) {
    for (std::size_t i = 0; i < ValueCount(d); ++i) {
      const Label v = LabelAt(d, i);
      auto once = NormalizeValue(d, Name(v));
      ASSERT_EQ(once, v);
      EXPECT_EQ(NormalizeValue(d, Name(*once)), once);
    }
  }
}

// Every string at edit distance exactly 1 from `w` over lowercase letters.
std::set<std::string> Neighbors(const std::string& w) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < w.size(); ++i) out.insert(w.substr(0, i) + w.substr(i + 1));
  for (std::size_t i = 0; i <= w.size(); ++i) {
    for (char c = 'a'; c <= 'z'; ++c) out.insert(w.substr(0, i) + c + w.substr(i));
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (char c = 'a'; c <= 'z'; ++c) {
      std::string s = w;
      s[i] = c;
      out.insert(s);
    }
  }
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    std::string s = w;
    std::swap(s[i], s[i + 1]);
    out.insert(s);
  }
  out.erase(w);
  return out;
}

// For a word vocabulary, predicts NormalizeValue on every distance-1 variant
// from the enumeration alone: a unique value when only one value's words
// are within reach, nothing when two values compete.
template <typename V>
void CheckTypoOracle(Dimension d,
                     const std::vector<std::pair<std::string, V>>& vocab) {
  std::map<std::string, std::set<V>> reach;
  std::set<std::string> exact;
  for (const auto& [w, v] : vocab) {
    exact.insert(w);
    for (const auto& n : Neighbors(w)) reach[n].insert(v);
  }
  std::size_t checked = 0;
  for (const auto& [variant, values] : reach) {
    if (exact.count(variant)) continue;
    const std::optional<Label> expected =
        values.size() == 1 ? std::optional<Label>(*values.begin()) : std::nullopt;
    ASSERT_EQ(NormalizeValue(d, variant), expected) << variant;
    std::string upper = variant;
    upper[0] = static_cast<char>(std::toupper(upper[0]));
    ASSERT_EQ(NormalizeValue(d, upper), expected) << upper;
    ++checked;
  }
  EXPECT_GT(checked, 1000u);
}

TEST(NormalizeValueTest, StatusTyposMatchEnumerationOracle) {
  CheckTypoOracle<PeriodontalStatus>(
      Dimension::kStatus,
      {{"periodontitis", kP}, {"gingivitis", kG}, {"health", kH}, {"healthy", kH}});
}

TEST(NormalizeValueTest, ExtentTyposMatchEnumerationOracle) {
  CheckTypoOracle<Extent>(Dimension::kExtent,
                          {{"localized", Extent::kLocalized},
                           {"localised", Extent::kLocalized},
                           {"generalized", Extent::kGeneralized},
                           {"generalised", Extent::kGeneralized}});
}

TEST(NormalizeValueTest, DistanceTwoIsRejected) {
  EXPECT_EQ(NormalizeValue(Dimension::kStatus, "periodontittiss"), std::nullopt);
  EXPECT_EQ(NormalizeValue(Dimension::kExtent, "generalzd"), std::nullopt);
}

EntitySpan Span(const std::string& text, const std::string& piece, Label v,
                std::size_t from = 0) {
  const std::size_t at = text.find(piece, from);
  EXPECT_NE(at, std::string::npos) << piece;
  return EntitySpan{v, at, at + piece.size(), piece};
}

TEST(InferCandidatesTest, BareStageGradeImpliesPeriodontitis) {
  const std::string t = "Generalized Stage 3 Grade B";
  const std::vector<EntitySpan> spans = {
      Span(t, "Generalized", Extent::kGeneralized), Span(t, "Stage 3", Stage::kIII),
      Span(t, "Grade B", Grade::kB)};
  EXPECT_EQ(InferCandidates(t, spans),
            std::vector<DiagnosisRecord>{Rec(kP, Stage::kIII, Grade::kB, Extent::kGeneralized)});
}

TEST(InferCandidatesTest, HealthWithSubtype) {
  const std::string t = "Gingival health on an intact periodontium";
  const std::vector<EntitySpan> spans = {
      Span(t, "health", kH),
      Span(t, "intact periodontium", Subtype::kIntactPeriodontium)};
  EXPECT_EQ(InferCandidates(t, spans),
            std::vector<DiagnosisRecord>{
                Rec(kH, {}, {}, {}, Subtype::kIntactPeriodontium)});
}

TEST(InferCandidatesTest, TwoDiagnosesInOneStatement) {
  const std::string t =
      "D: Localized Periodontitis Stage I Grade A and Generalized Periodontitis "
      "Stage II Grade B";
  const std::vector<EntitySpan> spans = {
      Span(t, "Localized", Extent::kLocalized), Span(t, "Periodontitis", kP),
      Span(t, "Stage I", Stage::kI),            Span(t, "Grade A", Grade::kA),
      Span(t, "Generalized", Extent::kGeneralized),
      Span(t, "Periodontitis", kP, 30),         Span(t, "Stage II", Stage::kII),
      Span(t, "Grade B", Grade::kB)};
  EXPECT_EQ(InferCandidates(t, spans),
            (std::vector<DiagnosisRecord>{
                Rec(kP, Stage::kI, Grade::kA, Extent::kLocalized),
                Rec(kP, Stage::kII, Grade::kB, Extent::kGeneralized)}));
}

TEST(InferCandidatesTest, SentenceBoundarySeparatesCandidates) {
  const std::string t = "Gingivitis. Stage II.";
  const std::vector<EntitySpan> spans = {Span(t, "Gingivitis", kG),
                                         Span(t, "Stage II", Stage::kII)};
  EXPECT_EQ(InferCandidates(t, spans),
            (std::vector<DiagnosisRecord>{Rec(kG), Rec(kP, Stage::kII)}));
}

TEST(InferCandidatesTest, DisallowedFieldsAreDropped) {
  const std::string t = "Localized health";
  const std::vector<EntitySpan> spans = {Span(t, "Localized", Extent::kLocalized),
                                         Span(t, "health", kH)};
  const auto c = InferCandidates(t, spans);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], Rec(kH));
}

TEST(AdjudicateTest, Examples) {
  EXPECT_EQ(Adjudicate({}), std::nullopt);
  const std::vector<DiagnosisRecord> two_perio = {
      Rec(kP, Stage::kI, Grade::kA, Extent::kLocalized),
      Rec(kP, Stage::kII, Grade::kB, Extent::kGeneralized)};
  EXPECT_EQ(Adjudicate(two_perio),
            Rec(kP, Stage::kII, Grade::kB, Extent::kGeneralized));
  const std::vector<DiagnosisRecord> perio_ging = {
      Rec(kP, Stage::kI, Grade::kA, Extent::kLocalized),
      Rec(kG, {}, {}, Extent::kGeneralized)};
  EXPECT_EQ(Adjudicate(perio_ging),
            Rec(kP, Stage::kI, Grade::kA, Extent::kLocalized));
  const std::vector<DiagnosisRecord> single = {
      Rec(kG, {}, {}, Extent::kLocalized, Subtype::kIntactPeriodontium)};
  EXPECT_EQ(Adjudicate(single), single[0]);
  const std::vector<DiagnosisRecord> conflict = {
      Rec(kH, {}, {}, {}, Subtype::kIntactPeriodontium),
      Rec(kH, {}, {}, {}, Subtype::kReducedNonPeriodontitis)};
  EXPECT_EQ(Adjudicate(conflict), Rec(kH));
}

TEST(AdjudicateTest, OracleOverPairs) {
  // Full size-3 enumeration runs in the acceptance suite; pairs keep this
  // test fast while covering every combination of two records.
  const auto all = AllLegalRecords();
  for (const auto& a : all) {
    for (const auto& b : all) {
      const std::vector<DiagnosisRecord> xs = {a, b};
      const auto got = Adjudicate(xs);
      ASSERT_TRUE(got.has_value());
      ASSERT_EQ(*got, OracleAdjudicate(xs)) << ToString(a) << " + " << ToString(b);
      ASSERT_TRUE(ValidateRecord(*got).ok());
      const std::vector<DiagnosisRecord> again = {*got};
      ASSERT_EQ(Adjudicate(again), got);
    }
  }
}

TEST(GuidelineVersionTest, Rules) {
  EXPECT_EQ(ClassifyGuidelineVersion(Rec(kP, Stage::kIII, Grade::kB, Extent::kGeneralized)),
            GuidelineVersion::kCurrent2018);
  EXPECT_EQ(ClassifyGuidelineVersion(Rec(kP, {}, {}, Extent::kLocalized)),
            GuidelineVersion::kLegacy);
  EXPECT_EQ(ClassifyGuidelineVersion(Rec(kP, Stage::kII)), GuidelineVersion::kLegacy);
  EXPECT_EQ(ClassifyGuidelineVersion(Rec(kH, {}, {}, {}, Subtype::kIntactPeriodontium)),
            GuidelineVersion::kNotApplicable);
  EXPECT_EQ(ClassifyGuidelineVersion(Rec(kG)), GuidelineVersion::kNotApplicable);
}

}  // namespace
}  // namespace perio
