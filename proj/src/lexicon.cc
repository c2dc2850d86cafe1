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

#include "lexicon.h"

#include <array>
#include <utility>

#include "perio/normalization.h"

namespace perio::lexicon {
namespace {

// Shorter inputs only match exactly; "heal" or "stag" style fragments are
// too easy to confuse with ordinary words.
constexpr std::size_t kMinFuzzyInput = 4;
constexpr std::size_t kMinFuzzyVocab = 5;

template <typename V, std::size_t N>
std::optional<V> Match(std::string_view word,
                       const std::array<std::pair<std::string_view, V>, N>& vocab) {
  const std::string lower = Lower(word);
  for (const auto& [w, v] : vocab) {
    if (w == lower) return v;
  }
  if (lower.size() < kMinFuzzyInput) return std::nullopt;
  std::optional<V> found;
  for (const auto& [w, v] : vocab) {
    if (w.size() < kMinFuzzyVocab) continue;
    if (EditDistance(lower, w) > 1) continue;
    if (found && *found != v) return std::nullopt;  // Ambiguous.
    found = v;
  }
  return found;
}

constexpr std::array<std::pair<std::string_view, PeriodontalStatus>, 4>
    kStatusVocab = {{{"periodontitis", PeriodontalStatus::kPeriodontitis},
                     {"gingivitis", PeriodontalStatus::kGingivitis},
                     {"health", PeriodontalStatus::kHealth},
                     {"healthy", PeriodontalStatus::kHealth}}};

constexpr std::array<std::pair<std::string_view, Extent>, 4> kExtentVocab = {
    {{"localized", Extent::kLocalized},
     {"localised", Extent::kLocalized},
     {"generalized", Extent::kGeneralized},
     {"generalised", Extent::kGeneralized}}};

constexpr std::array<std::pair<std::string_view, int>, 1> kStageKeyword = {
    {{"stage", 0}}};
constexpr std::array<std::pair<std::string_view, int>, 1> kGradeKeyword = {
    {{"grade", 0}}};

constexpr std::array<std::pair<std::string_view, SubtypeWord>, 10>
    kSubtypeVocab = {{{"intact", SubtypeWord::kIntact},
                      {"reduced", SubtypeWord::kReduced},
                      {"periodontium", SubtypeWord::kPeriodontium},
                      {"stable", SubtypeWord::kStable},
                      {"past", SubtypeWord::kPast},
                      {"history", SubtypeWord::kHistory},
                      {"treated", SubtypeWord::kTreated},
                      {"non", SubtypeWord::kNon},
                      {"nonperiodontitis", SubtypeWord::kNonPeriodontitis},
                      {"nonperiodontal", SubtypeWord::kNonPeriodontitis}}};

}  // namespace

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::optional<Stage> StageNumeral(std::string_view token,
                                  bool allow_lowercase) {
  static constexpr std::array<std::string_view, 4> kRoman = {"I", "II", "III",
                                                             "IV"};
  static constexpr std::array<std::string_view, 4> kArabic = {"1", "2", "3",
                                                              "4"};
  std::string t(token);
  if (allow_lowercase) {
    for (char& c : t) {
      if (c == 'i') c = 'I';
      if (c == 'v') c = 'V';
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (t == kRoman[i] || t == kArabic[i]) return static_cast<Stage>(i);
  }
  return std::nullopt;
}

std::optional<Grade> GradeLetter(std::string_view token,
                                 bool allow_lowercase) {
  if (token.size() != 1) return std::nullopt;
  char c = token[0];
  if (allow_lowercase && c >= 'a' && c <= 'c') c = static_cast<char>(c - 32);
  if (c >= 'A' && c <= 'C') return static_cast<Grade>(c - 'A');
  return std::nullopt;
}

std::optional<PeriodontalStatus> StatusWord(std::string_view word) {
  return Match(word, kStatusVocab);
}

std::optional<Extent> ExtentWord(std::string_view word) {
  return Match(word, kExtentVocab);
}

bool IsStageKeyword(std::string_view word) {
  return Match(word, kStageKeyword).has_value();
}

bool IsGradeKeyword(std::string_view word) {
  return Match(word, kGradeKeyword).has_value();
}

std::optional<SubtypeWord> SubtypeVocab(std::string_view word) {
  return Match(word, kSubtypeVocab);
}

}  // namespace perio::lexicon
