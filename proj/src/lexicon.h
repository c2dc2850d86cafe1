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

// Closed vocabularies shared by the extractor and the normalizer.

#ifndef PERIO_SRC_LEXICON_H_
#define PERIO_SRC_LEXICON_H_

#include <optional>
#include <string>
#include <string_view>

#include "perio/model.h"

namespace perio::lexicon {

std::string Lower(std::string_view s);

// Roman I-IV or arabic 1-4. Lowercase roman is accepted only when
// `allow_lowercase` is set.
std::optional<Stage> StageNumeral(std::string_view token, bool allow_lowercase);
// Single letter A-C.
std::optional<Grade> GradeLetter(std::string_view token, bool allow_lowercase);

// Fuzzy word lookups (exact, or edit distance 1 when unambiguous).
std::optional<PeriodontalStatus> StatusWord(std::string_view word);
std::optional<Extent> ExtentWord(std::string_view word);
bool IsStageKeyword(std::string_view word);
bool IsGradeKeyword(std::string_view word);

enum class SubtypeWord {
  kIntact,
  kReduced,
  kPeriodontium,
  kStable,
  kPast,
  kHistory,
  kTreated,
  kNon,
  kNonPeriodontitis,
};
std::optional<SubtypeWord> SubtypeVocab(std::string_view word);

}  // namespace perio::lexicon

#endif  // PERIO_SRC_LEXICON_H_
