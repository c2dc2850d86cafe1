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

// Canonicalization of raw entity text, grouping of spans into diagnosis
// candidates, adjudication of competing candidates into one record per note,
// and guideline-version classification.

#ifndef PERIO_NORMALIZATION_H_
#define PERIO_NORMALIZATION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perio/model.h"

namespace perio {

// Optimal string alignment distance (Levenshtein plus adjacent
// transposition), ASCII case-insensitive.
std::size_t EditDistance(std::string_view a, std::string_view b);

// Maps raw surface text to a canonical value of `dimension`.
//  - Stage: roman I-IV or arabic 1-4, optionally preceded by "Stage".
//  - Grade: a-c in either case, optionally preceded by "Grade".
//  - Status, extent, subtype: words matched against a closed vocabulary,
//    exactly or at edit distance 1.
// Returns nullopt when nothing matches or when the text is within distance 1
// of words for two different values.
std::optional<Label> NormalizeValue(Dimension dimension, std::string_view raw);

// Splits a note's spans into one candidate record per diagnosis. A new
// candidate starts at sentence/line boundaries and when a dimension repeats.
// A stage or grade with no status word implies periodontitis. Fields the
// candidate's status does not permit are dropped, so every candidate passes
// ValidateRecord.
std::vector<DiagnosisRecord> InferCandidates(std::string_view text,
                                             std::span<const EntitySpan> spans);

// Collapses candidates into a single record: the most severe status wins,
// and among candidates with that status stage/grade/extent take their
// maximum. Subtypes that disagree are left blank. Returns nullopt for no
// candidates.
std::optional<DiagnosisRecord> Adjudicate(
    std::span<const DiagnosisRecord> candidates);

// InferCandidates followed by Adjudicate.
std::optional<DiagnosisRecord> DeriveRecord(std::string_view text,
                                            std::span<const EntitySpan> spans);

GuidelineVersion ClassifyGuidelineVersion(const DiagnosisRecord& record);

}  // namespace perio

#endif  // PERIO_NORMALIZATION_H_
