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

// Note corpora on disk, cohort eligibility and train/validation/test splits.
//
// Corpus files hold one JSON object per line:
//
//   {"note_id": "n-1", "site_id": "site1", "text": "...",
//    "provenance": "Real", "annotation_source": "Gold",
//    "spans": [{"dimension": "stage", "value": "III", "start": 4,
//               "end": 13, "text": "Stage III"}],
//    "record": {"status": "Periodontitis", "stage": "III", ...} | null,
//    "meta": {"age": 40, ...}}
//
// "meta", "guideline", "qa", "flags" and each span's "text" are optional.

#ifndef PERIO_CORPUS_H_
#define PERIO_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perio/model.h"

namespace perio {

enum class Provenance { kReal, kLlmGenerated, kOfflineGenerated };
enum class AnnotationSource { kGold, kPredicted, kEmbedded };

std::string_view Name(Provenance p);
std::string_view Name(AnnotationSource s);

struct Note {
  std::string note_id;
  std::string site_id;
  std::string text;
  Provenance provenance = Provenance::kReal;

  friend bool operator==(const Note&, const Note&) = default;
};

struct PatientMeta {
  int age = 0;
  int natural_teeth_count = 0;
  bool has_full_mouth_radiographs = false;
  // Pocket depth, attachment loss and CEJ distance were recorded.
  bool has_periodontal_charting = false;

  friend bool operator==(const PatientMeta&, const PatientMeta&) = default;
};

// One dimension where a note's embedded label disagrees with what the text
// supports. A missing proposal means the value should be left blank.
struct LabelDiscrepancy {
  Dimension dimension = Dimension::kStatus;
  std::optional<Label> embedded;
  std::optional<Label> observed;
  std::optional<Label> proposed;

  friend bool operator==(const LabelDiscrepancy&,
                         const LabelDiscrepancy&) = default;
};

struct QaVerdict {
  std::vector<LabelDiscrepancy> discrepancies;
  // Set when the proposed corrections were applied to the note's record.
  bool autofixed = false;

  bool consistent() const { return discrepancies.empty(); }

  friend bool operator==(const QaVerdict&, const QaVerdict&) = default;
};

struct AnnotatedNote {
  Note note;
  std::vector<EntitySpan> spans;
  std::optional<DiagnosisRecord> record;
  AnnotationSource annotation_source = AnnotationSource::kGold;
  std::optional<PatientMeta> meta;
  std::optional<GuidelineVersion> guideline;
  std::optional<QaVerdict> qa;
  // Free-form markers such as "hedged" or "unparseable_trailer".
  std::vector<std::string> flags;

  friend bool operator==(const AnnotatedNote&, const AnnotatedNote&) = default;
};

// True iff age >= 16, at least 10 natural teeth, a full-mouth radiograph
// series and periodontal charting are all present.
bool CohortEligible(const PatientMeta& meta);

// Empty when the metadata is within range.
std::optional<std::string> CheckMeta(const PatientMeta& meta);

// Single-line JSON form of a note (no trailing newline).
std::string ToJsonLine(const AnnotatedNote& note);
// `source` and `line` only label errors.
AnnotatedNote ParseJsonLine(std::string_view line, const std::string& source,
                            std::size_t line_number);

// Throws FormatError (with line number) on malformed lines and DataError on
// duplicate note ids or spans that do not fit the text. Blank lines are
// skipped.
std::vector<AnnotatedNote> ReadCorpus(const std::filesystem::path& path);
std::vector<AnnotatedNote> ParseCorpus(std::string_view contents,
                                       const std::string& source);
std::string SerializeCorpus(std::span<const AnnotatedNote> notes);
void WriteCorpus(std::span<const AnnotatedNote> notes,
                 const std::filesystem::path& path);

// Patient metadata side file: one {"note_id", "age", "natural_teeth_count",
// "has_full_mouth_radiographs", "has_periodontal_charting"} object per line.
std::map<std::string, PatientMeta> ReadMetaFile(
    const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);
std::string ReadFile(const std::filesystem::path& path);

enum class Partition { kTrain, kValidation, kTest };

std::string_view Name(Partition p);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

// Parses "8:1:1" style weights into ratios. Throws ConfigError on zero or
// negative parts.
SplitRatios ParseRatios(std::string_view spec);

struct SplitManifest {
  std::uint64_t seed = 0;
  SplitRatios ratios;
  std::map<std::string, Partition> membership;

  std::array<std::size_t, 3> Counts() const;
};

// Validation and test receive floor(ratio * N) notes each; the remainder goes
// to training. Deterministic in (note order, seed).
SplitManifest SplitCorpus(std::span<const AnnotatedNote> notes,
                          const SplitRatios& ratios, std::uint64_t seed);

std::string ManifestToJson(const SplitManifest& manifest);
SplitManifest ManifestFromJson(std::string_view json);

}  // namespace perio

#endif  // PERIO_CORPUS_H_
