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

// Entity taxonomy for periodontal diagnoses: the five label dimensions, the
// per-note diagnosis record and the orderings used to adjudicate between
// competing diagnoses.

#ifndef PERIO_MODEL_H_
#define PERIO_MODEL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace perio {

// Declared in increasing severity so the built-in ordering is the severity
// ordering.
enum class PeriodontalStatus { kHealth, kGingivitis, kPeriodontitis };

enum class Stage { kI, kII, kIII, kIV };

enum class Grade { kA, kB, kC };

enum class Extent { kLocalized, kGeneralized };

// Reduced periodontium splits on whether the reduction came from treated
// periodontitis or from another cause (e.g. crown lengthening).
enum class Subtype {
  kIntactPeriodontium,
  kReducedStablePeriodontitis,
  kReducedNonPeriodontitis,
};

// Order matches the alternatives of Label.
enum class Dimension { kStatus, kStage, kGrade, kExtent, kSubtype };

inline constexpr std::array<Dimension, 5> kAllDimensions = {
    Dimension::kStatus, Dimension::kStage, Dimension::kGrade,
    Dimension::kExtent, Dimension::kSubtype};

using Label = std::variant<PeriodontalStatus, Stage, Grade, Extent, Subtype>;

inline Dimension DimensionOf(const Label& label) {
  return static_cast<Dimension>(label.index());
}

// Canonical names, used in files and reports ("Periodontitis", "III", "B",
// "Generalized", "IntactPeriodontium").
std::string_view Name(PeriodontalStatus v);
std::string_view Name(Stage v);
std::string_view Name(Grade v);
std::string_view Name(Extent v);
std::string_view Name(Subtype v);
std::string_view Name(const Label& label);

// Machine key for a dimension: "status", "stage", "grade", "extent",
// "subtype".
std::string_view DimensionKey(Dimension d);
// Human heading: "Periodontal status", "Stage", ...
std::string_view DimensionTitle(Dimension d);
std::optional<Dimension> ParseDimension(std::string_view key);

// Inverse of Name(); exact match only. Fuzzy matching of free text lives in
// normalization.h.
std::optional<Label> ParseLabel(Dimension d, std::string_view canonical);

// Number of values in a dimension and the position of a value within it.
std::size_t ValueCount(Dimension d);
std::size_t Ordinal(const Label& label);
Label LabelAt(Dimension d, std::size_t ordinal);

PeriodontalStatus MaxSeverity(PeriodontalStatus a, PeriodontalStatus b);

// Join in the lattice where an absent value is the bottom element.
template <typename T>
std::optional<T> Join(const std::optional<T>& a, const std::optional<T>& b) {
  if (!a) return b;
  if (!b) return a;
  return *a < *b ? b : a;
}

inline std::optional<Stage> MaxStage(std::optional<Stage> a,
                                     std::optional<Stage> b) {
  return Join(a, b);
}
inline std::optional<Grade> MaxGrade(std::optional<Grade> a,
                                     std::optional<Grade> b) {
  return Join(a, b);
}
inline std::optional<Extent> MaxExtent(std::optional<Extent> a,
                                       std::optional<Extent> b) {
  return Join(a, b);
}

// The single normalized diagnosis of a note. Absent optionals mean the value
// was left blank.
struct DiagnosisRecord {
  PeriodontalStatus status = PeriodontalStatus::kHealth;
  std::optional<Stage> stage;
  std::optional<Grade> grade;
  std::optional<Extent> extent;
  std::optional<Subtype> subtype;

  std::optional<Label> Get(Dimension d) const;

  friend bool operator==(const DiagnosisRecord&,
                         const DiagnosisRecord&) = default;
};

struct Validation {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Reports every field that the record's status does not permit.
Validation ValidateRecord(const DiagnosisRecord& record);

// Drops the fields the record's status does not permit.
DiagnosisRecord Sanitize(DiagnosisRecord record);

// Every record that passes ValidateRecord (76 in total).
std::vector<DiagnosisRecord> AllLegalRecords();

// Short human-readable form, e.g. "Periodontitis/III/B/Generalized/-".
std::string ToString(const DiagnosisRecord& record);

enum class GuidelineVersion { kCurrent2018, kLegacy, kNotApplicable };

std::string_view Name(GuidelineVersion v);
std::optional<GuidelineVersion> ParseGuidelineVersion(std::string_view name);

// A labeled half-open byte range [start, end) of a note's UTF-8 text.
struct EntitySpan {
  Label value;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string raw_text;

  Dimension dimension() const { return DimensionOf(value); }

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

// Returns an error description when the span is out of bounds, empty, or its
// raw_text differs from the text it points into.
std::optional<std::string> CheckSpan(std::string_view text,
                                     const EntitySpan& span);

// Checks every span plus pairwise non-overlap. Spans may be in any order.
std::optional<std::string> CheckSpans(std::string_view text,
                                      std::span<const EntitySpan> spans);

}  // namespace perio

#endif  // PERIO_MODEL_H_
