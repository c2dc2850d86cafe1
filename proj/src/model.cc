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

#include "perio/model.h"

#include <algorithm>
#include <numeric>

namespace perio {
namespace {

constexpr std::array<std::string_view, 3> kStatusNames = {
    "Health", "Gingivitis", "Periodontitis"};
constexpr std::array<std::string_view, 4> kStageNames = {"I", "II", "III",
                                                         "IV"};
constexpr std::array<std::string_view, 3> kGradeNames = {"A", "B", "C"};
constexpr std::array<std::string_view, 2> kExtentNames = {"Localized",
                                                          "Generalized"};
constexpr std::array<std::string_view, 3> kSubtypeNames = {
    "IntactPeriodontium", "ReducedPeriodontiumStablePeriodontitis",
    "ReducedPeriodontiumNonPeriodontitis"};

constexpr std::array<std::string_view, 5> kDimensionKeys = {
    "status", "stage", "grade", "extent", "subtype"};
constexpr std::array<std::string_view, 5> kDimensionTitles = {
    "Periodontal status", "Stage", "Grade", "Extent", "Subtype"};

template <typename E, std::size_t N>
std::optional<E> Lookup(const std::array<std::string_view, N>& names,
                        std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

template <typename T>
void AppendOptional(std::string* out, const std::optional<T>& v) {
  out->push_back('/');
  if (v) {
    out->append(Name(*v));
  } else {
    out->push_back('-');
  }
}

}  // namespace

std::string_view Name(PeriodontalStatus v) {
  return kStatusNames[static_cast<int>(v)];
}
std::string_view Name(Stage v) { return kStageNames[static_cast<int>(v)]; }
std::string_view Name(Grade v) { return kGradeNames[static_cast<int>(v)]; }
std::string_view Name(Extent v) { return kExtentNames[static_cast<int>(v)]; }
std::string_view Name(Subtype v) { return kSubtypeNames[static_cast<int>(v)]; }

std::string_view Name(const Label& label) {
  return std::visit([](auto v) { return Name(v); }, label);
}

std::string_view DimensionKey(Dimension d) {
  return kDimensionKeys[static_cast<int>(d)];
}

std::string_view DimensionTitle(Dimension d) {
  return kDimensionTitles[static_cast<int>(d)];
}

std::optional<Dimension> ParseDimension(std::string_view key) {
  return Lookup<Dimension>(kDimensionKeys, key);
}

std::optional<Label> ParseLabel(Dimension d, std::string_view canonical) {
  switch (d) {
    case Dimension::kStatus:
      if (auto v = Lookup<PeriodontalStatus>(kStatusNames, canonical)) return *v;
      break;
    case Dimension::kStage:
      if (auto v = Lookup<Stage>(kStageNames, canonical)) return *v;
      break;
    case Dimension::kGrade:
      if (auto v = Lookup<Grade>(kGradeNames, canonical)) return *v;
      break;
    case Dimension::kExtent:
      if (auto v = Lookup<Extent>(kExtentNames, canonical)) return *v;
      break;
    case Dimension::kSubtype:
      if (auto v = Lookup<Subtype>(kSubtypeNames, canonical)) return *v;
      break;
  }
  return std::nullopt;
}

std::size_t ValueCount(Dimension d) {
  switch (d) {
    case Dimension::kStatus: return kStatusNames.size();
    case Dimension::kStage: return kStageNames.size();
    case Dimension::kGrade: return kGradeNames.size();
    case Dimension::kExtent: return kExtentNames.size();
    case Dimension::kSubtype: return kSubtypeNames.size();
  }
  return 0;
}

std::size_t Ordinal(const Label& label) {
  return std::visit([](auto v) { return static_cast<std::size_t>(v); },
                    label);
}

Label LabelAt(Dimension d, std::size_t ordinal) {
  switch (d) {
    case Dimension::kStatus: return static_cast<PeriodontalStatus>(ordinal);
    case Dimension::kStage: return static_cast<Stage>(ordinal);
    case Dimension::kGrade: return static_cast<Grade>(ordinal);
    case Dimension::kExtent: return static_cast<Extent>(ordinal);
    case Dimension::kSubtype: return static_cast<Subtype>(ordinal);
  }
  return PeriodontalStatus::kHealth;
}

PeriodontalStatus MaxSeverity(PeriodontalStatus a, PeriodontalStatus b) {
  return std::max(a, b);
}

std::optional<Label> DiagnosisRecord::Get(Dimension d) const {
  switch (d) {
    case Dimension::kStatus: return Label(status);
    case Dimension::kStage: if (stage) return Label(*stage); break;
    case Dimension::kGrade: if (grade) return Label(*grade); break;
    case Dimension::kExtent: if (extent) return Label(*extent); break;
    case Dimension::kSubtype: if (subtype) return Label(*subtype); break;
  }
  return std::nullopt;
}

Validation ValidateRecord(const DiagnosisRecord& r) {
  Validation result;
  auto forbid = [&](bool present, std::string_view field,
                    std::string_view status) {
    if (!present) return;
    std::string msg(field);
    msg += " not permitted for ";
    msg += status;
    result.violations.push_back(std::move(msg));
  };
  switch (r.status) {
    case PeriodontalStatus::kPeriodontitis:
      forbid(r.subtype.has_value(), "subtype", "periodontitis");
      break;
    case PeriodontalStatus::kGingivitis:
      forbid(r.stage.has_value(), "stage", "gingivitis");
      forbid(r.grade.has_value(), "grade", "gingivitis");
      break;
    case PeriodontalStatus::kHealth:
      forbid(r.stage.has_value(), "stage", "health");
      forbid(r.grade.has_value(), "grade", "health");
      forbid(r.extent.has_value(), "extent", "health");
      break;
  }
  return result;
}

DiagnosisRecord Sanitize(DiagnosisRecord r) {
  if (r.status == PeriodontalStatus::kPeriodontitis) r.subtype.reset();
  if (r.status != PeriodontalStatus::kPeriodontitis) {
    r.stage.reset();
    r.grade.reset();
  }
  if (r.status == PeriodontalStatus::kHealth) r.extent.reset();
  return r;
}

std::vector<DiagnosisRecord> AllLegalRecords() {
  std::vector<DiagnosisRecord> out;
  std::vector<std::optional<Stage>> stages = {std::nullopt};
  for (std::size_t i = 0; i < 4; ++i) stages.push_back(static_cast<Stage>(i));
  std::vector<std::optional<Grade>> grades = {std::nullopt};
  for (std::size_t i = 0; i < 3; ++i) grades.push_back(static_cast<Grade>(i));
  std::vector<std::optional<Extent>> extents = {std::nullopt};
  for (std::size_t i = 0; i < 2; ++i) extents.push_back(static_cast<Extent>(i));
  std::vector<std::optional<Subtype>> subtypes = {std::nullopt};
  for (std::size_t i = 0; i < 3; ++i) {
    subtypes.push_back(static_cast<Subtype>(i));
  }

  for (auto s : stages) {
    for (auto g : grades) {
      for (auto e : extents) {
        out.push_back({PeriodontalStatus::kPeriodontitis, s, g, e, {}});
      }
    }
  }
  for (auto e : extents) {
    for (auto st : subtypes) {
      out.push_back({PeriodontalStatus::kGingivitis, {}, {}, e, st});
    }
  }
  for (auto st : subtypes) {
    out.push_back({PeriodontalStatus::kHealth, {}, {}, {}, st});
  }
  return out;
}

std::string ToString(const DiagnosisRecord& r) {
  std::string out(Name(r.status));
  AppendOptional(&out, r.stage);
  AppendOptional(&out, r.grade);
  AppendOptional(&out, r.extent);
  AppendOptional(&out, r.subtype);
  return out;
}

std::string_view Name(GuidelineVersion v) {
  switch (v) {
    case GuidelineVersion::kCurrent2018: return "Current2018";
    case GuidelineVersion::kLegacy: return "Legacy";
    case GuidelineVersion::kNotApplicable: return "NotApplicable";
  }
  return "";
}

std::optional<GuidelineVersion> ParseGuidelineVersion(std::string_view name) {
  for (auto v : {GuidelineVersion::kCurrent2018, GuidelineVersion::kLegacy,
                 GuidelineVersion::kNotApplicable}) {
    if (Name(v) == name) return v;
  }
  return std::nullopt;
}

std::optional<std::string> CheckSpan(std::string_view text,
                                     const EntitySpan& span) {
  if (span.start >= span.end) {
    return "empty span [" + std::to_string(span.start) + "," +
           std::to_string(span.end) + ")";
  }
  if (span.end > text.size()) {
    return "span [" + std::to_string(span.start) + "," +
           std::to_string(span.end) + ") exceeds text length " +
           std::to_string(text.size());
  }
  if (text.substr(span.start, span.end - span.start) != span.raw_text) {
    return "span [" + std::to_string(span.start) + "," +
           std::to_string(span.end) + ") text \"" + span.raw_text +
           "\" does not match note text";
  }
  return std::nullopt;
}

std::optional<std::string> CheckSpans(std::string_view text,
                                      std::span<const EntitySpan> spans) {
  for (const auto& s : spans) {
    if (auto err = CheckSpan(text, s)) return err;
  }
  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return spans[a].start < spans[b].start;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& prev = spans[order[i - 1]];
    const auto& cur = spans[order[i]];
    if (cur.start < prev.end) {
      return "spans [" + std::to_string(prev.start) + "," +
             std::to_string(prev.end) + ") and [" +
             std::to_string(cur.start) + "," + std::to_string(cur.end) +
             ") overlap";
    }
  }
  return std::nullopt;
}

}  // namespace perio
