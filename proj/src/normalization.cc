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

#include "perio/normalization.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "lexicon.h"
#include "perio/tokenizer.h"

namespace perio {
namespace {

std::vector<std::string> Words(std::string_view raw) {
  std::vector<std::string> words;
  for (Token& t : Tokenize(raw)) {
    const auto d = unicode::DecodeAt(t.text, 0);
    if (t.text.size() == d.length && (!d.valid || unicode::IsPunctuation(d.cp))) {
      continue;
    }
    words.push_back(std::move(t.text));
  }
  return words;
}

// Optional leading keyword, then exactly one value token.
template <typename IsKeyword, typename ParseValue>
auto KeywordValue(std::string_view raw, IsKeyword is_keyword,
                  ParseValue parse) -> decltype(parse(raw)) {
  std::vector<std::string> words = Words(raw);
  if (words.size() == 2 && is_keyword(words[0])) return parse(words[1]);
  if (words.size() == 1) return parse(words[0]);
  return std::nullopt;
}

template <typename V, typename Lookup>
std::optional<V> UniqueWordValue(std::string_view raw, Lookup lookup) {
  std::optional<V> found;
  for (const std::string& w : Words(raw)) {
    auto v = lookup(w);
    if (!v) continue;
    if (found && *found != *v) return std::nullopt;
    found = v;
  }
  return found;
}

std::optional<Subtype> SubtypeFromWords(std::string_view raw) {
  using lexicon::SubtypeWord;
  bool intact = false, reduced = false, stable = false, non = false;
  for (const std::string& w : Words(raw)) {
    auto v = lexicon::SubtypeVocab(w);
    if (!v) continue;
    switch (*v) {
      case SubtypeWord::kIntact: intact = true; break;
      case SubtypeWord::kReduced: reduced = true; break;
      case SubtypeWord::kStable:
      case SubtypeWord::kPast:
      case SubtypeWord::kHistory:
      case SubtypeWord::kTreated: stable = true; break;
      case SubtypeWord::kNon:
      case SubtypeWord::kNonPeriodontitis: non = true; break;
      case SubtypeWord::kPeriodontium: break;
    }
  }
  if (intact && !reduced) return Subtype::kIntactPeriodontium;
  if (reduced && !intact) {
    if (non && !stable) return Subtype::kReducedNonPeriodontitis;
    if (stable && !non) return Subtype::kReducedStablePeriodontitis;
  }
  return std::nullopt;
}

bool IsSentenceBoundary(std::string_view gap) {
  for (std::size_t i = 0; i < gap.size(); ++i) {
    const char c = gap[i];
    if (c == '\n') return true;
    if (c == '.' || c == ';' || c == '!' || c == '?') {
      // "3.5" is not a boundary; "III. Grade" is.
      if (i + 1 == gap.size() || gap[i + 1] == ' ' || gap[i + 1] == '\t' ||
          gap[i + 1] == '\r' || gap[i + 1] == '\n') {
        return true;
      }
    }
  }
  return false;
}

struct Group {
  std::optional<PeriodontalStatus> status;
  std::optional<Stage> stage;
  std::optional<Grade> grade;
  std::optional<Extent> extent;
  std::optional<Subtype> subtype;

  bool empty() const {
    return !status && !stage && !grade && !extent && !subtype;
  }

  // Records need a status; a bare stage or grade implies periodontitis.
  std::optional<DiagnosisRecord> ToRecord() const {
    DiagnosisRecord r;
    if (status) {
      r.status = *status;
    } else if (stage || grade) {
      r.status = PeriodontalStatus::kPeriodontitis;
    } else {
      return std::nullopt;
    }
    switch (r.status) {
      case PeriodontalStatus::kPeriodontitis:
        r.stage = stage, r.grade = grade, r.extent = extent;
        break;
      case PeriodontalStatus::kGingivitis:
        r.extent = extent, r.subtype = subtype;
        break;
      case PeriodontalStatus::kHealth:
        r.subtype = subtype;
        break;
    }
    return r;
  }
};

}  // namespace

std::size_t EditDistance(std::string_view a, std::string_view b) {
  const std::string x = lexicon::Lower(a);
  const std::string y = lexicon::Lower(b);
  const std::size_t n = x.size(), m = y.size();
  std::vector<std::vector<std::size_t>> d(n + 1,
                                          std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = x[i - 1] == y[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && x[i - 1] == y[j - 2] && x[i - 2] == y[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

std::optional<Label> NormalizeValue(Dimension dimension,
                                    std::string_view raw) {
  if (auto exact = ParseLabel(dimension, raw)) return exact;
  switch (dimension) {
    case Dimension::kStatus:
      if (auto v = UniqueWordValue<PeriodontalStatus>(raw, lexicon::StatusWord)) {
        return *v;
      }
      break;
    case Dimension::kExtent:
      if (auto v = UniqueWordValue<Extent>(raw, lexicon::ExtentWord)) return *v;
      break;
    case Dimension::kStage:
      if (auto v = KeywordValue(
              raw, lexicon::IsStageKeyword,
              [](std::string_view t) { return lexicon::StageNumeral(t, true); })) {
        return *v;
      }
      break;
    case Dimension::kGrade:
      if (auto v = KeywordValue(
              raw, lexicon::IsGradeKeyword,
              [](std::string_view t) { return lexicon::GradeLetter(t, true); })) {
        return *v;
      }
      break;
    case Dimension::kSubtype:
      if (auto v = SubtypeFromWords(raw)) return *v;
      break;
  }
  return std::nullopt;
}

std::vector<DiagnosisRecord> InferCandidates(
    std::string_view text, std::span<const EntitySpan> spans) {
  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return spans[a].start < spans[b].start;
  });

  std::vector<DiagnosisRecord> out;
  Group cur;
  auto flush = [&] {
    if (auto r = cur.ToRecord()) out.push_back(*r);
    cur = Group{};
  };
  auto boundary_between = [&](const EntitySpan& a, const EntitySpan& b) {
    if (b.start <= a.end || a.end > text.size()) return false;
    return IsSentenceBoundary(
        text.substr(a.end, std::min(b.start, text.size()) - a.end));
  };

  for (std::size_t i = 0; i < order.size(); ++i) {
    const EntitySpan& s = spans[order[i]];
    if (i > 0 && boundary_between(spans[order[i - 1]], s)) flush();
    const EntitySpan* next = nullptr;
    if (i + 1 < order.size() && !boundary_between(s, spans[order[i + 1]])) {
      next = &spans[order[i + 1]];
    }

    std::visit(
        [&](auto v) {
          using T = decltype(v);
          if constexpr (std::is_same_v<T, PeriodontalStatus>) {
            if (cur.status ||
                (v != PeriodontalStatus::kPeriodontitis &&
                 (cur.stage || cur.grade))) {
              flush();
            }
            cur.status = v;
          } else if constexpr (std::is_same_v<T, Stage> ||
                               std::is_same_v<T, Grade>) {
            auto& slot = [&]() -> std::optional<T>& {
              if constexpr (std::is_same_v<T, Stage>) {
                return cur.stage;
              } else {
                return cur.grade;
              }
            }();
            if (slot || (cur.status &&
                         *cur.status != PeriodontalStatus::kPeriodontitis)) {
              flush();
            }
            // flush() reset cur; the reference still points into it.
            slot = v;
          } else if constexpr (std::is_same_v<T, Extent>) {
            // An extent directly followed by a status word modifies that
            // status, so it opens the next diagnosis when this one already
            // has its own head.
            const bool precedes_new_head =
                next && next->dimension() == Dimension::kStatus &&
                (cur.status || cur.stage || cur.grade);
            if (cur.extent || precedes_new_head) flush();
            cur.extent = v;
          } else {
            if (cur.subtype) flush();
            cur.subtype = v;
          }
        },
        s.value);
  }
  if (!cur.empty()) flush();
  return out;
}

std::optional<DiagnosisRecord> Adjudicate(
    std::span<const DiagnosisRecord> candidates) {
  if (candidates.empty()) return std::nullopt;
  PeriodontalStatus status = candidates.front().status;
  for (const auto& c : candidates) status = MaxSeverity(status, c.status);

  DiagnosisRecord out;
  out.status = status;
  std::set<Subtype> subtypes;
  for (const auto& c : candidates) {
    if (c.status != status) continue;
    out.stage = MaxStage(out.stage, c.stage);
    out.grade = MaxGrade(out.grade, c.grade);
    out.extent = MaxExtent(out.extent, c.extent);
    if (c.subtype) subtypes.insert(*c.subtype);
  }
  if (subtypes.size() == 1) out.subtype = *subtypes.begin();

  switch (status) {
    case PeriodontalStatus::kPeriodontitis:
      out.subtype.reset();
      break;
    case PeriodontalStatus::kGingivitis:
      out.stage.reset(), out.grade.reset();
      break;
    case PeriodontalStatus::kHealth:
      out.stage.reset(), out.grade.reset(), out.extent.reset();
      break;
  }
  return out;
}

std::optional<DiagnosisRecord> DeriveRecord(
    std::string_view text, std::span<const EntitySpan> spans) {
  const std::vector<DiagnosisRecord> candidates = InferCandidates(text, spans);
  return Adjudicate(candidates);
}

GuidelineVersion ClassifyGuidelineVersion(const DiagnosisRecord& record) {
  if (record.status != PeriodontalStatus::kPeriodontitis) {
    return GuidelineVersion::kNotApplicable;
  }
  return record.stage && record.grade ? GuidelineVersion::kCurrent2018
                                      : GuidelineVersion::kLegacy;
}

}  // namespace perio
