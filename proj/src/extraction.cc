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

#include "perio/extraction.h"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "lexicon.h"
#include "perio/error.h"
#include "perio/normalization.h"
#include "perio/tokenizer.h"

namespace perio {
namespace {

using lexicon::Lower;

bool IsPunctToken(const Token& t) {
  const auto d = unicode::DecodeAt(t.text, 0);
  return t.text.size() == d.length && (!d.valid || unicode::IsPunctuation(d.cp));
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// Words an extent adjective may skip over on the way to its head noun.
bool IsHeadModifier(std::string_view lower) {
  static constexpr std::string_view kModifiers[] = {
      "chronic", "aggressive", "mild",    "moderate", "severe",
      "slight",  "plaque",     "induced", "marginal", "biofilm",
      "dental",  "gingival",   "periodontal", "clinical", "adult",
  };
  return std::find(std::begin(kModifiers), std::end(kModifiers), lower) !=
         std::end(kModifiers);
}

bool IsHealthQualifier(std::string_view lower) {
  return lower == "gingival" || lower == "periodontal" ||
         lower == "periodontally" || lower == "clinical" ||
         lower == "clinically";
}

struct CombinedStageGrade {
  Stage stage;
  Grade grade;
  std::size_t split;  // Byte offset of the grade letter within the token.
};

// "IIIB" / "3B".
std::optional<CombinedStageGrade> ParseCombined(std::string_view tok) {
  if (tok.size() < 2) return std::nullopt;
  auto grade = lexicon::GradeLetter(tok.substr(tok.size() - 1), false);
  auto stage = lexicon::StageNumeral(tok.substr(0, tok.size() - 1), false);
  if (!grade || !stage) return std::nullopt;
  return CombinedStageGrade{*stage, *grade, tok.size() - 1};
}

class StatementParser {
 public:
  StatementParser(std::string_view text, const ExtractorConfig& config)
      : text_(text), config_(config), tokens_(Tokenize(text)) {
    lower_.reserve(tokens_.size());
    for (const Token& t : tokens_) lower_.push_back(Lower(t.text));
  }

  Extraction Run() {
    for (auto [sb, se] : Sentences()) ParseSentence(sb, se);
    return std::move(out_);
  }

 private:
  bool informal() const { return config_.mode == ExtractionMode::kInformal; }

  bool IsWord(std::size_t i) const {
    return i < tokens_.size() && !IsPunctToken(tokens_[i]);
  }

  bool IsPunct(std::size_t i, std::string_view chars) const {
    return i < tokens_.size() && tokens_[i].text.size() == 1 &&
           chars.find(tokens_[i].text[0]) != std::string_view::npos;
  }

  std::vector<std::pair<std::size_t, std::size_t>> Sentences() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (i > start) {
        std::string_view gap =
            text_.substr(tokens_[i - 1].end, tokens_[i].start - tokens_[i - 1].end);
        if (gap.find('\n') != std::string_view::npos) {
          out.emplace_back(start, i);
          start = i;
        }
      }
      if (IsPunct(i, ".!?;")) {
        // Keep decimals such as "3.5" together.
        const bool decimal =
            tokens_[i].text == "." && i > 0 && i + 1 < tokens_.size() &&
            tokens_[i - 1].end == tokens_[i].start &&
            tokens_[i + 1].start == tokens_[i].end &&
            IsDigit(tokens_[i - 1].text.back()) &&
            IsDigit(tokens_[i + 1].text.front());
        if (decimal) continue;
        out.emplace_back(start, i);
        start = i + 1;
      }
    }
    out.emplace_back(start, tokens_.size());
    return out;
  }

  bool IsAnchor(std::size_t i, std::size_t end) const {
    if (!IsWord(i) || i + 1 >= end || !IsPunct(i + 1, ":-")) return false;
    for (const std::string& a : config_.anchors) {
      if (Lower(a) == lower_[i]) return true;
    }
    return false;
  }

  void ParseSentence(std::size_t sb, std::size_t se) {
    std::vector<std::size_t> anchors;
    for (std::size_t i = sb; i < se; ++i) {
      if (IsAnchor(i, se)) anchors.push_back(i);
    }
    const std::size_t prefix_end = anchors.empty() ? se : anchors.front();
    std::size_t first = sb;
    while (first < prefix_end && !IsWord(first)) ++first;
    if (first < prefix_end && OpensDiagnosis(first, prefix_end)) {
      ParseStatement(first, first, prefix_end, false);
    }
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      const std::size_t a = anchors[k];
      const std::size_t b = k + 1 < anchors.size() ? anchors[k + 1] : se;
      ParseStatement(a, a + 2, b, true);
    }
  }

  // Sentence-initial phrases that read as a diagnosis without an anchor.
  bool OpensDiagnosis(std::size_t i, std::size_t end) const {
    if (lexicon::ExtentWord(tokens_[i].text)) return true;
    if (auto s = lexicon::StatusWord(tokens_[i].text);
        s && *s != PeriodontalStatus::kHealth) {
      return true;
    }
    if (IsHealthQualifier(lower_[i])) {
      for (std::size_t j = i + 1; j < std::min(end, i + 3); ++j) {
        if (lexicon::StatusWord(tokens_[j].text) == PeriodontalStatus::kHealth) {
          return true;
        }
      }
    }
    std::vector<EntitySpan> scratch;
    return MatchStage(i, end, &scratch) || MatchGrade(i, end, &scratch) ||
           MatchSubtype(i, end, &scratch) || MatchBare(i, end, &scratch);
  }

  EntitySpan MakeSpan(Label value, std::size_t start, std::size_t end) const {
    return EntitySpan{value, start, end,
                      std::string(text_.substr(start, end - start))};
  }

  // Index of the value token after a keyword, allowing "Stage: III".
  std::size_t ValueIndex(std::size_t keyword, std::size_t end) const {
    std::size_t j = keyword + 1;
    if (j < end && IsPunct(j, ":-=")) ++j;
    return j;
  }

  std::optional<std::size_t> MatchStage(std::size_t k, std::size_t end,
                                        std::vector<EntitySpan>* spans) const {
    if (!IsWord(k) || !lexicon::IsStageKeyword(tokens_[k].text)) {
      return std::nullopt;
    }
    const std::size_t j = ValueIndex(k, end);
    if (j >= end) return std::nullopt;
    if (auto stage = lexicon::StageNumeral(tokens_[j].text, true)) {
      spans->push_back(MakeSpan(*stage, tokens_[k].start, tokens_[j].end));
      if (informal() && j + 1 < end) {
        if (auto grade = lexicon::GradeLetter(tokens_[j + 1].text, false)) {
          spans->push_back(
              MakeSpan(*grade, tokens_[j + 1].start, tokens_[j + 1].end));
          return j + 2;
        }
      }
      return j + 1;
    }
    if (informal()) {
      if (auto c = ParseCombined(tokens_[j].text)) {
        const std::size_t split = tokens_[j].start + c->split;
        spans->push_back(MakeSpan(c->stage, tokens_[k].start, split));
        spans->push_back(MakeSpan(c->grade, split, tokens_[j].end));
        return j + 1;
      }
    }
    return std::nullopt;
  }

  std::optional<std::size_t> MatchGrade(std::size_t k, std::size_t end,
                                        std::vector<EntitySpan>* spans) const {
    if (!IsWord(k) || !lexicon::IsGradeKeyword(tokens_[k].text)) {
      return std::nullopt;
    }
    const std::size_t j = ValueIndex(k, end);
    if (j >= end) return std::nullopt;
    auto grade = lexicon::GradeLetter(tokens_[j].text, true);
    if (!grade) return std::nullopt;
    spans->push_back(MakeSpan(*grade, tokens_[k].start, tokens_[j].end));
    return j + 1;
  }

  // Informal bare forms: "III B" and "IIIB".
  std::optional<std::size_t> MatchBare(std::size_t k, std::size_t end,
                                       std::vector<EntitySpan>* spans) const {
    if (!informal() || !IsWord(k)) return std::nullopt;
    if (auto stage = lexicon::StageNumeral(tokens_[k].text, false);
        stage && k + 1 < end) {
      if (auto grade = lexicon::GradeLetter(tokens_[k + 1].text, false)) {
        spans->push_back(MakeSpan(*stage, tokens_[k].start, tokens_[k].end));
        spans->push_back(
            MakeSpan(*grade, tokens_[k + 1].start, tokens_[k + 1].end));
        return k + 2;
      }
    }
    if (auto c = ParseCombined(tokens_[k].text)) {
      const std::size_t split = tokens_[k].start + c->split;
      spans->push_back(MakeSpan(c->stage, tokens_[k].start, split));
      spans->push_back(MakeSpan(c->grade, split, tokens_[k].end));
      return k + 1;
    }
    return std::nullopt;
  }

  // "intact periodontium", "reduced periodontium ... stable periodontitis",
  // "reduced periodontium ... non-periodontitis". A reduced periodontium
  // without a qualifier is consumed but yields no span.
  std::optional<std::size_t> MatchSubtype(
      std::size_t k, std::size_t end, std::vector<EntitySpan>* spans) const {
    using lexicon::SubtypeWord;
    if (!IsWord(k) || k + 1 >= end) return std::nullopt;
    auto first = lexicon::SubtypeVocab(tokens_[k].text);
    if (!first || (*first != SubtypeWord::kIntact &&
                   *first != SubtypeWord::kReduced)) {
      return std::nullopt;
    }
    if (lexicon::SubtypeVocab(tokens_[k + 1].text) !=
        SubtypeWord::kPeriodontium) {
      return std::nullopt;
    }
    if (*first == SubtypeWord::kIntact) {
      spans->push_back(MakeSpan(Subtype::kIntactPeriodontium, tokens_[k].start,
                                tokens_[k + 1].end));
      return k + 2;
    }

    auto is_periodontitis = [&](std::size_t i) {
      return i < end && IsWord(i) &&
             lexicon::StatusWord(tokens_[i].text) ==
                 PeriodontalStatus::kPeriodontitis;
    };
    const std::size_t limit = std::min(end, k + 10);
    for (std::size_t j = k + 2; j < limit; ++j) {
      if (!IsWord(j)) continue;
      auto w = lexicon::SubtypeVocab(tokens_[j].text);
      std::optional<std::size_t> last;
      Subtype value = Subtype::kReducedStablePeriodontitis;
      if (w == SubtypeWord::kStable || w == SubtypeWord::kPast ||
          w == SubtypeWord::kTreated) {
        if (is_periodontitis(j + 1)) last = j + 1;
      } else if (w == SubtypeWord::kHistory) {
        if (j + 2 < end && lower_[j + 1] == "of" && is_periodontitis(j + 2)) {
          last = j + 2;
        }
      } else if (w == SubtypeWord::kNon) {
        value = Subtype::kReducedNonPeriodontitis;
        std::size_t p = j + 1;
        if (IsPunct(p, "-")) ++p;
        if (is_periodontitis(p)) last = p;
      } else if (w == SubtypeWord::kNonPeriodontitis) {
        value = Subtype::kReducedNonPeriodontitis;
        last = j;
      }
      if (last) {
        spans->push_back(
            MakeSpan(value, tokens_[k].start, tokens_[*last].end));
        return *last + 1;
      }
      if (lexicon::StatusWord(tokens_[j].text) ||
          lexicon::ExtentWord(tokens_[j].text) ||
          lexicon::IsStageKeyword(tokens_[j].text) ||
          lexicon::IsGradeKeyword(tokens_[j].text)) {
        break;
      }
    }
    return k + 2;
  }

  bool IsHealthHead(std::size_t k, std::size_t stmt_begin,
                    bool anchored) const {
    if (k > 0 && IsHealthQualifier(lower_[k - 1])) return true;
    return anchored && k == stmt_begin;
  }

  // Status word at k, with health restricted to periodontal context.
  std::optional<PeriodontalStatus> StatusAt(std::size_t k,
                                            std::size_t stmt_begin,
                                            bool anchored) const {
    if (!IsWord(k)) return std::nullopt;
    auto s = lexicon::StatusWord(tokens_[k].text);
    if (s == PeriodontalStatus::kHealth &&
        !IsHealthHead(k, stmt_begin, anchored)) {
      return std::nullopt;
    }
    return s;
  }

  // True when the nearest head to the right of the extent word at k is a
  // status word or a stage/grade marker.
  bool ExtentHasHead(std::size_t k, std::size_t stmt_begin, std::size_t end,
                     bool anchored) const {
    std::size_t j = k + 1;
    while (j < end && (IsPunct(j, ",-/()") || IsHeadModifier(lower_[j]))) {
      // A qualifier right before "health" is part of the head phrase.
      if (IsHealthQualifier(lower_[j]) && j + 1 < end &&
          lexicon::StatusWord(tokens_[j + 1].text) ==
              PeriodontalStatus::kHealth) {
        return true;
      }
      ++j;
    }
    if (j >= end) return false;
    if (StatusAt(j, stmt_begin, anchored)) return true;
    std::vector<EntitySpan> scratch;
    return MatchStage(j, end, &scratch) || MatchGrade(j, end, &scratch) ||
           MatchBare(j, end, &scratch);
  }

  bool IsHedged(std::size_t a, std::size_t b) const {
    for (const std::string& cue : config_.hedge_cues) {
      std::vector<std::string> parts;
      std::istringstream in(Lower(cue));
      for (std::string p; in >> p;) parts.push_back(p);
      if (parts.empty()) continue;
      for (std::size_t i = a; i + parts.size() <= b; ++i) {
        bool match = true;
        for (std::size_t p = 0; p < parts.size() && match; ++p) {
          match = lower_[i + p] == parts[p];
        }
        if (match) return true;
      }
    }
    return false;
  }

  // Parses tokens [a, b). `head` is the first token of the statement, which
  // is the anchor word for anchored statements.
  void ParseStatement(std::size_t head, std::size_t a, std::size_t b,
                      bool anchored) {
    Statement st;
    st.anchored = anchored;
    st.start = tokens_[head].start;
    st.end = b > head ? tokens_[b - 1].end : tokens_[head].end;
    st.hedged = IsHedged(a, b);
    out_.statements.push_back(st);

    std::vector<EntitySpan>& spans = out_.spans;
    std::size_t k = a;
    while (k < b) {
      if (!IsWord(k)) {
        ++k;
        continue;
      }
      if (auto next = MatchSubtype(k, b, &spans)) {
        k = *next;
      } else if (auto next = MatchStage(k, b, &spans)) {
        k = *next;
      } else if (auto next = MatchGrade(k, b, &spans)) {
        k = *next;
      } else if (auto next = MatchBare(k, b, &spans)) {
        k = *next;
      } else if (auto extent = lexicon::ExtentWord(tokens_[k].text)) {
        if (ExtentHasHead(k, a, b, anchored)) {
          spans.push_back(MakeSpan(*extent, tokens_[k].start, tokens_[k].end));
        }
        ++k;
      } else if (auto status = StatusAt(k, a, anchored)) {
        spans.push_back(MakeSpan(*status, tokens_[k].start, tokens_[k].end));
        ++k;
      } else {
        ++k;
      }
    }
  }

  std::string_view text_;
  const ExtractorConfig& config_;
  std::vector<Token> tokens_;
  std::vector<std::string> lower_;
  Extraction out_;
};

}  // namespace

std::optional<ExtractionMode> ParseExtractionMode(std::string_view name) {
  if (name == "strict") return ExtractionMode::kStrict;
  if (name == "informal") return ExtractionMode::kInformal;
  return std::nullopt;
}

bool Extraction::hedged() const {
  return std::any_of(statements.begin(), statements.end(),
                     [](const Statement& s) { return s.hedged; });
}

Extraction ExtractEntities(std::string_view text,
                           const ExtractorConfig& config) {
  return StatementParser(text, config).Run();
}

std::optional<PeriodontalStatus> DetectStatusRuleBased(std::string_view text) {
  std::optional<PeriodontalStatus> best;
  auto note = [&](PeriodontalStatus s) {
    best = best ? MaxSeverity(*best, s) : s;
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::vector<std::string> words;
    for (const Token& t : Tokenize(text.substr(pos, eol - pos))) {
      if (!IsPunctToken(t)) words.push_back(Lower(t.text));
    }
    pos = eol + 1;

    const bool periodontal_line = std::any_of(
        words.begin(), words.end(), [](const std::string& w) {
          return w == "gingival" || w == "periodontal" ||
                 w == "periodontium" || w == "gingiva";
        });
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::string& w = words[i];
      if (w == "periodontitis") {
        // Subtype qualifiers mention periodontitis without diagnosing it.
        const std::string prev = i > 0 ? words[i - 1] : "";
        const bool qualifier = prev == "stable" || prev == "past" ||
                               prev == "non" || prev == "treated" ||
                               (prev == "of" && i > 1 && words[i - 2] == "history");
        if (!qualifier) note(PeriodontalStatus::kPeriodontitis);
      } else if (w == "gingivitis") {
        note(PeriodontalStatus::kGingivitis);
      } else if ((w == "health" || w == "healthy") && periodontal_line) {
        note(PeriodontalStatus::kHealth);
      }
    }
  }
  return best;
}

std::vector<EntitySpan> GrammarExtractor::Extract(const Note& note) const {
  return ExtractEntities(note.text, config_).spans;
}

bool GrammarExtractor::Hedged(const Note& note) const {
  return ExtractEntities(note.text, config_).hedged();
}

std::vector<EntitySpan> PrecomputedExtractor::Extract(const Note& note) const {
  auto it = predictions_.find(note.note_id);
  if (it == predictions_.end()) return {};
  return it->second;
}

std::map<std::string, std::vector<EntitySpan>> ParseExternalPredictions(
    std::string_view contents, const std::string& source,
    std::span<const AnnotatedNote> corpus) {
  using Json = nlohmann::json;
  std::map<std::string, const Note*, std::less<>> notes;
  for (const auto& n : corpus) notes.emplace(n.note.note_id, &n.note);

  std::map<std::string, std::vector<EntitySpan>> out;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    auto fail = [&](const std::string& what) -> void {
      throw FormatError(source, line_number, what);
    };
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      fail(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("note_id") || !j["note_id"].is_string() ||
        !j.contains("spans") || !j["spans"].is_array()) {
      fail("prediction lines need a string \"note_id\" and a \"spans\" array");
    }
    const std::string id = j["note_id"].get<std::string>();
    auto note_it = notes.find(id);
    if (note_it == notes.end()) {
      throw DataError(source + ":" + std::to_string(line_number) +
                      ": unknown note_id \"" + id + "\"");
    }
    const std::string& text = note_it->second->text;

    std::vector<EntitySpan> spans;
    for (const Json& sj : j["spans"]) {
      std::optional<Dimension> dim;
      std::optional<Label> value;
      if (sj.is_object() && sj.contains("dimension") &&
          sj["dimension"].is_string()) {
        dim = ParseDimension(sj["dimension"].get<std::string>());
      }
      if (dim && sj.contains("value") && sj["value"].is_string()) {
        value = ParseLabel(*dim, sj["value"].get<std::string>());
      }
      if (!value || !sj.contains("start") || !sj.contains("end") ||
          !sj["start"].is_number_unsigned() || !sj["end"].is_number_unsigned()) {
        fail("span needs a known dimension/value and unsigned start/end");
      }
      EntitySpan span{*value, sj["start"].get<std::size_t>(),
                      sj["end"].get<std::size_t>(), {}};
      if (sj.contains("text") && sj["text"].is_string()) {
        span.raw_text = sj["text"].get<std::string>();
      } else if (span.start < span.end && span.end <= text.size()) {
        span.raw_text = text.substr(span.start, span.end - span.start);
      }
      if (auto err = CheckSpan(text, span)) {
        throw DataError(source + ":" + std::to_string(line_number) +
                        ": note \"" + id + "\": " + *err);
      }
      spans.push_back(std::move(span));
    }
    if (auto err = CheckSpans(text, spans)) {
      throw DataError(source + ":" + std::to_string(line_number) +
                      ": note \"" + id + "\": " + *err);
    }
    std::sort(spans.begin(), spans.end(),
              [](const auto& a, const auto& b) { return a.start < b.start; });
    if (!out.emplace(id, std::move(spans)).second) {
      throw DataError(source + ":" + std::to_string(line_number) +
                      ": duplicate predictions for note_id \"" + id + "\"");
    }
  }
  return out;
}

std::map<std::string, std::vector<EntitySpan>> LoadExternalPredictions(
    const std::filesystem::path& path, std::span<const AnnotatedNote> corpus) {
  return ParseExternalPredictions(ReadFile(path), path.string(), corpus);
}

}  // namespace perio
