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

// Rule-based entity extraction over clinical note text.
//
// Diagnoses are read from statements, which begin at an anchor ("D:", "D-",
// "Diagnosis:", "Dx:") or at a sentence that opens with a diagnosis phrase
// ("Generalized Stage 3 Grade B"). Inside a statement the extractor finds
// status words, "Stage <numeral>", "Grade <letter>", extent adjectives and
// subtype phrases. An extent adjective only counts when the nearest head to
// its right is a status word or a stage/grade marker, so "with Generalized
// Recession" contributes nothing.

#ifndef PERIO_EXTRACTION_H_
#define PERIO_EXTRACTION_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perio/corpus.h"
#include "perio/model.h"

namespace perio {

enum class ExtractionMode {
  kStrict,
  // Also accepts bare "III B", "IIIB" and "Stage 3 B" forms.
  kInformal,
};

std::optional<ExtractionMode> ParseExtractionMode(std::string_view name);

struct ExtractorConfig {
  ExtractionMode mode = ExtractionMode::kStrict;
  // Words that open a statement when followed by ':' or '-'.
  std::vector<std::string> anchors = {"D", "Dx", "Diagnosis", "Diagnoses"};
  // Token sequences that mark a statement as hedged.
  std::vector<std::string> hedge_cues = {
      "to be confirmed", "to be determined", "tbd", "tbc", "rule out",
      "r / o", "possible", "possibly", "probable", "probably", "suspected",
      "suspect", "likely", "questionable", "pending", "provisional",
      "tentative"};
};

struct Statement {
  std::size_t start = 0;
  std::size_t end = 0;
  bool anchored = false;
  bool hedged = false;

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Extraction {
  std::vector<EntitySpan> spans;  // Sorted by start offset.
  std::vector<Statement> statements;

  bool hedged() const;
};

Extraction ExtractEntities(std::string_view text,
                           const ExtractorConfig& config = {});

// Keyword scan used to bucket notes by status when picking seed templates.
// Returns the most severe status mentioned; health words only count on lines
// that talk about the gingiva or periodontium.
std::optional<PeriodontalStatus> DetectStatusRuleBased(std::string_view text);

// Anything that turns a note into spans: the built-in grammar, or a model
// whose output was produced elsewhere.
class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual std::vector<EntitySpan> Extract(const Note& note) const = 0;
  // Statement-level hedge flag; extractors without that notion return false.
  virtual bool Hedged(const Note& /*note*/) const { return false; }
};

class GrammarExtractor : public Extractor {
 public:
  explicit GrammarExtractor(ExtractorConfig config = {})
      : config_(std::move(config)) {}

  std::vector<EntitySpan> Extract(const Note& note) const override;
  bool Hedged(const Note& note) const override;

  const ExtractorConfig& config() const { return config_; }

 private:
  ExtractorConfig config_;
};

// Serves spans loaded from a prediction file, keyed by note id.
class PrecomputedExtractor : public Extractor {
 public:
  explicit PrecomputedExtractor(
      std::map<std::string, std::vector<EntitySpan>> predictions)
      : predictions_(std::move(predictions)) {}

  // Notes without predictions yield no spans.
  std::vector<EntitySpan> Extract(const Note& note) const override;

 private:
  std::map<std::string, std::vector<EntitySpan>> predictions_;
};

// Reads a prediction file (corpus span schema, note_id + spans) and checks
// every span against the referenced note's text. Throws DataError for
// unknown note ids, out-of-bounds spans and text mismatches.
std::map<std::string, std::vector<EntitySpan>> LoadExternalPredictions(
    const std::filesystem::path& path, std::span<const AnnotatedNote> corpus);
std::map<std::string, std::vector<EntitySpan>> ParseExternalPredictions(
    std::string_view contents, const std::string& source,
    std::span<const AnnotatedNote> corpus);

}  // namespace perio

#endif  // PERIO_EXTRACTION_H_
