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

// Synthetic corpus generation: seed template selection, prompt assembly, the
// offline generator, and label QA for generated notes. The chat-endpoint
// client lives in llm_client.h.

#ifndef PERIO_SYNTHESIS_H_
#define PERIO_SYNTHESIS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perio/corpus.h"
#include "perio/model.h"

namespace perio {

struct SeedTemplate {
  Note note;
  PeriodontalStatus status_category = PeriodontalStatus::kHealth;
  DiagnosisRecord embedded_record;
};

// Buckets notes with DetectStatusRuleBased and draws `per_category` notes
// from each of Periodontitis, Gingivitis and Health (in that order) without
// replacement. The embedded record is the note's own record when its status
// matches the bucket, else the record derived by the grammar extractor when
// that matches, else a bare record with the bucket status. Throws DataError
// naming the category and the shortfall when a bucket is too small.
std::vector<SeedTemplate> SelectSeedTemplates(
    std::span<const AnnotatedNote> corpus, std::size_t per_category,
    std::uint64_t seed);

// Seed templates as corpus lines ("record" holds the embedded record).
std::vector<AnnotatedNote> TemplatesToCorpus(
    std::span<const SeedTemplate> templates);
// Throws DataError for notes without a record.
std::vector<SeedTemplate> TemplatesFromCorpus(
    std::span<const AnnotatedNote> notes);

// Free-text sections of the generation prompt.
struct PromptConfig {
  std::string rules;
  std::string components;
  // Appended to the generated diagnosis-specific labeling instructions.
  std::string labeling;

  static PromptConfig Default();
};

// Reads a prompt file made of "[rules]", "[components]" and "[labeling]"
// sections. Sections that are not present keep their default text. Throws
// FormatError on unknown section names or text before the first section.
PromptConfig ParsePromptConfig(std::string_view contents,
                               const std::string& source);
PromptConfig LoadPromptConfig(const std::filesystem::path& path);

inline constexpr std::string_view kSectionRules = "### RULES";
inline constexpr std::string_view kSectionComponents = "### COMPONENTS";
inline constexpr std::string_view kSectionLabeling = "### LABELING";
inline constexpr std::string_view kSectionTemplate = "### TEMPLATE";

// Deterministic prompt for one template. The labeling section names only the
// dimensions the template's status permits and asks for a final
// "LABELS: {...}" line carrying the record.
std::string BuildPrompt(const SeedTemplate& seed, const PromptConfig& config);

// Body of the section whose header line equals `header`, up to the next
// "### " header. Empty when absent.
std::string PromptSection(std::string_view prompt, std::string_view header);

inline constexpr std::string_view kTrailerPrefix = "LABELS:";

// Splits a completion into note text and the record from its trailer line.
// The trailer is the last non-blank line starting with "LABELS:"; keys are
// the dimension keys, values canonical names or null. `record` is empty when
// the trailer is missing, malformed or fails ValidateRecord.
struct ParsedCompletion {
  std::string text;
  std::optional<DiagnosisRecord> record;
};
ParsedCompletion ParseCompletion(std::string_view completion);

// Trailer line for `record`, as the prompt asks the model to write it.
std::string FormatTrailer(const DiagnosisRecord& record);

struct PerturbationSpec {
  double typo_rate = 0.0;
  double informal_format_rate = 0.0;
  double anchor_variation_rate = 0.0;
  double multi_diagnosis_rate = 0.0;
  double distractor_extent_rate = 0.0;
  std::uint64_t rng_seed = 0;

  // Throws ConfigError when a rate is outside [0, 1].
  void Validate() const;
};

// Notes built around each template's embedded record, with spans marking
// every entity of the diagnosis statement. With all rates zero each note
// carries "D: <Extent> <Status> Stage <Roman> Grade <Letter>" (fields the
// record lacks are omitted) among filler sentences. Pure function of its
// arguments; note ids are "<template id>-off<NN>".
std::vector<AnnotatedNote> GenerateOffline(
    std::span<const SeedTemplate> templates, std::size_t variants_per_template,
    const PerturbationSpec& spec);

// Compares a note's embedded record with the grammar extractor's reading of
// its text (informal mode). Each differing dimension yields a discrepancy;
// the proposal is the observed value, or blank when the text does not
// support any value.
QaVerdict ValidateLabels(const AnnotatedNote& note);

// Applies the verdict's proposals to the note's record and marks the verdict
// autofixed. A note without a record takes the observed status. The
// corrected record is sanitized so it passes ValidateRecord.
void ApplyCorrections(AnnotatedNote* note, QaVerdict verdict);

}  // namespace perio

#endif  // PERIO_SYNTHESIS_H_
