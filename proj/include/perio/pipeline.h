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

// Applies an extractor to a corpus and derives per-note records.

#ifndef PERIO_PIPELINE_H_
#define PERIO_PIPELINE_H_

#include <span>
#include <vector>

#include "perio/corpus.h"
#include "perio/extraction.h"

namespace perio {

// Replaces the note's spans with the extractor's output, derives the record
// and guideline version, and marks the note Predicted. Patient metadata is
// kept; QA verdicts and flags are reset ("hedged" is set when applicable).
AnnotatedNote PredictNote(const AnnotatedNote& note,
                          const Extractor& extractor);

// PredictNote over every note on up to `jobs` threads. Output order matches
// input order.
std::vector<AnnotatedNote> PredictCorpus(std::span<const AnnotatedNote> notes,
                                         const Extractor& extractor,
                                         unsigned jobs = 1);

}  // namespace perio

#endif  // PERIO_PIPELINE_H_
