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

#include "perio/pipeline.h"

#include <algorithm>
#include <thread>

#include "perio/normalization.h"

namespace perio {

AnnotatedNote PredictNote(const AnnotatedNote& note,
                          const Extractor& extractor) {
  AnnotatedNote out;
  out.note = note.note;
  out.meta = note.meta;
  out.annotation_source = AnnotationSource::kPredicted;
  out.spans = extractor.Extract(note.note);
  std::sort(out.spans.begin(), out.spans.end(),
            [](const EntitySpan& a, const EntitySpan& b) {
              return a.start < b.start;
            });
  out.record = DeriveRecord(note.note.text, out.spans);
  if (out.record) out.guideline = ClassifyGuidelineVersion(*out.record);
  if (extractor.Hedged(note.note)) out.flags.push_back("hedged");
  return out;
}

std::vector<AnnotatedNote> PredictCorpus(std::span<const AnnotatedNote> notes,
                                         const Extractor& extractor,
                                         unsigned jobs) {
  std::vector<AnnotatedNote> out(notes.size());
  const std::size_t workers =
      std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(notes.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < notes.size(); ++i) {
      out[i] = PredictNote(notes[i], extractor);
    }
    return out;
  }
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < notes.size(); i += workers) {
        out[i] = PredictNote(notes[i], extractor);
      }
    });
  }
  for (auto& t : threads) t.join();
  return out;
}

}  // namespace perio
