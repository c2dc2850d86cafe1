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

// Shared fixtures for the unit and acceptance tests.

#ifndef PERIO_TESTS_FIXTURES_H_
#define PERIO_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "perio/model.h"
#include "perio/synthesis.h"

namespace perio::testing {

// Diagnosis phrase as a clinician would write it, e.g. "Generalized
// Periodontitis Stage III Grade B".
inline std::string ClinicalPhrase(const DiagnosisRecord& r) {
  std::string out;
  auto add = [&](std::string_view word) {
    if (!out.empty()) out += ' ';
    out += word;
  };
  if (r.extent) add(Name(*r.extent));
  switch (r.status) {
    case PeriodontalStatus::kHealth:
      add("Gingival health");
      break;
    case PeriodontalStatus::kGingivitis:
      add("Gingivitis");
      break;
    case PeriodontalStatus::kPeriodontitis:
      add("Periodontitis");
      break;
  }
  if (r.stage) add("Stage " + std::string(Name(*r.stage)));
  if (r.grade) add("Grade " + std::string(Name(*r.grade)));
  if (r.subtype) {
    switch (*r.subtype) {
      case Subtype::kIntactPeriodontium:
        add("on an intact periodontium");
        break;
      case Subtype::kReducedStablePeriodontitis:
        add("on a reduced periodontium in a stable periodontitis patient");
        break;
      case Subtype::kReducedNonPeriodontitis:
        add("on a reduced periodontium in a non-periodontitis patient");
        break;
    }
  }
  return out;
}

// One template per legal record, so generated corpora cover every value
// combination.
inline std::vector<SeedTemplate> LegalRecordTemplates() {
  std::vector<SeedTemplate> out;
  std::size_t i = 0;
  for (const DiagnosisRecord& r : AllLegalRecords()) {
    SeedTemplate t;
    t.note.note_id = "legal-" + std::to_string(i);
    t.note.site_id = i % 2 ? "site2" : "site1";
    t.note.text = "D: " + ClinicalPhrase(r);
    t.status_category = r.status;
    t.embedded_record = r;
    out.push_back(std::move(t));
    ++i;
  }
  return out;
}

inline PerturbationSpec UniformRates(double rate, std::uint64_t seed) {
  PerturbationSpec s;
  s.typo_rate = rate;
  s.informal_format_rate = rate;
  s.anchor_variation_rate = rate;
  s.multi_diagnosis_rate = rate;
  s.distractor_extent_rate = rate;
  s.rng_seed = seed;
  return s;
}

inline std::string TestDataPath(const std::string& name) {
  return std::string(PERIO_TEST_DATA_DIR) + "/" + name;
}

}  // namespace perio::testing

#endif  // PERIO_TESTS_FIXTURES_H_
