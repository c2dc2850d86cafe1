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

// Key-value configuration for the synth subcommand.
//
//   # comment
//   endpoint_url = http://127.0.0.1:8080/v1/chat/completions
//   model_name = gpt-4
//   api_key_env = OPENAI_API_KEY
//   temperature = 1
//   top_p = 1
//   max_concurrent_requests = 4
//   retry_limit = 3
//   retry_backoff_ms = 500
//   timeout_s = 120
//   variants_per_template = 10
//   prompt_file = prompt.txt
//   typo_rate = 0.15
//   informal_format_rate = 0.15
//   anchor_variation_rate = 0.15
//   multi_diagnosis_rate = 0.15
//   distractor_extent_rate = 0.15

#ifndef PERIO_SYNTH_CONFIG_H_
#define PERIO_SYNTH_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "perio/llm_client.h"
#include "perio/synthesis.h"

namespace perio {

struct SynthConfig {
  GenerationConfig generation;
  PerturbationSpec perturbation;
  // Resolved against the config file's directory.
  std::optional<std::filesystem::path> prompt_file;
};

// Throws ConfigError on unknown keys, malformed lines and bad numbers.
SynthConfig ParseSynthConfig(std::string_view contents,
                             const std::string& source,
                             const std::filesystem::path& base_dir);
SynthConfig LoadSynthConfig(const std::filesystem::path& path);

}  // namespace perio

#endif  // PERIO_SYNTH_CONFIG_H_
