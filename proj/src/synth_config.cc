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

#include "perio/synth_config.h"

#include <charconv>
#include <functional>
#include <map>

#include "perio/error.h"

namespace perio {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

SynthConfig ParseSynthConfig(std::string_view contents,
                             const std::string& source,
                             const std::filesystem::path& base_dir) {
  SynthConfig c;
  std::size_t line_number = 0;
  auto fail = [&](const std::string& what) {
    throw ConfigError(source + ":" + std::to_string(line_number) + ": " + what);
  };
  auto real = [&](const std::string& v) {
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
      fail("expected a number, got \"" + v + "\"");
    }
    return out;
  };
  auto count = [&](const std::string& v) {
    std::size_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
      fail("expected a non-negative integer, got \"" + v + "\"");
    }
    return out;
  };

  using Setter = std::function<void(const std::string&)>;
  GenerationConfig& g = c.generation;
  PerturbationSpec& p = c.perturbation;
  const std::map<std::string, Setter> setters = {
      {"endpoint_url", [&](const std::string& v) { g.endpoint_url = v; }},
      {"model_name", [&](const std::string& v) { g.model_name = v; }},
      {"api_key_env", [&](const std::string& v) { g.api_key_env = v; }},
      {"temperature", [&](const std::string& v) { g.temperature = real(v); }},
      {"top_p", [&](const std::string& v) { g.top_p = real(v); }},
      {"max_concurrent_requests",
       [&](const std::string& v) { g.max_concurrent_requests = count(v); }},
      {"retry_limit", [&](const std::string& v) { g.retry_limit = count(v); }},
      {"retry_backoff_ms",
       [&](const std::string& v) {
         g.retry_backoff = std::chrono::milliseconds(count(v));
       }},
      {"timeout_s",
       [&](const std::string& v) { g.timeout = std::chrono::seconds(count(v)); }},
      {"variants_per_template",
       [&](const std::string& v) { g.variants_per_template = count(v); }},
      {"prompt_file",
       [&](const std::string& v) { c.prompt_file = base_dir / v; }},
      {"typo_rate", [&](const std::string& v) { p.typo_rate = real(v); }},
      {"informal_format_rate",
       [&](const std::string& v) { p.informal_format_rate = real(v); }},
      {"anchor_variation_rate",
       [&](const std::string& v) { p.anchor_variation_rate = real(v); }},
      {"multi_diagnosis_rate",
       [&](const std::string& v) { p.multi_diagnosis_rate = real(v); }},
      {"distractor_extent_rate",
       [&](const std::string& v) { p.distractor_extent_rate = real(v); }},
  };

  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    const std::string line = Trim(contents.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_number;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) fail("unknown key \"" + key + "\"");
    it->second(value);
  }
  try {
    p.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

SynthConfig LoadSynthConfig(const std::filesystem::path& path) {
  std::string contents;
  try {
    contents = ReadFile(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return ParseSynthConfig(contents, path.string(), path.parent_path());
}

}  // namespace perio
