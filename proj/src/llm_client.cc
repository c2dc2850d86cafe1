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

#include "perio/llm_client.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "perio/error.h"

namespace perio {
namespace {

constexpr char kSystemMessage[] =
    "You write realistic clinical notes for a dental clinic. Follow the "
    "user's instructions exactly.";

bool InRange(double v) { return v > 0.0 && v <= 2.0; }

}  // namespace

void GenerationConfig::Validate() const {
  if (variants_per_template < 1) {
    throw ConfigError("variants_per_template must be at least 1");
  }
  if (!InRange(temperature)) {
    throw ConfigError("temperature must be in (0, 2]");
  }
  if (!InRange(top_p)) throw ConfigError("top_p must be in (0, 2]");
  if (max_concurrent_requests < 1) {
    throw ConfigError("max_concurrent_requests must be at least 1");
  }
  if (endpoint_url.empty()) throw ConfigError("endpoint_url is not set");
  if (model_name.empty()) throw ConfigError("model_name is not set");
}

HttpChatClient::HttpChatClient(GenerationConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
  const std::string& url = config_.endpoint_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint_url \"" + url + "\" has no scheme");
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("endpoint_url scheme must be http or https");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    throw ConfigError("this build has no TLS support; use an http endpoint");
  }
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (origin_.size() <= scheme_end + 3) {
    throw ConfigError("endpoint_url \"" + url + "\" has no host");
  }
}

std::string HttpChatClient::RequestBody(const ChatRequest& request) const {
  nlohmann::ordered_json body;
  body["model"] = config_.model_name;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", request.system}},
       {{"role", "user"}, {"content", request.user}}});
  body["temperature"] = config_.temperature;
  body["top_p"] = config_.top_p;
  return body.dump();
}

std::string HttpChatClient::Complete(const ChatRequest& request) {
  const std::string body = RequestBody(request);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  std::string last_error;
  const std::size_t attempts = config_.retry_limit + 1;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const auto shift = std::min<std::size_t>(attempt - 1, 6);
      std::this_thread::sleep_for(config_.retry_backoff * (1 << shift));
    }
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw TransportError("HTTP " + std::to_string(res->status) + ": " +
                           res->body.substr(0, 200));
    }
    auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_object() && j.contains("choices") && j["choices"].is_array() &&
        !j["choices"].empty()) {
      const auto& choice = j["choices"][0];
      if (choice.contains("message") && choice["message"].is_object() &&
          choice["message"].contains("content") &&
          choice["message"]["content"].is_string()) {
        return choice["message"]["content"].get<std::string>();
      }
    }
    throw TransportError("response has no choices[0].message.content");
  }
  throw TransportError(last_error + " (gave up after " +
                       std::to_string(attempts) + " attempts)");
}

std::string ResolveApiKey(const GenerationConfig& config) {
  const char* value = std::getenv(config.api_key_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw ConfigError("environment variable " + config.api_key_env +
                      " holding the API key is not set");
  }
  return value;
}

std::vector<AnnotatedNote> GenerateLlm(std::span<const SeedTemplate> templates,
                                       const GenerationConfig& config,
                                       const PromptConfig& prompt,
                                       ChatClient& client) {
  config.Validate();
  const std::size_t per = config.variants_per_template;
  const std::size_t total = templates.size() * per;
  std::vector<std::string> prompts;
  for (const SeedTemplate& t : templates) prompts.push_back(BuildPrompt(t, prompt));

  std::vector<std::string> completions(total);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (!failed) {
      const std::size_t job = next++;
      if (job >= total) return;
      const std::size_t ti = job / per;
      try {
        completions[job] = client.Complete({kSystemMessage, prompts[ti]});
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true)) {
          error = std::make_exception_ptr(TransportError(
              "template \"" + templates[ti].note.note_id + "\" variant " +
              std::to_string(job % per) + ": " + e.what()));
        }
        return;
      }
    }
  };
  const std::size_t workers =
      std::min(config.max_concurrent_requests, std::max<std::size_t>(total, 1));
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<AnnotatedNote> out;
  out.reserve(total);
  for (std::size_t job = 0; job < total; ++job) {
    const SeedTemplate& t = templates[job / per];
    ParsedCompletion parsed = ParseCompletion(completions[job]);
    AnnotatedNote a;
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "-llm%02zu", job % per);
    a.note.note_id = t.note.note_id + suffix;
    a.note.site_id = t.note.site_id;
    a.note.text = std::move(parsed.text);
    a.note.provenance = Provenance::kLlmGenerated;
    a.annotation_source = AnnotationSource::kEmbedded;
    a.record = parsed.record;
    if (!a.record) a.flags.push_back("unparseable_trailer");
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace perio
