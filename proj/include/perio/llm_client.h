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

// Client for OpenAI-compatible chat-completions endpoints and the generation
// loop that turns seed templates into LLM-written notes.

#ifndef PERIO_LLM_CLIENT_H_
#define PERIO_LLM_CLIENT_H_

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "perio/corpus.h"
#include "perio/synthesis.h"

namespace perio {

struct GenerationConfig {
  std::size_t variants_per_template = 10;
  double temperature = 1.0;
  double top_p = 1.0;
  std::string model_name = "gpt-4";
  // Full URL of the chat-completions resource, for example
  // "https://api.openai.com/v1/chat/completions".
  std::string endpoint_url;
  // Name of the environment variable holding the bearer token.
  std::string api_key_env = "OPENAI_API_KEY";
  std::size_t max_concurrent_requests = 4;
  // Retries after the first attempt, for transport errors, 429 and 5xx.
  std::size_t retry_limit = 3;
  std::chrono::milliseconds retry_backoff{500};
  std::chrono::seconds timeout{120};

  // Throws ConfigError.
  void Validate() const;
};

struct ChatRequest {
  std::string system;
  std::string user;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Returns the assistant message content. Throws TransportError.
  virtual std::string Complete(const ChatRequest& request) = 0;
};

class HttpChatClient : public ChatClient {
 public:
  // Throws ConfigError for malformed or unsupported endpoint URLs.
  HttpChatClient(GenerationConfig config, std::string api_key);

  std::string Complete(const ChatRequest& request) override;

  // JSON body sent for `request`.
  std::string RequestBody(const ChatRequest& request) const;

 private:
  GenerationConfig config_;
  std::string api_key_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

// Reads the key named by config.api_key_env. Throws ConfigError when the
// variable is unset or empty.
std::string ResolveApiKey(const GenerationConfig& config);

// Issues variants_per_template independent requests per template, up to
// max_concurrent_requests at a time, and returns the notes in (template,
// variant) order. Each completion's trailer becomes the note's record; notes
// whose trailer cannot be read keep a null record and the flag
// "unparseable_trailer". Throws TransportError naming the template when a
// request still fails after all retries.
std::vector<AnnotatedNote> GenerateLlm(std::span<const SeedTemplate> templates,
                                       const GenerationConfig& config,
                                       const PromptConfig& prompt,
                                       ChatClient& client);

}  // namespace perio

#endif  // PERIO_LLM_CLIENT_H_
