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

#ifndef PERIO_TOKENIZER_H_
#define PERIO_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace perio {

// A token and its byte range [start, end) in the source text.
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

// Non-destructive tokenization of UTF-8 text. Tokens are maximal runs of
// word characters (letters, digits, marks) or single punctuation/symbol code
// points; everything between tokens is whitespace. Invalid UTF-8 bytes become
// one-byte tokens, so Reconstruct(text, Tokenize(text)) == text for any input.
std::vector<Token> Tokenize(std::string_view text);

// Reassembles the source from tokens plus the gaps between them.
std::string Reconstruct(std::string_view text, const std::vector<Token>& tokens);

namespace unicode {

// Decodes one code point at `pos`. Returns the code point and its length;
// malformed sequences decode as a single byte with code point -1.
struct Decoded {
  char32_t cp;
  std::size_t length;
  bool valid;
};
Decoded DecodeAt(std::string_view text, std::size_t pos);

bool IsSpace(char32_t cp);
bool IsPunctuation(char32_t cp);

}  // namespace unicode
}  // namespace perio

#endif  // PERIO_TOKENIZER_H_
