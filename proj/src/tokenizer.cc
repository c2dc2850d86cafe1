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

#include "perio/tokenizer.h"

namespace perio {
namespace unicode {

Decoded DecodeAt(std::string_view text, std::size_t pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) return {b0, 1, true};

  std::size_t len;
  char32_t cp;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return {static_cast<char32_t>(-1), 1, false};
  }
  if (pos + len > text.size()) return {static_cast<char32_t>(-1), 1, false};
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return {static_cast<char32_t>(-1), 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms, surrogates and values past U+10FFFF.
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {static_cast<char32_t>(-1), 1, false};
  }
  return {cp, len, true};
}

bool IsSpace(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool IsPunctuation(char32_t cp) {
  if (cp < 0x80) {
    if (cp < 0x20 || cp == 0x7F) return true;  // Controls.
    const bool alnum = (cp >= U'0' && cp <= U'9') ||
                       (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
    return !alnum;
  }
  struct Range {
    char32_t lo, hi;
  };
  // Coarse punctuation and symbol blocks; everything else outside ASCII is
  // treated as a word character.
  static constexpr Range kRanges[] = {
      {0x80, 0x9F},     {0xA1, 0xA9},     {0xAB, 0xB4},     {0xB6, 0xB9},
      {0xBB, 0xBF},     {0xD7, 0xD7},     {0xF7, 0xF7},     {0x2010, 0x2027},
      {0x2030, 0x205E}, {0x20A0, 0x20CF}, {0x2190, 0x23FF}, {0x2500, 0x27BF},
      {0x2E00, 0x2E7F}, {0x3001, 0x3003}, {0x3008, 0x3011}, {0x3014, 0x301F},
      {0xFE50, 0xFE6B}, {0xFEFF, 0xFEFF}, {0xFF01, 0xFF0F}, {0xFF1A, 0xFF20},
      {0xFF3B, 0xFF40}, {0xFF5B, 0xFF65}, {0x1F000, 0x1FAFF},
  };
  for (const auto& r : kRanges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

}  // namespace unicode

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  std::size_t word_start = std::string_view::npos;

  auto close_word = [&](std::size_t end) {
    if (word_start == std::string_view::npos) return;
    tokens.push_back({std::string(text.substr(word_start, end - word_start)),
                      word_start, end});
    word_start = std::string_view::npos;
  };

  while (pos < text.size()) {
    const unicode::Decoded d = unicode::DecodeAt(text, pos);
    if (d.valid && unicode::IsSpace(d.cp)) {
      close_word(pos);
    } else if (!d.valid || unicode::IsPunctuation(d.cp)) {
      close_word(pos);
      tokens.push_back(
          {std::string(text.substr(pos, d.length)), pos, pos + d.length});
    } else if (word_start == std::string_view::npos) {
      word_start = pos;
    }
    pos += d.length;
  }
  close_word(pos);
  return tokens;
}

std::string Reconstruct(std::string_view text,
                        const std::vector<Token>& tokens) {
  std::string out;
  out.reserve(text.size());
  std::size_t prev = 0;
  for (const auto& t : tokens) {
    out.append(text.substr(prev, t.start - prev));
    out.append(t.text);
    prev = t.end;
  }
  out.append(text.substr(prev));
  return out;
}

}  // namespace perio
