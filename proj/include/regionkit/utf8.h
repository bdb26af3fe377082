// Copyright 2026 The Regionkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef REGIONKIT_UTF8_H_
#define REGIONKIT_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace regionkit::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the code point starting at `pos` and advances `pos` past it.
// Invalid sequences decode to U+FFFD and consume one byte.
char32_t Next(std::string_view s, std::size_t& pos);

void Append(std::string& out, char32_t cp);

bool IsCjk(char32_t cp);

// ASCII punctuation plus the CJK and full-width punctuation blocks.
bool IsPunctuation(char32_t cp);

// ASCII whitespace plus the ideographic space.
bool IsSpace(char32_t cp);

// ASCII-only lowercase; other bytes pass through untouched.
std::string AsciiLower(std::string_view s);

std::string_view TrimAscii(std::string_view s);

// Lowercases, trims, and collapses internal whitespace runs to one space.
std::string NormalizeWhitespace(std::string_view s);

}  // namespace regionkit::utf8

#endif  // REGIONKIT_UTF8_H_
