// Copyright 2026 The qstance Authors.
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

// Minimal UTF-8 helpers for French text. Character classes cover ASCII,
// Latin-1 Supplement and Latin Extended-A, which is everything the
// segmenter and the pattern matcher need to reason about.
//
// All character offsets exposed by the toolkit (sentence boundaries, gold
// spans, entity mentions) count Unicode code points, not bytes.

#ifndef QSTANCE_UTIL_UTF8_H_
#define QSTANCE_UTIL_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace qstance::utf8 {

// Invalid sequences decode to U+FFFD.
std::u32string Decode(std::string_view text);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t c);

size_t Length(std::string_view text);

// Code point substring [begin, end) of a UTF-8 string.
std::string Substr(std::string_view text, size_t begin, size_t end);

bool IsSpace(char32_t c);
bool IsLetter(char32_t c);
bool IsUpper(char32_t c);
bool IsLower(char32_t c);
bool IsDigit(char32_t c);

char32_t ToLower(char32_t c);

// Maps accented Latin letters onto their base letter (é -> e, Ç -> C).
char32_t FoldAccent(char32_t c);

// Lowercases, unifies typographic apostrophes and hyphens, collapses
// whitespace runs (including no-break spaces) to one ASCII space, and
// optionally strips accents.
std::u32string NormalizeForMatch(std::u32string_view text, bool fold_accents);

// Strips leading and trailing whitespace (including no-break spaces).
std::string Trim(std::string_view text);

}  // namespace qstance::utf8

#endif  // QSTANCE_UTIL_UTF8_H_
