// Copyright 2026 The bnasr Authors.
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

#ifndef BNASR_UTF8_H_
#define BNASR_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace bnasr {

// Decodes UTF-8 into Unicode scalar values. Throws FormatError on
// ill-formed input (overlong forms, surrogates, truncated sequences).
std::u32string Utf8Decode(std::string_view bytes);

std::string Utf8Encode(std::u32string_view text);
std::string Utf8Encode(char32_t c);

// "U+0964" style label for diagnostics.
std::string CodepointLabel(char32_t c);

// Splits on runs of ASCII whitespace; empty tokens are dropped.
std::vector<std::string> SplitWhitespace(std::string_view s);

// Splits on a single delimiter, keeping empty fields.
std::vector<std::string> SplitFields(std::string_view s, char delim);

// Reads a whole file; throws IoError.
std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view contents);

}  // namespace bnasr

#endif  // BNASR_UTF8_H_
