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

#ifndef BNASR_TEXTNORM_H_
#define BNASR_TEXTNORM_H_

#include <string>
#include <string_view>
#include <vector>

namespace bnasr {

inline constexpr char32_t kDanda = U'।';
inline constexpr char32_t kDoubleDanda = U'॥';

// Removes the fixed punctuation set
//   । ॥ , . ? ! ; : " ' ( ) [ ] { } - – — … ‘ ’ “ ”
// then collapses ASCII whitespace runs to one space and trims both ends.
std::string StripPunct(std::string_view s);
bool IsStrippedPunct(char32_t c);

struct RewriteRule {
  std::u32string match;    // 1..4 code points
  std::u32string replace;  // may be empty (deletion)
  std::string label;       // source line, for diagnostics
};

struct NormRules {
  std::vector<RewriteRule> rules;
  bool apply_canonical_composition = true;

  // One rule per line: "U+XXXX[,U+XXXX...] -> U+XXXX[,U+XXXX...]". An empty
  // right-hand side deletes the match. '#' starts a comment.
  static NormRules Parse(std::string_view text);
};

// Canonical decomposition, ordering and composition (NFC) restricted to the
// Bengali block U+0980..U+09FF; other code points pass through unchanged.
std::u32string BengaliCanonicalCompose(std::u32string_view text);
std::u32string BengaliCanonicalDecompose(std::u32string_view text);

// Canonical composition (when enabled), then the rewrite rules applied in
// left-to-right passes until a pass changes nothing. Throws ConvergenceError
// naming the last rule that fired if len(input) * rule count passes are
// exceeded.
std::string NormalizeBn(std::string_view s, const NormRules &rules);

// Appends U+0964 unless s is empty or already ends in U+0964 / U+0965.
std::string AppendDanda(std::string_view s);

}  // namespace bnasr

#endif  // BNASR_TEXTNORM_H_
