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

#include "bnasr/textnorm.h"

#include <algorithm>
#include <charconv>

#include "bnasr/error.h"
#include "bnasr/utf8.h"

namespace bnasr {

namespace {

constexpr char32_t kPunct[] = {
    U'।', U'॥', U',', U'.', U'?', U'!', U';', U':', U'"', U'\'',
    U'(', U')', U'[', U']', U'{', U'}', U'-', U'–', U'—', U'…',
    U'‘', U'’', U'“', U'”'};

bool IsAsciiSpace(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v';
}

// Unicode 13 data for U+0980..U+09FF.
struct Decomposition {
  char32_t composed;
  char32_t first;
  char32_t second;
  bool excluded;  // listed in CompositionExclusions.txt
};
constexpr Decomposition kBengaliDecompositions[] = {
    {U'ো', U'ে', U'া', false},
    {U'ৌ', U'ে', U'ৗ', false},
    {U'ড়', U'ড', U'়', true},
    {U'ঢ়', U'ঢ', U'়', true},
    {U'য়', U'য', U'়', true},
};

int CombiningClass(char32_t c) {
  switch (c) {
    case U'়':
      return 7;
    case U'্':
      return 9;
    case U'৾':
      return 230;
    default:
      return 0;
  }
}

char32_t ParseCodepoint(std::string_view tok, std::size_t line) {
  if (tok.size() < 3 || (tok[0] != 'U' && tok[0] != 'u') || tok[1] != '+') {
    throw FormatError("expected U+XXXX, got \"" + std::string(tok) + "\"", line);
  }
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(tok.data() + 2, tok.data() + tok.size(), value, 16);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value > 0x10FFFF ||
      (value >= 0xD800 && value <= 0xDFFF)) {
    throw FormatError("invalid code point \"" + std::string(tok) + "\"", line);
  }
  return static_cast<char32_t>(value);
}

std::u32string ParseSequence(std::string_view text, std::size_t line) {
  std::u32string out;
  for (const auto &tok : SplitFields(text, ',')) {
    const auto parts = SplitWhitespace(tok);
    if (parts.empty()) continue;
    if (parts.size() != 1) {
      throw FormatError("code points must be separated by commas", line);
    }
    out.push_back(ParseCodepoint(parts[0], line));
  }
  return out;
}

}  // namespace

bool IsStrippedPunct(char32_t c) {
  return std::find(std::begin(kPunct), std::end(kPunct), c) != std::end(kPunct);
}

std::string StripPunct(std::string_view s) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : Utf8Decode(s)) {
    if (IsStrippedPunct(c)) continue;
    if (IsAsciiSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return Utf8Encode(out);
}

NormRules NormRules::Parse(std::string_view text) {
  NormRules r;
  std::size_t line_no = 0;
  for (const auto &raw : SplitFields(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (SplitWhitespace(line).empty()) continue;
    const std::size_t arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      throw FormatError("rule lacks \"->\"", line_no);
    }
    RewriteRule rule;
    rule.match = ParseSequence(line.substr(0, arrow), line_no);
    rule.replace = ParseSequence(line.substr(arrow + 2), line_no);
    if (rule.match.empty() || rule.match.size() > 4) {
      throw FormatError("rule must match 1 to 4 code points", line_no);
    }
    if (rule.match == rule.replace) {
      throw FormatError("rule rewrites a sequence to itself", line_no);
    }
    const auto first = SplitWhitespace(line);
    std::string label = "line " + std::to_string(line_no) + ":";
    for (const auto &f : first) label += " " + f;
    rule.label = std::move(label);
    r.rules.push_back(std::move(rule));
  }
  return r;
}

std::u32string BengaliCanonicalDecompose(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size() + 4);
  for (char32_t c : text) {
    auto it = std::find_if(std::begin(kBengaliDecompositions),
                           std::end(kBengaliDecompositions),
                           [c](const Decomposition &d) { return d.composed == c; });
    if (it == std::end(kBengaliDecompositions)) {
      out.push_back(c);
    } else {
      out.push_back(it->first);
      out.push_back(it->second);
    }
  }
  // Canonical ordering: stable sort each run of non-starters by class.
  std::size_t i = 0;
  while (i < out.size()) {
    if (CombiningClass(out[i]) == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < out.size() && CombiningClass(out[j]) != 0) ++j;
    std::stable_sort(out.begin() + static_cast<std::ptrdiff_t>(i),
                     out.begin() + static_cast<std::ptrdiff_t>(j),
                     [](char32_t a, char32_t b) {
                       return CombiningClass(a) < CombiningClass(b);
                     });
    i = j;
  }
  return out;
}

std::u32string BengaliCanonicalCompose(std::u32string_view text) {
  std::u32string d = BengaliCanonicalDecompose(text);
  if (d.empty()) return d;
  std::u32string out;
  out.reserve(d.size());
  // Index into `out` of the last starter, and the class of the last
  // character appended since it (-1 when nothing followed the starter).
  std::size_t starter = std::u32string::npos;
  int last_class = -1;
  for (char32_t c : d) {
    const int cls = CombiningClass(c);
    if (starter != std::u32string::npos &&
        (last_class == -1 || (last_class != 0 && last_class < cls))) {
      auto it = std::find_if(std::begin(kBengaliDecompositions),
                             std::end(kBengaliDecompositions),
                             [&](const Decomposition &dec) {
                               return !dec.excluded && dec.first == out[starter] &&
                                      dec.second == c;
                             });
      if (it != std::end(kBengaliDecompositions)) {
        out[starter] = it->composed;
        continue;
      }
    }
    if (cls == 0) {
      starter = out.size();
      last_class = -1;
    } else {
      last_class = cls;
    }
    out.push_back(c);
  }
  return out;
}

std::string NormalizeBn(std::string_view s, const NormRules &rules) {
  std::u32string text = Utf8Decode(s);
  if (rules.apply_canonical_composition) text = BengaliCanonicalCompose(text);
  if (rules.rules.empty()) return Utf8Encode(text);

  const std::size_t max_passes =
      std::max<std::size_t>(1, text.size() * rules.rules.size()) + 1;
  const RewriteRule *last_fired = nullptr;
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    std::u32string next;
    next.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
      const RewriteRule *hit = nullptr;
      for (const auto &rule : rules.rules) {
        if (std::u32string_view(text).substr(i, rule.match.size()) == rule.match) {
          hit = &rule;
          break;
        }
      }
      if (hit) {
        next += hit->replace;
        i += hit->match.size();
        changed = true;
        last_fired = hit;
      } else {
        next.push_back(text[i++]);
      }
    }
    text = std::move(next);
    if (!changed) return Utf8Encode(text);
  }
  throw ConvergenceError("normalization rules did not reach a fixpoint; last rule: " +
                         (last_fired ? last_fired->label : std::string("?")));
}

std::string AppendDanda(std::string_view s) {
  std::string out(s);
  if (s.empty()) return out;
  const auto cps = Utf8Decode(s);
  if (cps.back() == kDanda || cps.back() == kDoubleDanda) return out;
  out += Utf8Encode(kDanda);
  return out;
}

}  // namespace bnasr
