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

#include "bnasr/corpus.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <set>
#include <unordered_set>

#include "bnasr/error.h"
#include "bnasr/utf8.h"

namespace bnasr {

namespace {

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::uint32_t ParseCount(const std::string &field, const char *column,
                         std::size_t line) {
  std::uint32_t value = 0;
  const char *first = field.data();
  const char *last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw FormatError(std::string("column ") + column +
                          ": expected non-negative integer, got \"" + field +
                          "\"",
                      line);
  }
  return value;
}

std::string FileStem(const std::string &path) {
  std::size_t slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = name.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Manifest ParseManifest(std::string_view tsv, std::string source_name) {
  Manifest m;
  m.source_name = std::move(source_name);
  auto lines = SplitLines(tsv);
  if (lines.empty()) throw FormatError("manifest is empty: missing header row");

  const auto header = SplitFields(lines[0], '\t');
  auto column = [&](const char *name, bool required) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) {
        throw FormatError(std::string("manifest header is missing column \"") +
                              name + "\"",
                          1);
      }
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t path_col = *column("path", true);
  const std::size_t sentence_col = *column("sentence", true);
  const std::size_t up_col = *column("up_votes", true);
  const std::size_t down_col = *column("down_votes", true);
  const auto id_col = column("clip_id", false);
  const auto dur_col = column("duration_s", false);

  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    auto fields = SplitFields(lines[i], '\t');
    if (fields.size() != header.size()) {
      throw FormatError("row has " + std::to_string(fields.size()) +
                            " fields, header has " +
                            std::to_string(header.size()),
                        line_no);
    }
    ClipRecord r;
    r.audio_path = fields[path_col];
    r.clip_id = id_col ? fields[*id_col] : FileStem(r.audio_path);
    r.sentence = fields[sentence_col];
    r.upvotes = ParseCount(fields[up_col], "up_votes", line_no);
    r.downvotes = ParseCount(fields[down_col], "down_votes", line_no);
    if (dur_col && !fields[*dur_col].empty()) {
      const std::string &f = fields[*dur_col];
      double d = 0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), d);
      if (ec != std::errc() || ptr != f.data() + f.size() || !(d >= 0)) {
        throw FormatError("column duration_s: invalid value \"" + f + "\"",
                          line_no);
      }
      r.duration_s = d;
    }
    if (!seen.insert(r.clip_id).second) {
      throw FormatError("duplicate clip_id \"" + r.clip_id + "\"", line_no);
    }
    m.records.push_back(std::move(r));
  }
  return m;
}

std::string SerializeManifest(const Manifest &m) {
  std::string out = "clip_id\tpath\tsentence\tup_votes\tdown_votes\tduration_s\n";
  for (const auto &r : m.records) {
    out += r.clip_id;
    out += '\t';
    out += r.audio_path;
    out += '\t';
    out += r.sentence;
    out += '\t';
    out += std::to_string(r.upvotes);
    out += '\t';
    out += std::to_string(r.downvotes);
    out += '\t';
    if (r.duration_s) out += FormatDouble(*r.duration_s);
    out += '\n';
  }
  return out;
}

Manifest FilterClips(const Manifest &m, const ClipFilter &filter) {
  if (filter.min_s > filter.max_s) {
    throw ArgumentError("min_s must not exceed max_s");
  }
  const bool duration_active =
      filter.min_s > 0.0 || std::isfinite(filter.max_s);
  Manifest out;
  out.source_name = m.source_name;
  for (const auto &r : m.records) {
    if (filter.require_net_positive_votes && !(r.upvotes > r.downvotes)) {
      continue;
    }
    if (duration_active) {
      if (!r.duration_s) {
        throw ArgumentError("clip \"" + r.clip_id +
                            "\" has no duration but a duration filter is set");
      }
      if (*r.duration_s < filter.min_s || *r.duration_s > filter.max_s) {
        continue;
      }
    }
    out.records.push_back(r);
  }
  return out;
}

VoteCensus CountVotes(const Manifest &m) {
  VoteCensus c;
  for (const auto &r : m.records) {
    if (r.upvotes > r.downvotes) {
      ++c.net_positive;
    } else if (r.upvotes < r.downvotes) {
      ++c.net_negative;
    } else if (r.upvotes == 0) {
      ++c.unvoted;
    } else {
      ++c.tied;
    }
  }
  return c;
}

Vocabulary::Vocabulary(std::vector<char32_t> chars)
    : id_to_char_(std::move(chars)) {
  for (std::size_t i = 0; i < id_to_char_.size(); ++i) {
    const char32_t c = id_to_char_[i];
    if (c == kWordDelimChar) {
      throw ArgumentError("space is reserved for the word delimiter");
    }
    if (i > 0 && id_to_char_[i - 1] >= c) {
      throw ArgumentError("vocabulary characters must be strictly ascending");
    }
    char_to_id_.emplace(c, static_cast<int>(i) + 2);
  }
}

std::optional<int> Vocabulary::IdOf(char32_t c) const {
  if (c == kWordDelimChar) return kWordDelimId;
  auto it = char_to_id_.find(c);
  if (it == char_to_id_.end()) return std::nullopt;
  return it->second;
}

char32_t Vocabulary::CharOf(int id) const {
  if (id == kWordDelimId) return kWordDelimChar;
  if (id < 2 || id >= size()) {
    throw ArgumentError("id " + std::to_string(id) +
                        " has no character in the vocabulary");
  }
  return id_to_char_[static_cast<std::size_t>(id - 2)];
}

std::string Vocabulary::Serialize() const {
  std::string out = "<blank>\t0\n|\t1\n";
  for (std::size_t i = 0; i < id_to_char_.size(); ++i) {
    out += Utf8Encode(id_to_char_[i]);
    out += '\t';
    out += std::to_string(i + 2);
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::Parse(std::string_view text) {
  std::vector<char32_t> chars;
  std::size_t line_no = 0;
  int expected_id = 0;
  for (auto line : SplitLines(text)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = SplitFields(line, '\t');
    if (fields.size() != 2) {
      throw FormatError("vocabulary line must be <char>\\t<id>", line_no);
    }
    int id = -1;
    auto [ptr, ec] = std::from_chars(fields[1].data(),
                                     fields[1].data() + fields[1].size(), id);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) {
      throw FormatError("vocabulary id is not an integer", line_no);
    }
    if (id != expected_id) {
      throw FormatError("vocabulary ids must be contiguous from 0; expected " +
                            std::to_string(expected_id),
                        line_no);
    }
    ++expected_id;
    if (id == kBlankId) {
      if (fields[0] != "<blank>") throw FormatError("id 0 must be <blank>", line_no);
      continue;
    }
    if (id == kWordDelimId) {
      if (fields[0] != "|") throw FormatError("id 1 must be |", line_no);
      continue;
    }
    auto cps = Utf8Decode(fields[0]);
    if (cps.size() != 1) {
      throw FormatError("vocabulary entry must be a single character", line_no);
    }
    chars.push_back(cps[0]);
  }
  if (expected_id < 2) throw FormatError("vocabulary lacks <blank> and |");
  try {
    return Vocabulary(std::move(chars));
  } catch (const ArgumentError &e) {
    throw FormatError(e.what());
  }
}

Vocabulary BuildVocab(const Manifest &m) {
  if (m.records.empty()) {
    throw ArgumentError("cannot build a vocabulary from an empty manifest");
  }
  std::set<char32_t> chars;
  for (const auto &r : m.records) {
    for (char32_t c : Utf8Decode(r.sentence)) {
      if (c == Vocabulary::kWordDelimChar) continue;
      if (c == U'|' || c == U'\t' || c == U'\n' || c == U'\r') {
        throw ArgumentError("clip \"" + r.clip_id + "\" contains reserved " +
                            CodepointLabel(c));
      }
      chars.insert(c);
    }
  }
  return Vocabulary(std::vector<char32_t>(chars.begin(), chars.end()));
}

std::vector<int> EncodeTranscript(std::string_view sentence,
                                  const Vocabulary &vocab) {
  const auto cps = Utf8Decode(sentence);
  std::vector<int> ids;
  ids.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    auto id = vocab.IdOf(cps[i]);
    if (!id) {
      throw ArgumentError("out-of-vocabulary character " +
                          CodepointLabel(cps[i]) + " \"" +
                          Utf8Encode(cps[i]) + "\" at offset " +
                          std::to_string(i));
    }
    ids.push_back(*id);
  }
  return ids;
}

std::string DecodeTranscript(const std::vector<int> &ids,
                             const Vocabulary &vocab) {
  std::u32string out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(vocab.CharOf(id));
  return Utf8Encode(out);
}

std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    // Uniform draw in [0, i) by rejection.
    const std::uint64_t bound = i;
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(x % bound)]);
  }
  return perm;
}

std::size_t TrainSplitSize(std::size_t n, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ArgumentError("train_fraction must lie in (0, 1)");
  }
  const double exact = train_fraction * static_cast<double>(n);
  // Guard against representation error just below a .5 boundary.
  auto size = static_cast<std::size_t>(std::floor(exact + 0.5 + 1e-9));
  return std::min(size, n);
}

std::pair<Manifest, Manifest> MergeAndSplit(const Manifest &a,
                                            const Manifest &b,
                                            const SplitSpec &spec) {
  std::unordered_set<std::string> ids;
  for (const auto &r : a.records) ids.insert(r.clip_id);
  for (const auto &r : b.records) {
    if (ids.count(r.clip_id)) {
      throw ArgumentError("clip_id \"" + r.clip_id + "\" occurs in both inputs");
    }
  }
  std::vector<const ClipRecord *> pool;
  pool.reserve(a.records.size() + b.records.size());
  for (const auto &r : a.records) pool.push_back(&r);
  for (const auto &r : b.records) pool.push_back(&r);

  const std::size_t n = pool.size();
  const std::size_t n_train = TrainSplitSize(n, spec.train_fraction);
  const auto perm = SeededPermutation(n, spec.seed);

  Manifest train, dev;
  train.source_name = a.source_name + "+" + b.source_name + ":train";
  dev.source_name = a.source_name + "+" + b.source_name + ":dev";
  train.records.reserve(n_train);
  dev.records.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? train : dev).records.push_back(*pool[perm[i]]);
  }
  return {std::move(train), std::move(dev)};
}

}  // namespace bnasr
