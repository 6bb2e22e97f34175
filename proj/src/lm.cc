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

#include "bnasr/lm.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bnasr/error.h"
#include "bnasr/utf8.h"

namespace bnasr {

namespace {

std::optional<double> ParseNumber(const std::string &s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

}  // namespace

std::size_t ArpaModel::KeyHash::operator()(const std::vector<int> &key) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int w : key) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(w));
    h *= 0x100000001b3ULL;
  }
  return h;
}

int ArpaModel::Intern(const std::string &word) {
  auto [it, inserted] = word_ids_.emplace(word, static_cast<int>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

ArpaModel ArpaModel::Parse(std::string_view text) {
  ArpaModel m;
  std::vector<std::size_t> declared;
  enum class State { kPreamble, kData, kNgrams, kDone } state = State::kPreamble;
  int section = 0;
  std::size_t line_no = 0;
  std::size_t start = 0;

  while (start <= text.size() && state != State::kDone) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = Trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;

    if (line == "\\end\\") {
      if (state == State::kPreamble) throw FormatError("\\end\\ before \\data\\", line_no);
      state = State::kDone;
      break;
    }
    if (line == "\\data\\") {
      if (state != State::kPreamble) throw FormatError("duplicate \\data\\", line_no);
      state = State::kData;
      continue;
    }
    if (state == State::kPreamble) continue;

    if (line.front() == '\\') {
      // "\k-grams:"
      int k = 0;
      auto [ptr, ec] = std::from_chars(line.data() + 1, line.data() + line.size(), k);
      if (ec != std::errc() || std::string_view(ptr, line.data() + line.size() - ptr) != "-grams:") {
        throw FormatError("unrecognized section header \"" + std::string(line) + "\"", line_no);
      }
      if (k < 1 || k > static_cast<int>(declared.size())) {
        throw FormatError("section for order " + std::to_string(k) +
                              " not declared in \\data\\",
                          line_no);
      }
      if (k != section + 1) {
        throw FormatError("n-gram sections out of order", line_no);
      }
      if (section > 0 && m.entries_[section - 1].size() != declared[section - 1]) {
        throw FormatError("count mismatch for order " + std::to_string(section) +
                              ": header declares " + std::to_string(declared[section - 1]) +
                              ", found " + std::to_string(m.entries_[section - 1].size()),
                          line_no);
      }
      if (m.order_ == 0) {
        m.order_ = static_cast<int>(declared.size());
        m.entries_.resize(declared.size());
        m.index_.resize(declared.size());
      }
      section = k;
      state = State::kNgrams;
      continue;
    }

    if (state == State::kData) {
      // "ngram k=count"
      if (line.substr(0, 6) != "ngram ") {
        throw FormatError("expected \"ngram k=count\" in \\data\\", line_no);
      }
      const std::string_view spec = Trim(line.substr(6));
      const std::size_t eq = spec.find('=');
      int k = 0;
      std::size_t count = 0;
      if (eq == std::string_view::npos ||
          std::from_chars(spec.data(), spec.data() + eq, k).ec != std::errc() ||
          std::from_chars(spec.data() + eq + 1, spec.data() + spec.size(), count).ec !=
              std::errc()) {
        throw FormatError("malformed ngram count line", line_no);
      }
      if (k != static_cast<int>(declared.size()) + 1) {
        throw FormatError("ngram counts must be listed for orders 1..N in sequence", line_no);
      }
      declared.push_back(count);
      continue;
    }

    const auto fields = SplitWhitespace(line);
    const auto k = static_cast<std::size_t>(section);
    if (fields.size() != k + 1 && fields.size() != k + 2) {
      throw FormatError("expected " + std::to_string(k) + " words in " +
                            std::to_string(k) + "-gram entry",
                        line_no);
    }
    Entry e;
    auto prob = ParseNumber(fields[0]);
    if (!prob) throw FormatError("non-numeric log probability \"" + fields[0] + "\"", line_no);
    e.log10_prob = *prob;
    e.prob_text = fields[0];
    for (std::size_t i = 0; i < k; ++i) e.words.push_back(m.Intern(fields[1 + i]));
    if (fields.size() == k + 2) {
      auto bo = ParseNumber(fields[k + 1]);
      if (!bo) throw FormatError("non-numeric back-off weight \"" + fields[k + 1] + "\"", line_no);
      e.backoff_log10 = *bo;
      e.backoff_text = fields[k + 1];
    }
    auto &index = m.index_[k - 1];
    if (index.count(e.words)) {
      throw FormatError("duplicate " + std::to_string(k) + "-gram", line_no);
    }
    index.emplace(e.words, m.entries_[k - 1].size());
    m.entries_[k - 1].push_back(std::move(e));
  }

  if (state != State::kDone) throw FormatError("missing \\end\\ marker", line_no);
  if (declared.empty()) throw FormatError("\\data\\ section declares no n-gram orders");
  if (m.order_ == 0) {
    m.order_ = static_cast<int>(declared.size());
    m.entries_.resize(declared.size());
    m.index_.resize(declared.size());
  }
  for (std::size_t k = 0; k < declared.size(); ++k) {
    if (m.entries_[k].size() != declared[k]) {
      throw FormatError("count mismatch for order " + std::to_string(k + 1) +
                            ": header declares " + std::to_string(declared[k]) +
                            ", found " + std::to_string(m.entries_[k].size()),
                        line_no);
    }
  }

  for (int k = 2; k <= m.order_; ++k) {
    for (const auto &e : m.entries_[k - 1]) {
      std::vector<int> prefix(e.words.begin(), e.words.end() - 1);
      if (!m.index_[k - 2].count(prefix)) {
        std::string words;
        for (int w : e.words) words += (words.empty() ? "" : " ") + m.words_[w];
        m.diagnostics_.push_back("back-off chain: context of " + std::to_string(k) +
                                 "-gram \"" + words + "\" is not a " +
                                 std::to_string(k - 1) + "-gram");
      }
    }
  }

  auto unigram = [&m](const char *w) -> int {
    auto it = m.word_ids_.find(w);
    if (it == m.word_ids_.end() || !m.index_[0].count({it->second})) return kNoWord;
    return it->second;
  };
  m.unk_ = unigram("<unk>");
  m.bos_ = unigram("<s>");
  m.eos_ = unigram("</s>");
  return m;
}

std::string ArpaModel::Serialize() const {
  std::string out = "\\data\\\n";
  for (int k = 1; k <= order_; ++k) {
    out += "ngram " + std::to_string(k) + "=" + std::to_string(count(k)) + "\n";
  }
  for (int k = 1; k <= order_; ++k) {
    out += "\n\\" + std::to_string(k) + "-grams:\n";
    for (const auto &e : entries_[k - 1]) {
      out += e.prob_text;
      out += '\t';
      for (std::size_t i = 0; i < e.words.size(); ++i) {
        if (i) out += ' ';
        out += words_[e.words[i]];
      }
      if (e.backoff_log10) {
        out += '\t';
        out += e.backoff_text;
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

int ArpaModel::WordId(std::string_view word) const {
  auto it = word_ids_.find(std::string(word));
  if (it != word_ids_.end() && index_[0].count({it->second})) return it->second;
  return unk_;
}

const ArpaModel::Entry *ArpaModel::Find(std::span<const int> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return nullptr;
  for (int w : ngram) {
    if (w == kNoWord) return nullptr;
  }
  const auto &index = index_[ngram.size() - 1];
  auto it = index.find(std::vector<int>(ngram.begin(), ngram.end()));
  if (it == index.end()) return nullptr;
  return &entries_[ngram.size() - 1][it->second];
}

std::optional<double> ArpaModel::Lookup(std::span<const int> ngram) const {
  const Entry *e = Find(ngram);
  if (!e) return std::nullopt;
  return e->log10_prob;
}

double ArpaModel::Backoff(std::span<const int> context) const {
  const Entry *e = Find(context);
  return e && e->backoff_log10 ? *e->backoff_log10 : 0.0;
}

double ArpaModel::LogProb(std::span<const int> context, int word) const {
  if (word == kNoWord) return unknown_floor_;
  const std::size_t max_ctx = static_cast<std::size_t>(order_ - 1);
  if (context.size() > max_ctx) context = context.subspan(context.size() - max_ctx);
  std::vector<int> ngram(context.begin(), context.end());
  ngram.push_back(word);
  double backoff = 0.0;
  std::span<const int> view(ngram);
  while (true) {
    if (const Entry *e = Find(view)) return backoff + e->log10_prob;
    if (view.size() == 1) return backoff + unknown_floor_;
    backoff += Backoff(view.first(view.size() - 1));
    view = view.subspan(1);
  }
}

double ArpaModel::LogProb(std::span<const std::string> context,
                          std::string_view word) const {
  std::vector<int> ids;
  ids.reserve(context.size());
  for (const auto &w : context) ids.push_back(WordId(w));
  return LogProb(ids, WordId(word));
}

double ArpaModel::ScoreSentence(std::span<const std::string> words) const {
  std::vector<int> history{bos_};
  double total = 0.0;
  auto step = [&](int w) {
    total += LogProb(history, w);
    history.push_back(w);
  };
  for (const auto &w : words) step(WordId(w));
  step(eos_);
  return total;
}

}  // namespace bnasr
