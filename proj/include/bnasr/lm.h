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

#ifndef BNASR_LM_H_
#define BNASR_LM_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bnasr {

// Back-off n-gram model read from ARPA text. All scores are log10.
class ArpaModel {
 public:
  static constexpr int kNoWord = -1;
  static constexpr double kDefaultUnknownFloor = -10.0;

  struct Entry {
    std::vector<int> words;
    double log10_prob = 0.0;
    std::optional<double> backoff_log10;
    // Original decimal text, so serialization reproduces the file's numbers.
    std::string prob_text;
    std::string backoff_text;
  };

  // Throws FormatError (with line number) on malformed input, header/body
  // count mismatch, or a missing \end\ marker. Back-off chain gaps (a k-gram
  // whose (k-1)-word prefix is absent) are recorded in diagnostics().
  static ArpaModel Parse(std::string_view text);
  std::string Serialize() const;

  int order() const { return order_; }
  std::size_t count(int k) const { return entries_.at(k - 1).size(); }
  const std::vector<Entry> &entries(int k) const { return entries_.at(k - 1); }
  const std::vector<std::string> &diagnostics() const { return diagnostics_; }

  // Word id, <unk>'s id for unknown words, or kNoWord when neither exists.
  int WordId(std::string_view word) const;
  const std::string &WordText(int id) const { return words_.at(id); }
  int bos_id() const { return bos_; }
  int eos_id() const { return eos_; }

  void set_unknown_floor(double log10_floor) { unknown_floor_ = log10_floor; }
  double unknown_floor() const { return unknown_floor_; }

  // Katz back-off. `context` holds word ids, oldest first; only the last
  // order() - 1 are used. A word with no entry and no <unk> scores the floor.
  double LogProb(std::span<const int> context, int word) const;
  double LogProb(std::span<const std::string> context, std::string_view word) const;

  // <s> w1 .. wn </s>, summing LogProb of every token after <s>.
  double ScoreSentence(std::span<const std::string> words) const;

  std::optional<double> Lookup(std::span<const int> ngram) const;
  double Backoff(std::span<const int> context) const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int> &key) const;
  };
  const Entry *Find(std::span<const int> ngram) const;
  int Intern(const std::string &word);

  int order_ = 0;
  std::vector<std::vector<Entry>> entries_;
  std::vector<std::unordered_map<std::vector<int>, std::size_t, KeyHash>> index_;
  std::unordered_map<std::string, int> word_ids_;
  std::vector<std::string> words_;
  int unk_ = kNoWord;
  int bos_ = kNoWord;
  int eos_ = kNoWord;
  double unknown_floor_ = kDefaultUnknownFloor;
  std::vector<std::string> diagnostics_;
};

}  // namespace bnasr

#endif  // BNASR_LM_H_
