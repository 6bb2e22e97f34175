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

#ifndef BNASR_CORPUS_H_
#define BNASR_CORPUS_H_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bnasr {

struct ClipRecord {
  std::string clip_id;
  std::string audio_path;
  std::string sentence;  // UTF-8
  std::uint32_t upvotes = 0;
  std::uint32_t downvotes = 0;
  std::optional<double> duration_s;

  bool operator==(const ClipRecord &) const = default;
};

struct Manifest {
  std::vector<ClipRecord> records;
  std::string source_name;
};

// Parses a Common Voice style TSV. Required columns: path, sentence,
// up_votes, down_votes. Optional: clip_id (defaults to the file stem of
// path) and duration_s. Other columns are ignored.
Manifest ParseManifest(std::string_view tsv, std::string source_name = "");

// Writes the columns clip_id, path, sentence, up_votes, down_votes,
// duration_s. Absent durations are written as empty fields.
std::string SerializeManifest(const Manifest &m);

struct ClipFilter {
  bool require_net_positive_votes = false;
  // Duration filtering is active when either bound is finite.
  double min_s = 0.0;
  double max_s = std::numeric_limits<double>::infinity();
};

// Keeps records with upvotes > downvotes (strict, when requested) and
// min_s <= duration <= max_s. Order is preserved.
Manifest FilterClips(const Manifest &m, const ClipFilter &filter);

// Vote categories reported by the curation summary.
struct VoteCensus {
  std::size_t net_positive = 0;  // up > down
  std::size_t net_negative = 0;  // up < down
  std::size_t unvoted = 0;       // up == down == 0
  std::size_t tied = 0;          // up == down != 0
};
VoteCensus CountVotes(const Manifest &m);

class Vocabulary {
 public:
  static constexpr int kBlankId = 0;
  static constexpr int kWordDelimId = 1;
  static constexpr char32_t kWordDelimChar = U' ';

  // Ids 2.. for `chars`, which must be sorted, unique, and exclude space.
  explicit Vocabulary(std::vector<char32_t> chars);

  int size() const { return static_cast<int>(id_to_char_.size()) + 2; }
  int blank_id() const { return kBlankId; }
  int word_delim_id() const { return kWordDelimId; }

  std::optional<int> IdOf(char32_t c) const;
  // Throws ArgumentError for the blank id or out-of-range ids.
  char32_t CharOf(int id) const;
  const std::map<char32_t, int> &char_to_id() const { return char_to_id_; }

  // One "<char>\t<id>" line per entry; blank as "<blank>", delimiter "|".
  std::string Serialize() const;
  static Vocabulary Parse(std::string_view text);

  bool operator==(const Vocabulary &o) const {
    return id_to_char_ == o.id_to_char_;
  }

 private:
  std::vector<char32_t> id_to_char_;  // index = id - 2
  std::map<char32_t, int> char_to_id_;
};

// Distinct non-space characters across all sentences, ordered by code point.
Vocabulary BuildVocab(const Manifest &m);

std::vector<int> EncodeTranscript(std::string_view sentence,
                                  const Vocabulary &vocab);
std::string DecodeTranscript(const std::vector<int> &ids,
                             const Vocabulary &vocab);

struct SplitSpec {
  double train_fraction = 0.85;
  std::uint64_t seed = 0;
};

// Fisher-Yates permutation of [0, n) driven by std::mt19937_64(seed). Bounded
// draws use rejection sampling on the raw 64-bit output, so the sequence is
// identical across standard libraries.
std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed);

// round-half-up(fraction * n).
std::size_t TrainSplitSize(std::size_t n, double train_fraction);

// Shuffles a ++ b and splits it into (train, dev).
std::pair<Manifest, Manifest> MergeAndSplit(const Manifest &a,
                                            const Manifest &b,
                                            const SplitSpec &spec);

}  // namespace bnasr

#endif  // BNASR_CORPUS_H_
