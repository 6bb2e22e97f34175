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

#ifndef BNASR_DECODER_H_
#define BNASR_DECODER_H_

#include <string>
#include <vector>

#include "bnasr/corpus.h"
#include "bnasr/ctc.h"
#include "bnasr/lm.h"

namespace bnasr {

struct DecoderConfig {
  int beam_width = 16;
  double alpha = 0.5;  // LM weight, applied to natural-log LM scores
  double beta = 1.0;   // bonus per completed word
  int blank_id = Vocabulary::kBlankId;
  int word_delim_id = Vocabulary::kWordDelimId;
};

struct DecodeResult {
  LabelSequence labels;
  // ctc_logprob + alpha * ln(10) * lm_log10 + beta * words.size()
  double total_score = 0.0;
  double ctc_logprob = 0.0;  // exact ln P_ctc(labels) over all frame paths
  double lm_log10 = 0.0;     // includes </s>
  std::vector<std::string> words;
};

// CTC prefix beam search with word-level shallow fusion. Logits may be raw
// or already log-softmaxed. A word is scored by the LM when it is completed:
// on emitting the word delimiter after a non-empty partial word, or at the
// end of the utterance, where </s> is also scored. After each frame the
// beam keeps the beam_width best prefixes by acoustic plus LM score; ties go
// to the lexicographically smaller prefix. Throws ArgumentError when
// beam_width < 1.
DecodeResult BeamDecode(const LogitMatrix &logits, const Vocabulary &vocab,
                        const ArpaModel *lm, const DecoderConfig &cfg);

// Same search, returning the whole final beam best-first.
std::vector<DecodeResult> BeamDecodeNBest(const LogitMatrix &logits,
                                          const Vocabulary &vocab,
                                          const ArpaModel *lm,
                                          const DecoderConfig &cfg);

struct BruteForceResult {
  LabelSequence labels;
  double logprob;  // ln of the summed probability of all paths collapsing to labels
};

// Exact arg max of the CTC posterior over label sequences of length
// <= max_len, by enumerating all V^T frame paths. Ties go to the
// lexicographically smaller sequence. Refuses (ArgumentError) when
// V^T > 1e7.
BruteForceResult BruteForceBest(const LogitMatrix &logits, int blank_id, int max_len);

}  // namespace bnasr

#endif  // BNASR_DECODER_H_
