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

#include "bnasr/decoder.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "bnasr/error.h"
#include "bnasr/utf8.h"

namespace bnasr {

namespace {

// Word-level LM context of a prefix. A pure function of the prefix, so
// merging hypotheses by prefix never mixes LM states.
struct LmState {
  std::vector<int> history;     // LM word ids, starting with <s>
  std::vector<std::string> words;
  std::u32string partial;       // characters since the last delimiter
  double lm_log10 = 0.0;        // completed words only
};

struct Hyp {
  double log_blank = kLogZero;
  double log_nonblank = kLogZero;
  LmState lm;

  double acoustic() const { return LogAdd(log_blank, log_nonblank); }
};

using Beam = std::map<LabelSequence, Hyp>;

class Fusion {
 public:
  Fusion(const Vocabulary &vocab, const ArpaModel *lm, const DecoderConfig &cfg)
      : vocab_(vocab), lm_(lm), cfg_(cfg) {}

  LmState Initial() const {
    LmState s;
    if (lm_) s.history.push_back(lm_->bos_id());
    return s;
  }

  LmState Extend(const LmState &parent, int label) const {
    LmState s = parent;
    if (label == cfg_.word_delim_id) {
      CompleteWord(s);
    } else {
      s.partial.push_back(vocab_.CharOf(label));
    }
    return s;
  }

  // Completes any partial word and scores </s>.
  LmState Finish(const LmState &state) const {
    LmState s = state;
    CompleteWord(s);
    if (lm_) s.lm_log10 += lm_->LogProb(s.history, lm_->eos_id());
    return s;
  }

  double Score(double acoustic, const LmState &s) const {
    return acoustic + LmTerm(s);
  }

  double LmTerm(const LmState &s) const {
    double term = cfg_.beta * static_cast<double>(s.words.size());
    if (lm_) term += cfg_.alpha * std::numbers::ln10 * s.lm_log10;
    return term;
  }

 private:
  void CompleteWord(LmState &s) const {
    if (s.partial.empty()) return;
    std::string word = Utf8Encode(s.partial);
    s.partial.clear();
    if (lm_) {
      const int id = lm_->WordId(word);
      s.lm_log10 += lm_->LogProb(s.history, id);
      s.history.push_back(id);
      const auto keep = static_cast<std::size_t>(std::max(lm_->order() - 1, 0));
      if (s.history.size() > keep) {
        s.history.erase(s.history.begin(),
                        s.history.end() - static_cast<std::ptrdiff_t>(keep));
      }
    }
    s.words.push_back(std::move(word));
  }

  const Vocabulary &vocab_;
  const ArpaModel *lm_;
  const DecoderConfig &cfg_;
};

struct Ranked {
  double score;
  const LabelSequence *prefix;
};

bool BetterRanked(const Ranked &a, const Ranked &b) {
  if (a.score != b.score) return a.score > b.score;
  return *a.prefix < *b.prefix;
}

}  // namespace

std::vector<DecodeResult> BeamDecodeNBest(const LogitMatrix &logits,
                                          const Vocabulary &vocab,
                                          const ArpaModel *lm,
                                          const DecoderConfig &cfg) {
  if (cfg.beam_width < 1) throw ArgumentError("beam_width must be at least 1");
  if (logits.vocab_size() != vocab.size()) {
    throw ArgumentError("logit width " + std::to_string(logits.vocab_size()) +
                        " does not match vocabulary size " + std::to_string(vocab.size()));
  }
  const LogitMatrix lp = LogSoftmaxRows(logits);
  const Fusion fusion(vocab, lm, cfg);
  const int V = lp.vocab_size();

  Beam beam;
  beam[{}] = Hyp{0.0, kLogZero, fusion.Initial()};

  for (int t = 0; t < lp.frames(); ++t) {
    Beam next;
    auto child = [&](const LabelSequence &prefix, const Hyp &parent, int k) -> Hyp & {
      LabelSequence extended = prefix;
      extended.push_back(k);
      auto it = next.find(extended);
      if (it == next.end()) {
        it = next.emplace(std::move(extended), Hyp{kLogZero, kLogZero, fusion.Extend(parent.lm, k)})
                 .first;
      }
      return it->second;
    };
    auto self = [&](const LabelSequence &prefix, const Hyp &hyp) -> Hyp & {
      auto it = next.find(prefix);
      if (it == next.end()) it = next.emplace(prefix, Hyp{kLogZero, kLogZero, hyp.lm}).first;
      return it->second;
    };

    for (const auto &[prefix, hyp] : beam) {
      const double total = hyp.acoustic();
      for (int k = 0; k < V; ++k) {
        const double p = lp(t, k);
        if (k == cfg.blank_id) {
          Hyp &h = self(prefix, hyp);
          h.log_blank = LogAdd(h.log_blank, total + p);
        } else if (!prefix.empty() && prefix.back() == k) {
          // A repeat only extends the prefix after an intervening blank.
          Hyp &same = self(prefix, hyp);
          same.log_nonblank = LogAdd(same.log_nonblank, hyp.log_nonblank + p);
          Hyp &ext = child(prefix, hyp, k);
          ext.log_nonblank = LogAdd(ext.log_nonblank, hyp.log_blank + p);
        } else {
          Hyp &ext = child(prefix, hyp, k);
          ext.log_nonblank = LogAdd(ext.log_nonblank, total + p);
        }
      }
    }

    if (static_cast<int>(next.size()) > cfg.beam_width) {
      std::vector<Ranked> ranked;
      ranked.reserve(next.size());
      for (const auto &[prefix, hyp] : next) {
        ranked.push_back({fusion.Score(hyp.acoustic(), hyp.lm), &prefix});
      }
      std::sort(ranked.begin(), ranked.end(), BetterRanked);
      Beam kept;
      for (int i = 0; i < cfg.beam_width; ++i) {
        auto node = next.extract(*ranked[i].prefix);
        kept.insert(std::move(node));
      }
      beam = std::move(kept);
    } else {
      beam = std::move(next);
    }
  }

  std::vector<DecodeResult> results;
  results.reserve(beam.size());
  for (const auto &[prefix, hyp] : beam) {
    const LmState done = fusion.Finish(hyp.lm);
    DecodeResult r;
    r.labels = prefix;
    // Pruning can drop paths that feed a surviving prefix, so the beam's
    // running mass is a lower bound. Rescore with the exact forward pass.
    r.ctc_logprob = -CtcLoss(logits, prefix, cfg.blank_id).loss;
    r.lm_log10 = done.lm_log10;
    r.words = done.words;
    r.total_score = fusion.Score(r.ctc_logprob, done);
    results.push_back(std::move(r));
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const DecodeResult &a, const DecodeResult &b) {
                     if (a.total_score != b.total_score) return a.total_score > b.total_score;
                     return a.labels < b.labels;
                   });
  return results;
}

DecodeResult BeamDecode(const LogitMatrix &logits, const Vocabulary &vocab,
                        const ArpaModel *lm, const DecoderConfig &cfg) {
  return BeamDecodeNBest(logits, vocab, lm, cfg).front();
}

BruteForceResult BruteForceBest(const LogitMatrix &logits, int blank_id, int max_len) {
  const int frames = logits.frames();
  const int V = logits.vocab_size();
  if (max_len < 0 || max_len > frames) throw ArgumentError("max_len must lie in [0, T]");
  double paths = 1.0;
  for (int t = 0; t < frames; ++t) paths *= V;
  if (paths > 1e7) throw ArgumentError("instance too large to enumerate");

  const LogitMatrix lp = LogSoftmaxRows(logits);
  std::map<LabelSequence, double> posterior;
  std::vector<int> path(static_cast<std::size_t>(frames), 0);
  while (true) {
    double logp = 0.0;
    for (int t = 0; t < frames; ++t) logp += lp(t, path[t]);
    LabelSequence labels = Collapse(path, blank_id);
    if (static_cast<int>(labels.size()) <= max_len) {
      auto [it, inserted] = posterior.emplace(std::move(labels), logp);
      if (!inserted) it->second = LogAdd(it->second, logp);
    }
    int t = frames - 1;
    while (t >= 0 && ++path[t] == V) path[t--] = 0;
    if (t < 0) break;
  }
  // std::map iterates in lexicographic order, so the first maximum wins ties.
  BruteForceResult best{{}, kLogZero};
  bool first = true;
  for (const auto &[labels, logp] : posterior) {
    if (first || logp > best.logprob) {
      best = {labels, logp};
      first = false;
    }
  }
  return best;
}

}  // namespace bnasr
