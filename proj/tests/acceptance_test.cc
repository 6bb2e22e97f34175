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

// Acceptance checks. Prints one PASS, FAIL or SKIP line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bnasr/audio.h"
#include "bnasr/corpus.h"
#include "bnasr/ctc.h"
#include "bnasr/decoder.h"
#include "bnasr/lm.h"
#include "bnasr/metrics.h"
#include "bnasr/textnorm.h"
#include "bnasr/trainer.h"
#include "bnasr/utf8.h"
#include "cli_util.h"
#include "oracles.h"

using namespace bnasr;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

class Checker {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  Outcome Finish(std::string summary) const {
    if (ok()) return {Status::kPass, std::move(summary)};
    std::string d = summary + "; " + std::to_string(failed_) + " failed check(s):";
    for (const auto &f : failures_) d += " [" + f + "]";
    return {Status::kFail, d};
  }

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

LogitMatrix FromRows(const oracle::Matrix &m) {
  return LogitMatrix(static_cast<int>(m.size()), static_cast<int>(m[0].size()), oracle::Flatten(m));
}

Vocabulary Letters(int n) {
  std::vector<char32_t> chars;
  for (int i = 0; i < n; ++i) chars.push_back(U'a' + i);
  return Vocabulary(chars);
}

double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// ---------------------------------------------------------------------------

Outcome CtcOracleEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  Checker c;
  double worst = 0;
  const int instances = 250;
  for (int i = 0; i < instances; ++i) {
    const int T = std::uniform_int_distribution<int>(1, 6)(rng);
    const int V = std::uniform_int_distribution<int>(2, 4)(rng);
    const auto rows = oracle::RandomLogits(rng, T, V);
    auto labels = oracle::RandomLabels(rng, 3, V, 0);
    const double want = oracle::BruteForceCtcLoss(rows, labels, 0);
    const auto got = CtcLoss(FromRows(rows), labels, 0);
    if (std::isinf(want)) {
      c.Expect(!got.feasible && std::isinf(got.loss), "infeasible instance " + std::to_string(i));
      continue;
    }
    const double err = RelErr(got.loss, want);
    worst = std::max(worst, err);
    c.Expect(err <= 1e-6, "instance " + std::to_string(i) + " rel err " + Fmt(err));
  }
  const double secs = Seconds(start);
  c.Expect(secs < 10.0, "runtime " + Fmt(secs) + " s");
  return c.Finish(std::to_string(instances) + " instances, max rel err " + Fmt(worst) + ", " + Fmt(secs) + " s");
}

Outcome GradientCheck() {
  std::mt19937_64 rng(202);
  Checker c;
  double worst = 0, worst_row = 0;
  int done = 0;
  while (done < 120) {
    const int T = std::uniform_int_distribution<int>(1, 6)(rng);
    const int V = std::uniform_int_distribution<int>(2, 4)(rng);
    const auto rows = oracle::RandomLogits(rng, T, V);
    const auto labels = oracle::RandomLabels(rng, 3, V, 0);
    auto m = FromRows(rows);
    if (!CtcLoss(m, labels, 0).feasible) continue;
    const auto grad = CtcGrad(m, labels, 0);
    const double h = 1e-4;
    for (int t = 0; t < T; ++t) {
      double row = 0;
      for (int k = 0; k < V; ++k) {
        const double keep = m(t, k);
        m(t, k) = keep + h;
        const double up = CtcLoss(m, labels, 0).loss;
        m(t, k) = keep - h;
        const double down = CtcLoss(m, labels, 0).loss;
        m(t, k) = keep;
        const double fd = (up - down) / (2 * h);
        const double err = std::abs(grad(t, k) - fd) / std::max(1.0, std::abs(fd));
        worst = std::max(worst, err);
        c.Expect(err <= 1e-4, "fd mismatch " + Fmt(err));
        row += grad(t, k);
      }
      worst_row = std::max(worst_row, std::abs(row));
      c.Expect(std::abs(row) <= 1e-9, "row sum " + Fmt(row));
    }
    ++done;
  }
  return c.Finish(std::to_string(done) + " instances, max rel err " + Fmt(worst) + ", max |row sum| " +
                  Fmt(worst_row));
}

void ForEachSequence(int max_len, int vocab, const std::function<void(const std::vector<int> &)> &fn) {
  std::vector<int> seq;
  std::function<void()> rec = [&] {
    fn(seq);
    if (static_cast<int>(seq.size()) == max_len) return;
    for (int k = 1; k < vocab; ++k) {
      seq.push_back(k);
      rec();
      seq.pop_back();
    }
  };
  rec();
}

Outcome CtcNormalization() {
  std::mt19937_64 rng(303);
  Checker c;
  double worst = 0;
  int instances = 0;
  for (int T = 1; T <= 4; ++T) {
    for (int V = 2; V <= 3; ++V) {
      for (int rep = 0; rep < 10; ++rep) {
        const auto m = FromRows(oracle::RandomLogits(rng, T, V, 3.0));
        double total = 0;
        ForEachSequence(T, V, [&](const std::vector<int> &labels) {
          total += std::exp(-CtcLoss(m, labels, 0).loss);
        });
        worst = std::max(worst, std::abs(total - 1.0));
        c.Expect(std::abs(total - 1.0) <= 1e-6, "T=" + std::to_string(T) + " V=" + std::to_string(V) +
                                                     " sum " + Fmt(total));
        ++instances;
      }
    }
  }
  return c.Finish(std::to_string(instances) + " instances, max |sum - 1| " + Fmt(worst));
}

Outcome DecoderOptimality() {
  std::mt19937_64 rng(4);
  Checker c;
  int mismatches = 0, monotone_violations = 0;
  const int instances = 100;
  for (int i = 0; i < instances; ++i) {
    const int T = std::uniform_int_distribution<int>(1, 5)(rng);
    const int V = std::uniform_int_distribution<int>(2, 4)(rng);
    const auto m = FromRows(oracle::RandomLogits(rng, T, V, 2.0));
    const auto vocab = Letters(V - 2);
    DecoderConfig cfg;
    cfg.alpha = 0.0;
    cfg.beta = 0.0;
    cfg.beam_width = 1000;
    const auto full = BeamDecode(m, vocab, nullptr, cfg);
    const auto brute = BruteForceBest(m, 0, T);
    const bool same = full.labels == brute.labels && std::abs(full.total_score - brute.logprob) <= 1e-9;
    mismatches += !same;
    c.Expect(same, "instance " + std::to_string(i) + " differs from brute force");
    double prev = -INFINITY;
    bool monotone = true;
    std::vector<int> widths;
    for (int w = 1; w <= 64; ++w) widths.push_back(w);
    widths.push_back(1000);
    for (int w : widths) {
      cfg.beam_width = w;
      const double s = BeamDecode(m, vocab, nullptr, cfg).total_score;
      if (s < prev - 1e-12) {
        monotone = false;
        c.Expect(false, "instance " + std::to_string(i) + " score drops at width " + std::to_string(w) + " by " +
                            Fmt(prev - s));
      }
      prev = std::max(prev, s);
    }
    monotone_violations += !monotone;
  }
  return c.Finish(std::to_string(instances) + " instances, " + std::to_string(mismatches) +
                  " brute-force mismatches, " + std::to_string(monotone_violations) +
                  " width-monotonicity violations");
}

Outcome LmFusion() {
  Checker c;
  const auto lm = ArpaModel::Parse(ReadFile(std::string(BNASR_FIXTURE_DIR) + "/tiny.arpa"));
  using Words = std::vector<std::string>;
  struct Case {
    Words words;
    double want;
  };
  // <s> has back-off -0.4; a: -0.5 bo -0.3; b: -0.7; c: -1.2 bo -0.1; <unk>: -2.0;
  // bigrams <s> a -0.3, a b -0.2, a </s> -1.0, b </s> -0.4; unigram </s> -1.0.
  const std::vector<Case> cases = {
      {{}, -0.4 - 1.0},
      {{"a"}, -0.3 - 1.0},
      {{"b"}, (-0.4 - 0.7) - 0.4},
      {{"a", "b"}, -0.3 - 0.2 - 0.4},
      {{"c"}, (-0.4 - 1.2) + (-0.1 - 1.0)},
      {{"a", "c"}, -0.3 + (-0.3 - 1.2) + (-0.1 - 1.0)},
      {{"b", "a"}, (-0.4 - 0.7) + (0.0 - 0.5) - 1.0},
      {{"zzz"}, (-0.4 - 2.0) + (0.0 - 1.0)},
  };
  double worst = 0;
  for (const auto &cs : cases) {
    const double got = lm.ScoreSentence(cs.words);
    worst = std::max(worst, std::abs(got - cs.want));
    c.Expect(std::abs(got - cs.want) <= 1e-9, "sentence score " + Fmt(got) + " vs " + Fmt(cs.want));
  }
  // One frame, 'b' ahead of 'a' by 0.1 nats; the LM prefers "a" by 0.2 log10.
  const LogitMatrix m(1, 4, {-10.0, -10.0, 0.0, 0.1});
  const double threshold = 0.1 / (std::numbers::ln10 * 0.2);
  DecoderConfig cfg;
  cfg.beam_width = 8;
  cfg.beta = 0.0;
  cfg.alpha = threshold - 0.01;
  const auto below = BeamDecode(m, Letters(2), &lm, cfg);
  cfg.alpha = threshold + 0.01;
  const auto above = BeamDecode(m, Letters(2), &lm, cfg);
  c.Expect(below.words == Words{"b"}, "below threshold picks b");
  c.Expect(above.words == Words{"a"}, "above threshold picks a");
  return c.Finish(std::to_string(cases.size()) + " hand-computed sentences, max abs err " + Fmt(worst) +
                  "; flip at alpha " + Fmt(threshold) + " (b below, a above)");
}

Outcome Metrics() {
  Checker c;
  c.Expect(Levenshtein("kitten", "sitting") == 3, "kitten/sitting");
  std::mt19937_64 rng(606);
  const std::u32string alphabet = U"abকখা়্\U0001F600 ";
  auto random_text = [&] {
    std::u32string s;
    for (int n = std::uniform_int_distribution<int>(0, 12)(rng); n > 0; --n) {
      s.push_back(alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]);
    }
    return s;
  };
  auto lev = [](const std::u32string &a, const std::u32string &b) {
    return Levenshtein(Utf8Encode(a), Utf8Encode(b));
  };
  int oracle_mismatch = 0, axiom_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_text(), b = random_text(), x = random_text();
    const auto want = oracle::RecursiveEditDistance(std::vector<char32_t>(a.begin(), a.end()),
                                                    std::vector<char32_t>(b.begin(), b.end()));
    const auto d = lev(a, b);
    oracle_mismatch += d != want;
    c.Expect(d == want, "oracle mismatch on pair " + std::to_string(i));
    const bool axioms = d == lev(b, a) && lev(a, x) <= d + lev(b, x) && (d == 0) == (a == b);
    axiom_failures += !axioms;
    c.Expect(axioms, "metric axiom on pair " + std::to_string(i));
  }
  return c.Finish("1000 pairs, " + std::to_string(oracle_mismatch) + " oracle mismatches, " +
                  std::to_string(axiom_failures) + " axiom failures, kitten/sitting = " +
                  std::to_string(Levenshtein("kitten", "sitting")));
}

Manifest SyntheticCvManifest() {
  Manifest m;
  int next = 0;
  auto add = [&](int up, int down, double dur) {
    ClipRecord r;
    r.clip_id = "clip" + std::to_string(next);
    r.audio_path = r.clip_id + ".mp3";
    r.sentence = "আমি";
    r.upvotes = up;
    r.downvotes = down;
    r.duration_s = dur;
    m.records.push_back(r);
    ++next;
  };
  // Net positive: 36919 inside [1, 10] s (boundaries included), 486 outside.
  for (int i = 0; i < 36919; ++i) {
    const double dur = i == 0 ? 1.0 : i == 1 ? 10.0 : 1.0 + 9.0 * (i % 997) / 997.0;
    add(2 + i % 4, i % 2, dur);
  }
  for (int i = 0; i < 486; ++i) add(2 + i % 3, 1, i % 2 ? 0.999 : 10.001);
  for (int i = 0; i < 5536; ++i) add(i % 3, i % 3 + 1 + i % 2, 4.0);
  for (int i = 0; i < 161380; ++i) add(0, 0, 5.0);
  for (int i = 0; i < 2630; ++i) add(1 + i % 4, 1 + i % 4, 5.0);
  return m;
}

Outcome PreprocessingFidelity() {
  Checker c;
  const Waveform w{{0, 0.01, 1.0, 0.5, 0.02, 0}, 16000};
  const auto trimmed = TrimSilence(w);
  c.Expect(trimmed.samples == std::vector<double>{1.0, 0.5}, "trim worked fixture");

  const Manifest m = ParseManifest(SerializeManifest(SyntheticCvManifest()), "synthetic");
  const auto census = CountVotes(m);
  c.Expect(census.net_positive == 37405, "net positive " + std::to_string(census.net_positive));
  c.Expect(census.net_negative == 5536, "net negative " + std::to_string(census.net_negative));
  c.Expect(census.unvoted == 161380, "unvoted " + std::to_string(census.unvoted));
  c.Expect(census.tied == 2630, "tied " + std::to_string(census.tied));
  const auto kept = FilterClips(m, ClipFilter{true, 1.0, 10.0});
  c.Expect(kept.records.size() == 36919, "retained " + std::to_string(kept.records.size()));
  const auto votes_only = FilterClips(m, ClipFilter{true});
  c.Expect(votes_only.records.size() == 37405, "strict vote filter " + std::to_string(votes_only.records.size()));
  std::string detail = "trim [1.0, 0.5]; census 37405/5536/161380/2630; retained " +
                       std::to_string(kept.records.size());

  const char *train = std::getenv("BNASR_CV_TRAIN_TSV");
  const char *durations = std::getenv("BNASR_CV_DURATIONS_TSV");
  if (train && durations) {
    clitest::TempDir dir;
    const auto r = clitest::RunCli(dir, "curate --manifest " + clitest::Quote(train) + " --durations " +
                                            clitest::Quote(durations) + " --net-positive --min-sec 1 --max-sec 10 --out " +
                                            clitest::Quote(dir / "kept.tsv"));
    c.Expect(r.exit_code == 0, "curate on the real manifest exited " + std::to_string(r.exit_code));
    const auto pos = r.err.find("retained=");
    const std::string got = pos == std::string::npos ? "?" : r.err.substr(pos + 9, r.err.find('\n', pos) - pos - 9);
    c.Expect(got == "36919", "real dataset retained " + got);
    detail += "; real dataset retained " + got;
  } else {
    detail += "; real-dataset check skipped (set BNASR_CV_TRAIN_TSV and BNASR_CV_DURATIONS_TSV)";
  }
  return c.Finish(detail);
}

Outcome ToyTraining() {
  const auto start = Clock::now();
  Checker c;
  const auto data = MakeSeparableDataset(SyntheticSpec{});
  TrainOptions opt;
  opt.seed = 7;
  // 9 training utterances at batch 4 take 3 steps per epoch; 166 epochs = 498 steps.
  const auto plan = PhasePlan::TwoPhase(166, 7);
  c.Expect(plan.phases[0].lr == 5e-4 && plan.phases[0].weight_decay == 2.5e-6, "phase 1 hyperparameters");
  c.Expect(plan.phases[1].lr == 5e-6 && plan.phases[1].weight_decay == 2.5e-9, "phase 2 hyperparameters");
  const auto r = Train(ToyAcousticModel(data[0].features.dims, 5), data, plan, opt);
  const EpochLog *end1 = nullptr;
  for (const auto &e : r.log) {
    if (e.phase == 1) end1 = &e;
  }
  if (!end1) return {Status::kFail, "no phase-1 log entries"};
  const double ratio = end1->train_loss / r.initial_train_loss;
  c.Expect(end1->steps <= 500, "phase 1 took " + std::to_string(end1->steps) + " steps");
  c.Expect(ratio <= 0.1, "loss ratio " + Fmt(ratio));
  int phase2 = 0;
  for (const auto &e : r.log) {
    if (e.phase != 2) continue;
    ++phase2;
    c.Expect(e.lr == 5e-6 && e.weight_decay == 2.5e-9, "phase 2 log hyperparameters");
  }
  c.Expect(phase2 == 7, "phase 2 epochs " + std::to_string(phase2));
  const auto tsv = SerializeTrainLog(r.log);
  c.Expect(tsv.find("\n1\t166\t") != std::string::npos && tsv.find("\n2\t1\t") != std::string::npos,
           "phase boundary rows in the log");
  c.Expect(tsv.find("\t5e-06\t2.5e-09\n") != std::string::npos, "phase 2 lr in the log");
  const double secs = Seconds(start);
  c.Expect(secs < 60.0, "runtime " + Fmt(secs) + " s");
  return c.Finish("loss " + Fmt(r.initial_train_loss) + " -> " + Fmt(end1->train_loss) + " (ratio " + Fmt(ratio) +
                  ") after " + std::to_string(end1->steps) + " steps; lr 5e-4 -> 5e-6 at the phase boundary; " +
                  Fmt(secs) + " s");
}

Outcome PostProcessing() {
  Checker c;
  const auto rules = NormRules::Parse(ReadFile(BNASR_DEFAULT_RULES));
  std::istringstream corpus(ReadFile(std::string(BNASR_FIXTURE_DIR) + "/bn_corpus.txt"));
  int lines = 0;
  for (std::string s; std::getline(corpus, s); ++lines) {
    const auto n = NormalizeBn(s, rules);
    c.Expect(NormalizeBn(n, rules) == n, "normalize idempotence on line " + std::to_string(lines + 1));
    const auto d = AppendDanda(s);
    c.Expect(AppendDanda(d) == d, "append_danda idempotence on line " + std::to_string(lines + 1));
  }

  clitest::TempDir dir;
  auto m = ParseManifest(clitest::kManifest);
  for (auto &r : m.records) r.sentence = StripPunct(r.sentence);
  const auto vocab = BuildVocab(m);
  WriteFile(dir / "vocab.txt", vocab.Serialize());
  clitest::WriteLogits(dir / "logits", m, vocab, 5);
  const auto r = clitest::RunCli(dir, "decode --logits " + clitest::Quote(dir / "logits") + " --vocab " +
                                          clitest::Quote(dir / "vocab.txt") + " --arpa " +
                                          clitest::Quote(std::string(BNASR_FIXTURE_DIR) + "/tiny.arpa"));
  c.Expect(r.exit_code == 0, "decode exit " + std::to_string(r.exit_code));
  const auto out = SplitFields(r.out, '\n');
  int decoded = 0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].empty()) continue;
    ++decoded;
    const auto text = Utf8Decode(out[i]);
    c.Expect(!text.empty() && text.back() == kDanda, "line without danda: " + out[i]);
  }
  c.Expect(decoded == static_cast<int>(m.records.size()), "decoded " + std::to_string(decoded) + " lines");
  return c.Finish(std::to_string(lines) + " fixture strings idempotent; " + std::to_string(decoded) +
                  " decoder lines end in U+0964");
}

Outcome Determinism() {
  Checker c;
  clitest::TempDir dir;
  using clitest::Quote;
  auto m = ParseManifest(clitest::kManifest);
  // WAV audio so curate measures durations per file.
  clitest::fs::create_directories(dir.path() / "audio");
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    std::vector<double> s(8000 * (1 + i), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = 0.3 * std::sin(0.01 * static_cast<double>(k));
    WriteFile(dir / ("audio/" + m.records[i].audio_path), SerializeWav(Waveform{s, 8000}));
  }
  WriteFile(dir / "train.tsv", clitest::kManifest);
  for (auto &r : m.records) r.sentence = StripPunct(r.sentence);
  const auto vocab = BuildVocab(m);
  WriteFile(dir / "vocab.txt", vocab.Serialize());
  clitest::WriteLogits(dir / "logits", m, vocab, 10);
  std::string refs = "clip_id\ttext\n";
  for (const auto &r : m.records) refs += r.clip_id + '\t' + r.sentence + "।\n";
  WriteFile(dir / "refs.tsv", refs);
  const auto hyps = clitest::RunCli(dir, "decode --logits " + Quote(dir / "logits") + " --vocab " +
                                             Quote(dir / "vocab.txt"));
  WriteFile(dir / "hyps.tsv", hyps.out);

  struct Command {
    std::string name;
    std::string args;
    std::string side_file;  // extra output compared byte for byte
  };
  const std::vector<Command> commands = {
      {"curate", "curate --manifest " + Quote(dir / "train.tsv") + " --audio-dir " + Quote(dir / "audio") +
                     " --net-positive --min-sec 1 --max-sec 10",
       ""},
      {"decode", "decode --logits " + Quote(dir / "logits") + " --vocab " + Quote(dir / "vocab.txt") + " --arpa " +
                     Quote(std::string(BNASR_FIXTURE_DIR) + "/tiny.arpa") + " --alpha 0.5 --beta 1.0",
       ""},
      {"train-toy", "train-toy --seed 7 --phase1-epochs 20 --phase2-epochs 3 --checkpoint " + Quote(dir / "ckpt"),
       dir / "ckpt"},
      {"eval", "eval --refs " + Quote(dir / "refs.tsv") + " --hyps " + Quote(dir / "hyps.tsv") + " --report " +
                   Quote(dir / "report.tsv"),
       dir / "report.tsv"},
  };
  std::string detail;
  for (const auto &cmd : commands) {
    std::vector<std::string> outputs;
    for (const char *workers : {"1", "1", "8", "8"}) {
      const auto r = clitest::RunCli(dir, cmd.args + " --workers " + workers);
      c.Expect(r.exit_code == 0, cmd.name + " exit " + std::to_string(r.exit_code) + ": " + r.err);
      outputs.push_back(r.out + (cmd.side_file.empty() ? "" : "\x1f" + ReadFile(cmd.side_file)));
    }
    bool same = !outputs[0].empty();
    for (const auto &o : outputs) same &= o == outputs[0];
    c.Expect(same, cmd.name + " outputs differ");
    detail += (detail.empty() ? "" : ", ") + cmd.name + (same ? " identical" : " DIFFERS");
  }
  return c.Finish(detail + " (2 runs x workers 1 and 8)");
}

}  // namespace

int main() {
  struct Criterion {
    const char *id;
    const char *title;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"AC1", "CTC loss matches path enumeration", CtcOracleEquivalence},
      {"AC2", "CTC gradient matches finite differences", GradientCheck},
      {"AC3", "CTC probabilities sum to one", CtcNormalization},
      {"AC4", "beam search optimal at exhaustive width and monotone in width", DecoderOptimality},
      {"AC5", "LM back-off sums and fusion threshold", LmFusion},
      {"AC6", "Levenshtein oracle and metric axioms", Metrics},
      {"AC7", "trim fixture and vote/duration partition", PreprocessingFidelity},
      {"AC8", "toy two-phase AdamW training", ToyTraining},
      {"AC9", "normalization idempotence and danda on decoder output", PostProcessing},
      {"AC10", "byte-identical CLI outputs across runs and workers", Determinism},
  };
  int failed = 0;
  for (const auto &cr : criteria) {
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception &e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char *tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    std::printf("%-4s %s  %s: %s\n", cr.id, tag, cr.title, o.detail.c_str());
    std::fflush(stdout);
    failed += o.status == Status::kFail;
  }
  return failed == 0 ? 0 : 1;
}
