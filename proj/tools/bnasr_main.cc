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

// bnasr: command-line front end for the Bengali ASR pipeline.
//
// Every subcommand accepts --config FILE with key=value lines; flags given on
// the command line win. The resolved configuration is echoed to stderr;
// stdout carries data only. Exit status: 0 ok, 1 invalid input, 2 I/O error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bnasr/audio.h"
#include "bnasr/corpus.h"
#include "bnasr/ctc.h"
#include "bnasr/decoder.h"
#include "bnasr/error.h"
#include "bnasr/lm.h"
#include "bnasr/metrics.h"
#include "bnasr/parallel.h"
#include "bnasr/textnorm.h"
#include "bnasr/trainer.h"
#include "bnasr/utf8.h"

namespace fs = std::filesystem;
using namespace bnasr;

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void Emit(const std::string &path, const std::string &data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
  } else {
    WriteFile(path, data);
  }
}

std::vector<std::string> Lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

// Two-column "clip_id\ttext" file; an optional header whose first field is
// "clip_id" is skipped. Order is preserved.
std::vector<std::pair<std::string, std::string>> ReadIdText(const std::string &path) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto lines = Lines(ReadFile(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = SplitFields(lines[i], '\t');
    if (i == 0 && fields[0] == "clip_id") continue;
    if (fields.size() != 2) {
      throw FormatError(path + ": expected 2 tab-separated fields", static_cast<int>(i + 1));
    }
    out.emplace_back(fields[0], fields[1]);
  }
  return out;
}

// Sorted *.ctcl files in a directory.
std::vector<fs::path> LogitFiles(const std::string &dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ctcl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

Manifest StripManifest(Manifest m) {
  for (auto &r : m.records) r.sentence = StripPunct(r.sentence);
  return m;
}

// Common Voice clip_durations.tsv: "clip\tduration[ms]".
std::map<std::string, double> ReadDurations(const std::string &path) {
  std::map<std::string, double> out;
  const auto lines = Lines(ReadFile(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = SplitFields(lines[i], '\t');
    if (i == 0 && fields[0] == "clip") continue;
    if (fields.size() != 2) throw FormatError(path + ": expected clip and duration", static_cast<int>(i + 1));
    double ms = 0;
    const auto &f = fields[1];
    auto res = std::from_chars(f.data(), f.data() + f.size(), ms);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size() || !(ms >= 0)) {
      throw FormatError(path + ": bad duration '" + f + "'", static_cast<int>(i + 1));
    }
    out[fields[0]] = ms / 1000.0;
  }
  return out;
}

struct CommonOptions {
  int workers = 1;
  std::string out = "-";
};

void AddCommon(CLI::App *sub, CommonOptions &c, std::string &config) {
  sub->add_option("--config", config, "key=value configuration file");
  sub->add_option("--workers", c.workers, "parallel workers")->check(CLI::Range(1, 256));
  sub->add_option("--out", c.out, "output file, - for stdout");
}

// ---------------------------------------------------------------------------

struct CurateOptions {
  std::string manifest;
  std::string audio_dir;
  std::string durations;
  double min_sec = 0.0;
  double max_sec = std::numeric_limits<double>::infinity();
  bool net_positive = false;
  std::string merge;
  std::string train_out;
  std::string eval_out;
  double train_fraction = 0.85;
  std::uint64_t seed = 0;
};

void RunCurate(const CurateOptions &o, const CommonOptions &c) {
  Manifest m = ParseManifest(ReadFile(o.manifest), o.manifest);
  if (!o.durations.empty()) {
    const auto table = ReadDurations(o.durations);
    for (auto &r : m.records) {
      auto it = table.find(r.audio_path);
      if (it != table.end()) r.duration_s = it->second;
    }
  }
  if (!o.audio_dir.empty()) {
    std::vector<double> seconds(m.records.size());
    ParallelFor(m.records.size(), c.workers, [&](std::size_t i) {
      const auto w = LoadWav(ReadFile((fs::path(o.audio_dir) / m.records[i].audio_path).string()));
      seconds[i] = w.duration_s();
    });
    for (std::size_t i = 0; i < seconds.size(); ++i) m.records[i].duration_s = seconds[i];
  }
  const ClipFilter filter{o.net_positive, o.min_sec, o.max_sec};
  const VoteCensus census = CountVotes(m);
  Manifest kept = FilterClips(m, filter);
  std::cerr << "net_positive=" << census.net_positive << " net_negative=" << census.net_negative
            << " unvoted=" << census.unvoted << " tied=" << census.tied
            << " retained=" << kept.records.size() << '\n';
  if (o.merge.empty()) {
    Emit(c.out, SerializeManifest(kept));
    return;
  }
  const Manifest other = FilterClips(ParseManifest(ReadFile(o.merge), o.merge), filter);
  auto [train, eval] = MergeAndSplit(kept, other, SplitSpec{o.train_fraction, o.seed});
  std::cerr << "train=" << train.records.size() << " eval=" << eval.records.size() << '\n';
  Emit(o.train_out, SerializeManifest(train));
  WriteFile(o.eval_out, SerializeManifest(eval));
}

// ---------------------------------------------------------------------------

struct TrimOptions {
  std::vector<std::string> inputs;
  std::string out_dir;
  int rate = 16000;
  double divisor = 30.0;
};

void RunTrim(const TrimOptions &o, const CommonOptions &c) {
  std::error_code ec;
  if (!fs::is_directory(o.out_dir, ec)) throw IoError("not a directory: " + o.out_dir);
  std::vector<std::string> rows(o.inputs.size());
  ParallelFor(o.inputs.size(), c.workers, [&](std::size_t i) {
    const Waveform in = LoadWav(ReadFile(o.inputs[i]));
    const Waveform out = TrimSilence(ResampleLinear(in, o.rate), o.divisor);
    const std::string name = fs::path(o.inputs[i]).filename().string();
    WriteFile((fs::path(o.out_dir) / name).string(), SerializeWav(out));
    rows[i] = name + '\t' + std::to_string(in.samples.size()) + '\t' + std::to_string(in.sample_rate_hz) +
              '\t' + std::to_string(out.samples.size()) + '\t' + FormatDouble(out.duration_s()) + '\n';
  });
  std::string data = "file\tsamples_in\trate_in\tsamples_out\tduration_s\n";
  for (const auto &r : rows) data += r;
  Emit(c.out, data);
}

// ---------------------------------------------------------------------------

struct VocabOptions {
  std::string manifest;
  bool keep_punct = false;
};

void RunVocab(const VocabOptions &o, const CommonOptions &c) {
  Manifest m = ParseManifest(ReadFile(o.manifest), o.manifest);
  if (!o.keep_punct) m = StripManifest(std::move(m));
  Emit(c.out, BuildVocab(m).Serialize());
}

// ---------------------------------------------------------------------------

struct EncodeOptions {
  std::string manifest;
  std::string vocab;
  bool keep_punct = false;
};

void RunEncode(const EncodeOptions &o, const CommonOptions &c) {
  Manifest m = ParseManifest(ReadFile(o.manifest), o.manifest);
  if (!o.keep_punct) m = StripManifest(std::move(m));
  const Vocabulary vocab = Vocabulary::Parse(ReadFile(o.vocab));
  std::vector<std::string> rows(m.records.size());
  ParallelFor(m.records.size(), c.workers, [&](std::size_t i) {
    const auto &r = m.records[i];
    std::vector<int> ids;
    try {
      ids = EncodeTranscript(r.sentence, vocab);
    } catch (const ArgumentError &e) {
      throw ArgumentError(r.clip_id + ": " + e.what());
    }
    std::string row = r.clip_id + '\t';
    for (std::size_t k = 0; k < ids.size(); ++k) row += (k ? " " : "") + std::to_string(ids[k]);
    rows[i] = row + '\n';
  });
  std::string data = "clip_id\tlabels\n";
  for (const auto &r : rows) data += r;
  Emit(c.out, data);
}

// ---------------------------------------------------------------------------

struct DecodeOptions {
  std::string logits;
  std::string vocab;
  std::string arpa;
  std::string rules = BNASR_DEFAULT_RULES;
  double alpha = 0.5;
  double beta = 1.0;
  int beam = 16;
  int nbest = 1;
  bool raw = false;
};

void RunDecode(const DecodeOptions &o, const CommonOptions &c) {
  const Vocabulary vocab = Vocabulary::Parse(ReadFile(o.vocab));
  std::unique_ptr<ArpaModel> lm;
  if (!o.arpa.empty()) {
    lm = std::make_unique<ArpaModel>(ArpaModel::Parse(ReadFile(o.arpa)));
    for (const auto &d : lm->diagnostics()) std::cerr << "arpa: " << d << '\n';
  }
  const NormRules rules = NormRules::Parse(ReadFile(o.rules));
  DecoderConfig cfg;
  cfg.beam_width = std::max(o.beam, o.nbest);
  cfg.alpha = o.alpha;
  cfg.beta = o.beta;

  const auto files = LogitFiles(o.logits);
  std::vector<std::string> rows(files.size());
  ParallelFor(files.size(), c.workers, [&](std::size_t i) {
    const LogitMatrix logits = ParseLogits(ReadFile(files[i].string()));
    if (logits.vocab_size() != vocab.size()) {
      throw ArgumentError(files[i].filename().string() + ": logits have " + std::to_string(logits.vocab_size()) +
                          " columns, vocabulary has " + std::to_string(vocab.size()));
    }
    const std::string id = files[i].stem().string();
    auto hyps = BeamDecodeNBest(logits, vocab, lm.get(), cfg);
    if (hyps.size() > static_cast<std::size_t>(o.nbest)) hyps.resize(o.nbest);
    std::string out;
    for (std::size_t r = 0; r < hyps.size(); ++r) {
      std::string text = DecodeTranscript(hyps[r].labels, vocab);
      if (!o.raw) text = AppendDanda(NormalizeBn(text, rules));
      out += id + '\t';
      if (o.nbest > 1) out += std::to_string(r + 1) + '\t' + FormatDouble(hyps[r].total_score) + '\t';
      out += text + '\n';
    }
    rows[i] = std::move(out);
  });
  std::string data = o.nbest > 1 ? "clip_id\trank\tscore\ttext\n" : "clip_id\ttext\n";
  for (const auto &r : rows) data += r;
  Emit(c.out, data);
}

// ---------------------------------------------------------------------------

struct ScoreOptions {
  std::string logits;
  std::string manifest;
  std::string vocab;
  bool keep_punct = false;
};

void RunScore(const ScoreOptions &o, const CommonOptions &c) {
  Manifest m = ParseManifest(ReadFile(o.manifest), o.manifest);
  if (!o.keep_punct) m = StripManifest(std::move(m));
  const Vocabulary vocab = Vocabulary::Parse(ReadFile(o.vocab));
  std::map<std::string, const ClipRecord *> by_id;
  for (const auto &r : m.records) by_id[r.clip_id] = &r;
  const auto files = LogitFiles(o.logits);
  for (const auto &f : files) {
    if (!by_id.count(f.stem().string())) throw ArgumentError("no manifest entry for " + f.filename().string());
  }
  std::vector<std::string> rows(files.size());
  ParallelFor(files.size(), c.workers, [&](std::size_t i) {
    const std::string id = files[i].stem().string();
    const LogitMatrix logits = ParseLogits(ReadFile(files[i].string()));
    const auto labels = EncodeTranscript(by_id.at(id)->sentence, vocab);
    const auto res = CtcLoss(logits, labels, vocab.blank_id());
    rows[i] = id + '\t' + (res.feasible ? FormatDouble(res.loss) : "inf") + '\t' +
              (res.feasible ? "1" : "0") + '\n';
  });
  std::string data = "clip_id\tctc_loss\tfeasible\n";
  for (const auto &r : rows) data += r;
  Emit(c.out, data);
}

// ---------------------------------------------------------------------------

struct LmScoreOptions {
  std::string arpa;
  std::string text;
  double unk_floor = ArpaModel::kDefaultUnknownFloor;
};

void RunLmScore(const LmScoreOptions &o, const CommonOptions &c) {
  ArpaModel lm = ArpaModel::Parse(ReadFile(o.arpa));
  lm.set_unknown_floor(o.unk_floor);
  for (const auto &d : lm.diagnostics()) std::cerr << "arpa: " << d << '\n';
  std::vector<std::string> sentences;
  for (auto &line : Lines(ReadFile(o.text))) {
    if (!line.empty()) sentences.push_back(std::move(line));
  }
  std::vector<std::string> rows(sentences.size());
  ParallelFor(sentences.size(), c.workers, [&](std::size_t i) {
    const auto words = SplitWhitespace(sentences[i]);
    rows[i] = FormatDouble(lm.ScoreSentence(words)) + '\t' + sentences[i] + '\n';
  });
  std::string data = "log10_prob\tsentence\n";
  for (const auto &r : rows) data += r;
  Emit(c.out, data);
}

// ---------------------------------------------------------------------------

struct TrainToyOptions {
  int phase1_epochs = 71;
  int phase2_epochs = 7;
  int batch_size = 4;
  std::int64_t max_steps = 0;
  std::uint64_t seed = 0;
  int utterances = 10;
  int vocab_size = 5;
  int frames = 20;
  std::uint64_t data_seed = 0;
  std::string checkpoint;
};

void RunTrainToy(const TrainToyOptions &o, const CommonOptions &c) {
  SyntheticSpec spec;
  spec.utterances = o.utterances;
  spec.vocab_size = o.vocab_size;
  spec.frames = o.frames;
  spec.seed = o.data_seed;
  const auto data = MakeSeparableDataset(spec);
  TrainOptions opt;
  opt.batch_size = o.batch_size;
  opt.seed = o.seed;
  opt.workers = c.workers;
  opt.max_steps = o.max_steps;
  const auto result = Train(ToyAcousticModel(data[0].features.dims, spec.vocab_size), data,
                            PhasePlan::TwoPhase(o.phase1_epochs, o.phase2_epochs), opt);
  std::cerr << "initial_train_loss=" << FormatDouble(result.initial_train_loss)
            << " final_train_loss=" << FormatDouble(result.log.back().train_loss)
            << " steps=" << result.log.back().steps << '\n';
  if (!o.checkpoint.empty()) WriteFile(o.checkpoint, result.model.Serialize());
  Emit(c.out, SerializeTrainLog(result.log));
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string refs;
  std::string hyps;
  std::string report;
  bool strip_punct = false;
};

void RunEval(const EvalOptions &o, const CommonOptions &c) {
  const auto refs = ReadIdText(o.refs);
  std::map<std::string, std::string> hyps;
  for (auto &[id, text] : ReadIdText(o.hyps)) {
    if (!hyps.emplace(id, text).second) throw ArgumentError("duplicate hypothesis id " + id);
  }
  std::vector<EvalPair> pairs;
  for (const auto &[id, text] : refs) {
    auto it = hyps.find(id);
    if (it == hyps.end()) throw ArgumentError("no hypothesis for " + id);
    if (o.strip_punct) {
      pairs.push_back({id, StripPunct(text), StripPunct(it->second)});
    } else {
      pairs.push_back({id, text, it->second});
    }
    hyps.erase(it);
  }
  if (!hyps.empty()) throw ArgumentError("hypothesis without reference: " + hyps.begin()->first);
  const EvalReport report = EvaluateCorpus(pairs, c.workers);
  if (!o.report.empty()) WriteFile(o.report, report.SerializeTsv());
  Emit(c.out, report.SummaryLine() + '\n');
}

// Expands "--config FILE" into "--key=value" tokens placed ahead of the
// subcommand's own arguments, so later command-line flags take precedence.
std::vector<std::string> ExpandConfig(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return args;
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  if (!fs::is_regular_file(*path)) throw IoError("cannot open config " + *path);
  std::vector<std::string> tokens;
  for (const auto &item : CLI::ConfigINI().from_file(*path)) {
    if (item.name == "++" || item.name == "--") continue;
    std::string value;
    for (std::size_t k = 0; k < item.inputs.size(); ++k) value += (k ? " " : "") + item.inputs[k];
    tokens.push_back("--" + item.name + "=" + value);
  }
  args.insert(args.begin() + 1, tokens.begin(), tokens.end());
  return args;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bengali ASR pipeline tools", "bnasr"};
  app.require_subcommand(1);
  app.fallthrough(false);

  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CommonOptions common;
  std::string config;

  CurateOptions curate;
  auto *sc = app.add_subcommand("curate", "filter a clip manifest by votes and duration");
  sc->add_option("--manifest", curate.manifest, "clip manifest TSV")->required();
  sc->add_option("--audio-dir", curate.audio_dir, "directory of WAV clips to measure");
  sc->add_option("--durations", curate.durations, "clip_durations.tsv (clip, duration[ms])");
  sc->add_option("--min-sec", curate.min_sec, "minimum duration, inclusive")->check(CLI::NonNegativeNumber);
  sc->add_option("--max-sec", curate.max_sec, "maximum duration, inclusive")->check(CLI::NonNegativeNumber);
  sc->add_flag("--net-positive", curate.net_positive, "keep clips with more up than down votes");
  auto *merge = sc->add_option("--merge", curate.merge, "second manifest to merge and re-split");
  sc->add_option("--train-out", curate.train_out, "train split output")->needs(merge);
  auto *eval_out = sc->add_option("--eval-out", curate.eval_out, "held-out split output")->needs(merge);
  merge->needs(eval_out);
  sc->add_option("--train-fraction", curate.train_fraction, "train share of the merged pool")
      ->check(CLI::Range(0.0, 1.0));
  sc->add_option("--seed", curate.seed, "split shuffle seed");
  AddCommon(sc, common, config);

  TrimOptions trim;
  auto *st = app.add_subcommand("trim", "resample and trim silence from WAV files");
  st->add_option("inputs", trim.inputs, "WAV files")->required();
  st->add_option("--out-dir", trim.out_dir, "output directory")->required();
  st->add_option("--rate", trim.rate, "target sample rate")->check(CLI::Range(1, 1000000));
  st->add_option("--divisor", trim.divisor, "threshold is max|x| / divisor")->check(CLI::PositiveNumber);
  AddCommon(st, common, config);

  VocabOptions vocab;
  auto *sv = app.add_subcommand("vocab", "build the character vocabulary of a manifest");
  sv->add_option("--manifest", vocab.manifest, "clip manifest TSV")->required();
  sv->add_flag("--keep-punct", vocab.keep_punct, "do not strip punctuation first");
  AddCommon(sv, common, config);

  EncodeOptions encode;
  auto *se = app.add_subcommand("encode", "encode transcripts as label ids");
  se->add_option("--manifest", encode.manifest, "clip manifest TSV")->required();
  se->add_option("--vocab", encode.vocab, "vocabulary file")->required();
  se->add_flag("--keep-punct", encode.keep_punct, "do not strip punctuation first");
  AddCommon(se, common, config);

  DecodeOptions decode;
  auto *sd = app.add_subcommand("decode", "beam-search decode CTC logit files");
  sd->add_option("--logits", decode.logits, "directory of .ctcl files")->required();
  sd->add_option("--vocab", decode.vocab, "vocabulary file")->required();
  sd->add_option("--arpa", decode.arpa, "ARPA language model");
  sd->add_option("--rules", decode.rules, "normalization rules");
  sd->add_option("--alpha", decode.alpha, "LM weight")->check(CLI::NonNegativeNumber);
  sd->add_option("--beta", decode.beta, "word insertion bonus");
  sd->add_option("--beam", decode.beam, "beam width")->check(CLI::Range(1, 100000));
  sd->add_option("--nbest", decode.nbest, "hypotheses per file")->check(CLI::Range(1, 100000));
  sd->add_flag("--raw", decode.raw, "skip normalization and danda");
  AddCommon(sd, common, config);

  ScoreOptions score;
  auto *ss = app.add_subcommand("score", "CTC loss of reference transcripts under logit files");
  ss->add_option("--logits", score.logits, "directory of .ctcl files")->required();
  ss->add_option("--manifest", score.manifest, "clip manifest TSV")->required();
  ss->add_option("--vocab", score.vocab, "vocabulary file")->required();
  ss->add_flag("--keep-punct", score.keep_punct, "do not strip punctuation first");
  AddCommon(ss, common, config);

  LmScoreOptions lm_score;
  auto *sl = app.add_subcommand("lm-score", "log10 sentence probabilities under an ARPA model");
  sl->add_option("--arpa", lm_score.arpa, "ARPA language model")->required();
  sl->add_option("--text", lm_score.text, "one sentence per line")->required();
  sl->add_option("--unk-floor", lm_score.unk_floor, "log10 probability for unknown words without <unk>");
  AddCommon(sl, common, config);

  TrainToyOptions train;
  auto *sr = app.add_subcommand("train-toy", "two-phase AdamW training of the toy acoustic model");
  sr->add_option("--phase1-epochs", train.phase1_epochs, "epochs at lr 5e-4, wd 2.5e-6")->check(CLI::Range(1, 1000000));
  sr->add_option("--phase2-epochs", train.phase2_epochs, "epochs at lr 5e-6, wd 2.5e-9")->check(CLI::Range(1, 1000000));
  sr->add_option("--batch-size", train.batch_size, "utterances per step")->check(CLI::Range(1, 1000000));
  sr->add_option("--max-steps", train.max_steps, "stop after this many steps, 0 for no limit")
      ->check(CLI::NonNegativeNumber);
  sr->add_option("--seed", train.seed, "split and shuffle seed");
  sr->add_option("--utterances", train.utterances, "synthetic utterances")->check(CLI::Range(2, 1000000));
  sr->add_option("--vocab-size", train.vocab_size, "synthetic vocabulary size")->check(CLI::Range(3, 1000));
  sr->add_option("--frames", train.frames, "frames per utterance")->check(CLI::Range(1, 100000));
  sr->add_option("--data-seed", train.data_seed, "synthetic data seed");
  sr->add_option("--checkpoint", train.checkpoint, "write the final model here");
  AddCommon(sr, common, config);

  EvalOptions eval;
  auto *sx = app.add_subcommand("eval", "Levenshtein, WER and CER of hypotheses against references");
  sx->add_option("--refs", eval.refs, "clip_id<TAB>text references")->required();
  sx->add_option("--hyps", eval.hyps, "clip_id<TAB>text hypotheses")->required();
  sx->add_option("--report", eval.report, "per-utterance TSV report");
  sx->add_flag("--strip-punct", eval.strip_punct, "strip punctuation from both sides first");
  AddCommon(sx, common, config);

  std::vector<std::string> args;
  try {
    args = ExpandConfig(argc, argv);
  } catch (const IoError &e) {
    std::cerr << "bnasr: " << e.what() << '\n';
    return 2;
  } catch (const CLI::ParseError &e) {
    std::cerr << "bnasr: " << e.what() << '\n';
    return 1;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  CLI::App *sub = app.get_subcommands().front();
  std::cerr << "# bnasr " << sub->get_name() << " resolved config\n" << sub->config_to_str(true, false);

  try {
    const std::string name = sub->get_name();
    if (name == "curate") RunCurate(curate, common);
    else if (name == "trim") RunTrim(trim, common);
    else if (name == "vocab") RunVocab(vocab, common);
    else if (name == "encode") RunEncode(encode, common);
    else if (name == "decode") RunDecode(decode, common);
    else if (name == "score") RunScore(score, common);
    else if (name == "lm-score") RunLmScore(lm_score, common);
    else if (name == "train-toy") RunTrainToy(train, common);
    else if (name == "eval") RunEval(eval, common);
  } catch (const IoError &e) {
    std::cerr << "bnasr: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "bnasr: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
