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

#include "bnasr/trainer.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "bnasr/corpus.h"
#include "bnasr/error.h"
#include "bnasr/metrics.h"
#include "bnasr/parallel.h"

namespace bnasr {

namespace {

void PutU32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32(std::string_view b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[off + i]);
  return v;
}

// splitmix64 finalizer, used to derive independent per-epoch seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [lo, hi].
  int Uniform(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  // Uniform in (0, 1).
  double Unit() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double Normal() {
    const double u1 = Unit();
    const double u2 = Unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<std::vector<int>> SplitWords(const LabelSequence &labels, int delim) {
  std::vector<std::vector<int>> words;
  std::vector<int> cur;
  for (int id : labels) {
    if (id == delim) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(id);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

void Split(const std::vector<Utterance> &pool, std::uint64_t seed, double fraction,
           std::vector<Utterance> &train, std::vector<Utterance> &held_out) {
  const auto perm = SeededPermutation(pool.size(), seed);
  const std::size_t n_train = TrainSplitSize(pool.size(), fraction);
  train.clear();
  held_out.clear();
  for (std::size_t i = 0; i < perm.size(); ++i) {
    (i < n_train ? train : held_out).push_back(pool[perm[i]]);
  }
}

}  // namespace

ToyAcousticModel::ToyAcousticModel(int feature_dims, int vocab_size)
    : feature_dims_(feature_dims), vocab_size_(vocab_size) {
  if (feature_dims < 1 || vocab_size < 2) {
    throw ArgumentError("toy model needs F >= 1 and V >= 2");
  }
  params_.assign(weight_count() + static_cast<std::size_t>(vocab_size), 0.0);
}

LogitMatrix ToyAcousticModel::Forward(const FrameFeatures &frames) const {
  if (frames.dims != feature_dims_) {
    throw ArgumentError("frame features have " + std::to_string(frames.dims) +
                        " dims, model expects " + std::to_string(feature_dims_));
  }
  LogitMatrix out(frames.frames, vocab_size_);
  for (int t = 0; t < frames.frames; ++t) {
    for (int k = 0; k < vocab_size_; ++k) {
      double acc = bias(k);
      for (int f = 0; f < feature_dims_; ++f) acc += frames(t, f) * weight(f, k);
      out(t, k) = acc;
    }
  }
  return out;
}

void ToyAcousticModel::AccumulateGrad(const FrameFeatures &frames,
                                      const LogitMatrix &logit_grad,
                                      std::span<double> grad) const {
  for (int t = 0; t < frames.frames; ++t) {
    for (int k = 0; k < vocab_size_; ++k) {
      const double g = logit_grad(t, k);
      for (int f = 0; f < feature_dims_; ++f) {
        grad[static_cast<std::size_t>(f) * vocab_size_ + k] += frames(t, f) * g;
      }
      grad[weight_count() + k] += g;
    }
  }
}

std::string ToyAcousticModel::Serialize() const {
  std::string out = "TACM";
  PutU32(out, 1);
  PutU32(out, static_cast<std::uint32_t>(feature_dims_));
  PutU32(out, static_cast<std::uint32_t>(vocab_size_));
  for (double p : params_) PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(p)));
  return out;
}

ToyAcousticModel ToyAcousticModel::Parse(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 4) != "TACM") {
    throw FormatError("not a TACM checkpoint");
  }
  if (GetU32(bytes, 4) != 1) throw FormatError("unsupported TACM version");
  const std::uint32_t f = GetU32(bytes, 8);
  const std::uint32_t v = GetU32(bytes, 12);
  const std::uint64_t count = static_cast<std::uint64_t>(f) * v + v;
  if (f < 1 || v < 2 || bytes.size() != 16 + 4 * count) {
    throw FormatError("TACM payload size does not match header");
  }
  ToyAcousticModel m(static_cast<int>(f), static_cast<int>(v));
  for (std::uint64_t i = 0; i < count; ++i) {
    m.params_[i] = std::bit_cast<float>(GetU32(bytes, 16 + 4 * i));
  }
  return m;
}

AdamW::AdamW(std::size_t param_count, AdamWConfig config)
    : config_(config), m_(param_count, 0.0), v_(param_count, 0.0) {
  if (!(config.lr >= 0.0) || !(config.weight_decay >= 0.0)) {
    throw ArgumentError("AdamW needs lr >= 0 and weight_decay >= 0");
  }
}

void AdamW::Step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ArgumentError("AdamW parameter/gradient size mismatch");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw ArgumentError("non-finite gradient at index " + std::to_string(i));
    }
  }
  ++step_count_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= config_.lr * (m_hat / (std::sqrt(v_hat) + config_.epsilon) +
                               config_.weight_decay * params[i]);
  }
}

PhasePlan PhasePlan::TwoPhase(int phase1_epochs, int phase2_epochs) {
  return {{{phase1_epochs, 5e-4, 2.5e-6}, {phase2_epochs, 5e-6, 2.5e-9}}};
}

double MeanCtcLoss(const ToyAcousticModel &model, std::span<const Utterance> data,
                   int blank_id, int workers) {
  std::vector<double> losses(data.size());
  ParallelFor(data.size(), workers, [&](std::size_t i) {
    losses[i] = CtcLoss(model.Forward(data[i].features), data[i].labels, blank_id).loss;
  });
  double sum = 0.0;
  std::size_t n = 0;
  for (double l : losses) {
    if (std::isfinite(l)) {
      sum += l;
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

double MeanCtcLossAndGrad(const ToyAcousticModel &model, std::span<const Utterance> data,
                          int blank_id, std::span<double> grad, int workers) {
  std::fill(grad.begin(), grad.end(), 0.0);
  struct Slot {
    double loss = 0.0;
    bool feasible = false;
    std::vector<double> grad;
  };
  std::vector<Slot> slots(data.size());
  ParallelFor(data.size(), workers, [&](std::size_t i) {
    const auto &u = data[i];
    const LogitMatrix logits = model.Forward(u.features);
    if (MinFramesRequired(u.labels) > logits.frames()) return;
    auto lg = CtcLossWithGrad(logits, u.labels, blank_id);
    slots[i].loss = lg.loss;
    slots[i].feasible = true;
    slots[i].grad.assign(grad.size(), 0.0);
    model.AccumulateGrad(u.features, lg.grad, slots[i].grad);
  });
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto &s : slots) {
    if (!s.feasible) continue;
    sum += s.loss;
    ++n;
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += s.grad[j];
  }
  if (n == 0) return 0.0;
  const double inv = 1.0 / static_cast<double>(n);
  for (double &g : grad) g *= inv;
  return sum * inv;
}

double GreedyWer(const ToyAcousticModel &model, std::span<const Utterance> data,
                 int blank_id, int word_delim_id) {
  std::size_t edits = 0, ref_words = 0;
  for (const auto &u : data) {
    const auto hyp = GreedyDecode(model.Forward(u.features), blank_id);
    const auto ref_w = SplitWords(u.labels, word_delim_id);
    const auto hyp_w = SplitWords(hyp, word_delim_id);
    edits += EditDistance<std::vector<int>>(ref_w, hyp_w);
    ref_words += ref_w.size();
  }
  if (ref_words == 0) return std::nan("");
  return static_cast<double>(edits) / static_cast<double>(ref_words);
}

TrainResult Train(ToyAcousticModel model, const std::vector<Utterance> &dataset,
                  const PhasePlan &plan, const TrainOptions &options) {
  if (dataset.empty()) throw ArgumentError("training dataset is empty");
  if (plan.phases.empty()) throw ArgumentError("phase plan has no phases");
  for (const auto &p : plan.phases) {
    if (p.epochs < 1) throw ArgumentError("every phase needs at least one epoch");
  }
  if (options.batch_size < 1) throw ArgumentError("batch_size must be at least 1");
  for (const auto &u : dataset) {
    if (MinFramesRequired(u.labels) > u.features.frames) {
      throw ArgumentError("dataset contains a CTC-infeasible utterance");
    }
  }

  std::vector<Utterance> train, held_out;
  Split(dataset, options.seed, options.train_fraction, train, held_out);

  AdamW opt(model.params().size(), {plan.phases[0].lr, plan.phases[0].weight_decay});
  std::vector<double> grad(model.params().size());
  TrainResult result{model, {}, MeanCtcLoss(model, train, options.blank_id, options.workers)};
  std::uint64_t global_epoch = 0;
  bool stop = false;

  for (std::size_t p = 0; p < plan.phases.size() && !stop; ++p) {
    const Phase &phase = plan.phases[p];
    if (p > 0 && options.resplit_between_phases) {
      std::vector<Utterance> pool = train;
      pool.insert(pool.end(), held_out.begin(), held_out.end());
      Split(pool, MixSeed(options.seed, 0x5eed0000 + p), options.train_fraction, train, held_out);
    }
    opt.set_lr(phase.lr);
    opt.set_weight_decay(phase.weight_decay);

    for (int epoch = 1; epoch <= phase.epochs && !stop; ++epoch) {
      const auto order = SeededPermutation(train.size(), MixSeed(options.seed, global_epoch++));
      for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
        std::vector<Utterance> batch;
        for (std::size_t i = start; i < std::min(order.size(), start + options.batch_size); ++i) {
          batch.push_back(train[order[i]]);
        }
        MeanCtcLossAndGrad(model, batch, options.blank_id, grad, options.workers);
        opt.Step(model.params(), grad);
        if (options.max_steps > 0 && opt.step_count() >= options.max_steps) {
          stop = true;
          break;
        }
      }
      EpochLog entry;
      entry.phase = static_cast<int>(p) + 1;
      entry.epoch = epoch;
      entry.steps = opt.step_count();
      entry.lr = phase.lr;
      entry.weight_decay = phase.weight_decay;
      entry.train_loss = MeanCtcLoss(model, train, options.blank_id, options.workers);
      entry.eval_wer = GreedyWer(model, held_out, options.blank_id, options.word_delim_id);
      result.log.push_back(entry);
    }
  }
  result.model = std::move(model);
  return result;
}

std::string SerializeTrainLog(const std::vector<EpochLog> &log) {
  std::string out = "phase\tepoch\ttrain_loss\teval_wer\tlr\tweight_decay\n";
  char buf[160];
  for (const auto &e : log) {
    std::snprintf(buf, sizeof(buf), "%d\t%d\t%.6f\t%.6f\t%.3g\t%.3g\n", e.phase, e.epoch,
                  e.train_loss, e.eval_wer, e.lr, e.weight_decay);
    out += buf;
  }
  return out;
}

std::vector<Utterance> MakeSeparableDataset(const SyntheticSpec &spec) {
  if (spec.vocab_size < 3) throw ArgumentError("synthetic vocabulary needs V >= 3");
  if (spec.frames < 3) throw ArgumentError("synthetic utterances need T >= 3");
  Rng rng(spec.seed);
  const int blank = 0, delim = 1;
  const int max_labels = (spec.frames - 1) / 2;
  std::vector<Utterance> out;
  out.reserve(static_cast<std::size_t>(spec.utterances));
  for (int n = 0; n < spec.utterances; ++n) {
    LabelSequence labels;
    const int target = rng.Uniform(std::min(3, max_labels), std::min(8, max_labels));
    while (static_cast<int>(labels.size()) < target) {
      if (!labels.empty()) {
        if (static_cast<int>(labels.size()) + 2 > target) break;
        labels.push_back(delim);
      }
      const int word_len = rng.Uniform(1, 2);
      for (int i = 0; i < word_len && static_cast<int>(labels.size()) < target; ++i) {
        labels.push_back(rng.Uniform(2, spec.vocab_size - 1));
      }
    }
    // Blank-separated alignment, then runs stretched until T frames.
    std::vector<int> path{blank};
    for (int id : labels) {
      path.push_back(id);
      path.push_back(blank);
    }
    while (static_cast<int>(path.size()) < spec.frames) {
      const int at = rng.Uniform(0, static_cast<int>(path.size()) - 1);
      path.insert(path.begin() + at, path[at]);
    }
    FrameFeatures feats{spec.frames, spec.vocab_size,
                        std::vector<double>(static_cast<std::size_t>(spec.frames) * spec.vocab_size)};
    for (int t = 0; t < spec.frames; ++t) {
      for (int f = 0; f < spec.vocab_size; ++f) {
        feats.values[static_cast<std::size_t>(t) * spec.vocab_size + f] =
            (f == path[t] ? spec.feature_scale : 0.0) + spec.noise * rng.Normal();
      }
    }
    out.push_back({std::move(feats), Collapse(path, blank)});
  }
  return out;
}

}  // namespace bnasr
