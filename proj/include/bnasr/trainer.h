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

#ifndef BNASR_TRAINER_H_
#define BNASR_TRAINER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnasr/ctc.h"

namespace bnasr {

// T x F frame features, row-major.
struct FrameFeatures {
  int frames = 0;
  int dims = 0;
  std::vector<double> values;

  double operator()(int t, int f) const {
    return values[static_cast<std::size_t>(t) * dims + f];
  }
};

// Per-frame affine map from features to vocabulary logits. Parameters are
// stored flat: W (F x V, row-major) followed by b (V).
class ToyAcousticModel {
 public:
  ToyAcousticModel(int feature_dims, int vocab_size);

  int feature_dims() const { return feature_dims_; }
  int vocab_size() const { return vocab_size_; }

  double weight(int f, int k) const { return params_[static_cast<std::size_t>(f) * vocab_size_ + k]; }
  double &weight(int f, int k) { return params_[static_cast<std::size_t>(f) * vocab_size_ + k]; }
  double bias(int k) const { return params_[weight_count() + k]; }
  double &bias(int k) { return params_[weight_count() + k]; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t weight_count() const {
    return static_cast<std::size_t>(feature_dims_) * vocab_size_;
  }

  // row t = frames[t] * W + b. Throws ArgumentError on a dimension mismatch.
  LogitMatrix Forward(const FrameFeatures &frames) const;

  // Accumulates d loss / d params for one utterance given d loss / d logits.
  void AccumulateGrad(const FrameFeatures &frames, const LogitMatrix &logit_grad,
                      std::span<double> grad) const;

  // "TACM", u32 version = 1, u32 F, u32 V, float32 W row-major, float32 b.
  std::string Serialize() const;
  static ToyAcousticModel Parse(std::string_view bytes);

 private:
  int feature_dims_;
  int vocab_size_;
  std::vector<double> params_;
};

struct AdamWConfig {
  double lr = 5e-4;
  double weight_decay = 2.5e-6;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with decoupled weight decay:
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
//   p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + wd * p)
class AdamW {
 public:
  AdamW(std::size_t param_count, AdamWConfig config);

  // Throws ArgumentError on a size mismatch or a non-finite gradient; the
  // state is left untouched in that case.
  void Step(std::span<double> params, std::span<const double> grads);

  void set_lr(double lr) { config_.lr = lr; }
  void set_weight_decay(double wd) { config_.weight_decay = wd; }
  const AdamWConfig &config() const { return config_; }
  std::int64_t step_count() const { return step_count_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }

 private:
  AdamWConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t step_count_ = 0;
};

struct Utterance {
  FrameFeatures features;
  LabelSequence labels;
};

struct Phase {
  int epochs = 1;
  double lr = 5e-4;
  double weight_decay = 2.5e-6;
};

struct PhasePlan {
  std::vector<Phase> phases;

  // Phase 1: lr 5e-4, wd 2.5e-6. Phase 2: lr 5e-6, wd 2.5e-9.
  static PhasePlan TwoPhase(int phase1_epochs, int phase2_epochs);
};

struct TrainOptions {
  int batch_size = 4;
  std::uint64_t seed = 0;
  int workers = 1;
  double train_fraction = 0.85;
  // Before every phase after the first, pool train and held-out utterances
  // and draw a fresh split.
  bool resplit_between_phases = true;
  // Stop after this many optimizer steps (0 = run the full plan).
  std::int64_t max_steps = 0;
  int blank_id = 0;
  int word_delim_id = 1;
};

struct EpochLog {
  int phase = 0;  // 1-based
  int epoch = 0;  // 1-based within the phase
  std::int64_t steps = 0;  // optimizer steps taken so far
  double lr = 0.0;
  double weight_decay = 0.0;
  double train_loss = 0.0;  // mean CTC loss over the training split
  double eval_wer = 0.0;    // greedy-decode WER on the held-out split
};

struct TrainResult {
  ToyAcousticModel model;
  std::vector<EpochLog> log;
  double initial_train_loss = 0.0;
};

// Mean CTC loss of the model over `data`, skipping infeasible utterances.
double MeanCtcLoss(const ToyAcousticModel &model, std::span<const Utterance> data,
                   int blank_id, int workers = 1);

// Mean loss and its gradient w.r.t. the flat parameters. Per-utterance
// terms are reduced in input order.
double MeanCtcLossAndGrad(const ToyAcousticModel &model, std::span<const Utterance> data,
                          int blank_id, std::span<double> grad, int workers = 1);

// Micro-averaged WER of greedy decoding, words split on word_delim_id.
double GreedyWer(const ToyAcousticModel &model, std::span<const Utterance> data,
                 int blank_id, int word_delim_id);

TrainResult Train(ToyAcousticModel model, const std::vector<Utterance> &dataset,
                  const PhasePlan &plan, const TrainOptions &options);

// "phase epoch train_loss eval_wer lr weight_decay" TSV.
std::string SerializeTrainLog(const std::vector<EpochLog> &log);

struct SyntheticSpec {
  int utterances = 10;
  int vocab_size = 5;  // blank, delimiter, and vocab_size - 2 characters
  int frames = 20;
  double feature_scale = 16.0;
  double noise = 0.1;
  std::uint64_t seed = 0;
};

// Linearly separable toy task: each frame's features are a scaled one-hot of
// its aligned symbol plus Gaussian noise. Labels are the collapsed alignment
// and contain words separated by the delimiter.
std::vector<Utterance> MakeSeparableDataset(const SyntheticSpec &spec);

}  // namespace bnasr

#endif  // BNASR_TRAINER_H_
