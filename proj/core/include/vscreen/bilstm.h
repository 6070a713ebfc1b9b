/*
 * Copyright 2026 The vscreen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Stacked bidirectional LSTM over per-sentence feature vectors with a PReLU
// feed-forward head, trained by backpropagation through time.
//
// A sequence is an F x T matrix whose columns are sentences. Batches are
// packed without padding: users are ordered by length, so the users still
// running at any step form a prefix of the batch.

#ifndef VSCREEN_BILSTM_H_
#define VSCREEN_BILSTM_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vscreen/artifact.h"
#include "vscreen/common.h"

namespace vscreen::seq {

struct BiLstmConfig {
  int input_dim = 0;
  int hidden = 256;  // per direction
  int layers = 3;
  int head_width = 512;
  int head_layers = 3;
  double dropout = 0.2;  // after every recurrent layer's output
  int max_sentences = 200;

  void Validate() const;
};

struct OneCycleConfig {
  double max_lr = 0.01;
  double warmup_fraction = 0.3;
  double initial_div = 25.0;
  double final_div = 1e4;
};

// Linear rise from max_lr / initial_div to max_lr over the warmup fraction,
// then linear decay to (max_lr / initial_div) / final_div at total_steps.
double OneCycleLr(int64_t step, int64_t total_steps, const OneCycleConfig& cfg);

struct BiLstmTrainConfig {
  int epochs = 60;
  int batch_size = 32;
  int patience = 5;
  OneCycleConfig schedule;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
  uint64_t seed = 0;
};

struct Param {
  std::string name;
  Matrix value;
};

class BiLstmNet {
 public:
  BiLstmNet() = default;
  // Random initialization: recurrent tensors uniform in +-1/sqrt(hidden) with
  // the forget-gate bias shifted by +1, head layers uniform in
  // +-1/sqrt(fan_in), PReLU slopes 0.25.
  BiLstmNet(const BiLstmConfig& config, uint64_t seed);

  const BiLstmConfig& config() const { return config_; }
  std::vector<Param>& params() { return params_; }
  const std::vector<Param>& params() const { return params_; }
  std::size_t parameter_count() const;

  // Logits with dropout off. Sequences longer than max_sentences are cut.
  Vector Logits(const std::vector<const Matrix*>& batch) const;
  Vector PredictProba(const std::vector<const Matrix*>& batch) const;

  // Mean binary cross-entropy over the batch. With `dropout_rng` set, dropout
  // masks are drawn from it; otherwise dropout is off. `grads`, when given,
  // receives one tensor per parameter (overwritten).
  double LossAndGradient(const std::vector<const Matrix*>& batch,
                         const std::vector<int>& labels, Rng* dropout_rng,
                         std::vector<Matrix>* grads) const;

  void Serialize(ArtifactWriter& w) const;
  static BiLstmNet Deserialize(ArtifactReader& r);

 private:
  BiLstmConfig config_;
  std::vector<Param> params_;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0;
  double val_loss = 0;
  double lr = 0;
};

struct BiLstmTrainResult {
  BiLstmNet net;  // parameters of the epoch with the lowest validation loss
  std::vector<EpochLog> log;
  int best_epoch = 0;
  double best_val_loss = 0;
};

// Minibatch AdamW (decoupled weight decay) under the OneCycle schedule with
// early stopping on validation loss. Throws on a non-finite loss.
BiLstmTrainResult TrainBiLstm(const std::vector<Matrix>& train,
                              const std::vector<int>& train_labels,
                              const std::vector<Matrix>& val,
                              const std::vector<int>& val_labels,
                              const BiLstmConfig& model_config,
                              const BiLstmTrainConfig& train_config);

// Mean BCE over a labeled set with dropout off.
double EvaluateLoss(const BiLstmNet& net, const std::vector<Matrix>& seqs,
                    const std::vector<int>& labels);

// Probabilities for many sequences in input order, in fixed-size chunks.
Vector PredictSequences(const BiLstmNet& net, const std::vector<Matrix>& seqs);

// Training log as a tab-separated table with a header row.
std::string FormatTrainingLog(const std::vector<EpochLog>& log);

}  // namespace vscreen::seq

#endif  // VSCREEN_BILSTM_H_
