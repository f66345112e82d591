// include/xivec/trainer.h

// Copyright 2026  Xivec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef XIVEC_TRAINER_H_
#define XIVEC_TRAINER_H_

#include <string>
#include <vector>

#include "xivec/data_io.h"
#include "xivec/model.h"

namespace xivec {

// Minibatch SGD over speaker-labeled segments. Per example, the loss is the
// cross-entropy of the decoder logits; gradients are averaged over the batch
// and a single plain SGD step updates every parameter, prior included.
struct TrainConfig {
  int batch_size = 16;
  double lr = 0.05;
  int max_epochs = 30;
  // Stop when the relative epoch-loss improvement falls below this;
  // 0 or negative runs all epochs.
  double stop_tol = 1e-4;
  int segment_frames = 40;  // training crops are exactly this long
  uint64_t seed = 1;

  void validate() const;
  static TrainConfig from_config(const KeyValueConfig &kv);
};

struct EpochStats {
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> history;
};

// Crop (uniform random start) or cyclically tile a [T,F] sequence to exactly
// `frames` rows.
Tensor fit_length(const Tensor &feats, int frames, Rng *rng);

struct BatchExample {
  const Tensor *feats;
  int label;
};

// One optimization step: forward/backward each example, average gradients,
// apply one SGD update. Returns the mean loss over the batch; correct_out,
// when non-null, receives the count of argmax hits.
double train_minibatch(ModelParams *params,
                       const std::vector<BatchExample> &batch, double lr,
                       int *correct_out = nullptr);

TrainResult train(ModelParams *params, const Corpus &corpus,
                  const TrainConfig &cfg);

// Classification accuracy over full-length segments with frozen parameters.
double evaluate_accuracy(ModelParams *params, const Corpus &corpus);

// CSV with one "epoch,loss,accuracy" row per epoch.
void write_loss_history(const TrainResult &result, const std::string &path);

}  // namespace xivec

#endif  // XIVEC_TRAINER_H_
