// src/trainer.cc

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

#include "xivec/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "xivec/logging.h"

namespace xivec {

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (lr <= 0.0) throw ConfigError("train: lr must be positive");
  if (max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
  if (segment_frames < 1)
    throw ConfigError("train: segment_frames must be >= 1");
}

TrainConfig TrainConfig::from_config(const KeyValueConfig &kv) {
  TrainConfig cfg;
  cfg.batch_size = kv.get_int("batch", cfg.batch_size);
  cfg.lr = kv.get_double("lr", cfg.lr);
  cfg.max_epochs = kv.get_int("epochs", cfg.max_epochs);
  cfg.stop_tol = kv.get_double("stop_tol", cfg.stop_tol);
  cfg.segment_frames = kv.get_int("segment_frames", cfg.segment_frames);
  cfg.seed = kv.get_u64("seed", cfg.seed);
  cfg.validate();
  return cfg;
}

Tensor fit_length(const Tensor &feats, int frames, Rng *rng) {
  if (feats.ndim() != 2) throw DimensionError("fit_length: expected [T,F]");
  const int t_len = feats.rows(), f = feats.cols();
  if (t_len == frames) return feats;
  Tensor out = Tensor::zeros({frames, f});
  if (t_len > frames) {
    const int start = rng->uniform_int(t_len - frames + 1);
    std::copy(feats.data.begin() + static_cast<int64_t>(start) * f,
              feats.data.begin() + static_cast<int64_t>(start + frames) * f,
              out.data.begin());
  } else {
    for (int t = 0; t < frames; ++t) {
      const int src = t % t_len;
      std::copy(feats.data.begin() + static_cast<int64_t>(src) * f,
                feats.data.begin() + static_cast<int64_t>(src + 1) * f,
                out.data.begin() + static_cast<int64_t>(t) * f);
    }
  }
  return out;
}

double train_minibatch(ModelParams *params,
                       const std::vector<BatchExample> &batch, double lr,
                       int *correct_out) {
  if (batch.empty()) throw EmptyInputError("train_minibatch: empty batch");
  const int num_classes = params->cfg.decoder.num_classes;
  for (const auto &ex : batch)
    if (ex.label < 0 || ex.label >= num_classes)
      throw ConfigError("train_minibatch: label out of range");

  params->zero_grads();
  const double inv_m = 1.0 / static_cast<double>(batch.size());
  double loss_sum = 0.0;
  int correct = 0;
  for (size_t i = 0; i < batch.size(); ++i) {
    Tape tape;
    ForwardIds ids;
    try {
      ids = model_forward(tape, *batch[i].feats, *params, batch[i].label);
      tape.backward(ids.loss, inv_m);
    } catch (const NumericError &e) {
      throw NumericError("train_minibatch: example " + std::to_string(i) +
                         ": " + e.what());
    }
    const double loss = tape.val(ids.loss).at(0);
    if (!std::isfinite(loss))
      throw NumericError("train_minibatch: non-finite loss at example " +
                         std::to_string(i));
    loss_sum += loss;
    const Tensor &logits = tape.val(ids.logits);
    int best = 0;
    for (int c = 1; c < num_classes; ++c)
      if (logits.at(c) > logits.at(best)) best = c;
    if (best == batch[i].label) ++correct;
  }
  sgd_step(params->tensors(), lr);
  if (correct_out != nullptr) *correct_out = correct;
  return loss_sum * inv_m;
}

TrainResult train(ModelParams *params, const Corpus &corpus,
                  const TrainConfig &cfg) {
  cfg.validate();
  if (corpus.num_speakers < 2)
    throw ConfigError("train: corpus must contain at least two speakers");
  if (corpus.segments.empty()) throw ConfigError("train: empty corpus");
  if (corpus.num_speakers > params->cfg.decoder.num_classes)
    throw ConfigError("train: more speakers than decoder classes");

  Rng rng(cfg.seed);
  std::vector<int> order(corpus.segments.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  double prev_loss = 0.0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(&order);
    double loss_sum = 0.0;
    int correct = 0, seen = 0;
    for (size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const size_t end =
          std::min(order.size(), begin + static_cast<size_t>(cfg.batch_size));
      std::vector<Tensor> crops;
      crops.reserve(end - begin);
      std::vector<BatchExample> batch;
      for (size_t k = begin; k < end; ++k) {
        const Segment &seg = corpus.segments[static_cast<size_t>(order[k])];
        crops.push_back(fit_length(seg.feats, cfg.segment_frames, &rng));
        batch.push_back({&crops.back(), seg.speaker});
      }
      int batch_correct = 0;
      const double batch_loss =
          train_minibatch(params, batch, cfg.lr, &batch_correct);
      loss_sum += batch_loss * static_cast<double>(batch.size());
      correct += batch_correct;
      seen += static_cast<int>(batch.size());
    }
    EpochStats stats;
    stats.loss = loss_sum / seen;
    stats.accuracy = static_cast<double>(correct) / seen;
    result.history.push_back(stats);
    if (static_cast<int>(log::threshold()) >=
        static_cast<int>(log::Level::kDebug)) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "epoch %d: loss %.6f, accuracy %.4f",
                    epoch, stats.loss, stats.accuracy);
      log::debug(buf);
    }

    if (epoch > 0 && cfg.stop_tol > 0.0) {
      const double improvement =
          (prev_loss - stats.loss) / std::max(std::fabs(prev_loss), 1e-12);
      if (improvement < cfg.stop_tol) break;
    }
    prev_loss = stats.loss;
  }
  return result;
}

double evaluate_accuracy(ModelParams *params, const Corpus &corpus) {
  if (corpus.segments.empty())
    throw EmptyInputError("evaluate_accuracy: empty corpus");
  int correct = 0;
  const int num_classes = params->cfg.decoder.num_classes;
  for (const auto &seg : corpus.segments) {
    Tape tape;
    ForwardIds ids = model_forward(tape, seg.feats, *params, -1);
    const Tensor &logits = tape.val(ids.logits);
    int best = 0;
    for (int c = 1; c < num_classes; ++c)
      if (logits.at(c) > logits.at(best)) best = c;
    if (best == seg.speaker) ++correct;
  }
  return static_cast<double>(correct) / corpus.segments.size();
}

void write_loss_history(const TrainResult &result, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "epoch,loss,accuracy\n";
  char buf[64];
  for (size_t e = 0; e < result.history.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9f,%.6f", e,
                  result.history[e].loss, result.history[e].accuracy);
    out << buf << '\n';
  }
  if (!out) throw FormatError("write failed for '" + path + "'");
}

}  // namespace xivec
