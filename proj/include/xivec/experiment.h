// include/xivec/experiment.h

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

#ifndef XIVEC_EXPERIMENT_H_
#define XIVEC_EXPERIMENT_H_

#include <string>
#include <vector>

#include "xivec/data_io.h"
#include "xivec/trainer.h"

namespace xivec {

// One self-contained comparison run: synthesize a train and an eval corpus,
// train each listed system on the same data, score the same trial list, and
// report EER/MinDCF per system.
struct ExperimentConfig {
  std::vector<std::string> systems;
  uint64_t seed = 1;
  SynthConfig train_synth;
  SynthConfig eval_synth;
  TrainConfig train_cfg;
  double trial_nontarget_ratio = 3.0;
  double p_target = 0.01;
  // Optional model topology overrides; empty/negative keeps the defaults.
  std::vector<TdnnLayerSpec> model_layers;
  int model_aux_hidden = -1;
  int model_embed_dim = -1;
  std::vector<int> model_decoder_hidden;
  // Optional: checkpoints are reused from (and saved to) this directory.
  std::string model_cache_dir;

  void validate() const;
  static ExperimentConfig from_file(const std::string &path);
  static ExperimentConfig from_config(const KeyValueConfig &kv);
};

struct SystemResult {
  std::string system;
  double eer = 0.0;
  double min_dcf = 0.0;
  uint64_t seed = 0;
};

std::vector<SystemResult> run_experiment(const ExperimentConfig &cfg);

// CSV rows "mode,eer,min_dcf,seed" under a header line.
void write_experiment_csv(const std::vector<SystemResult> &results,
                          const std::string &path);

}  // namespace xivec

#endif  // XIVEC_EXPERIMENT_H_
