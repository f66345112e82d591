// include/xivec/data_io.h

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

#ifndef XIVEC_DATA_IO_H_
#define XIVEC_DATA_IO_H_

#include <string>
#include <vector>

#include "xivec/config.h"
#include "xivec/model.h"
#include "xivec/tensor.h"

namespace xivec {

// One labeled feature sequence, with the generator's ground truth attached
// when it came from the synthesizer.
struct Segment {
  std::string id;
  int speaker = -1;        // dense label in [0, num_speakers)
  Tensor feats;            // [T, F]
  Tensor true_latent;      // [D_true] latent h shared by the speaker; may be empty
  Tensor true_log_prec;    // [T, D_true] frame noise log-precisions; may be empty
};

struct Corpus {
  int num_speakers = 0;
  std::vector<Segment> segments;
};

enum class ObsMap { kIdentity, kLinear, kLinearTanh };

// Generative recipe: per speaker draw a latent from the Gaussian prior, per
// frame add noise with a per-frame diagonal precision, then map the latent
// observation through the observation map. Log-precisions are drawn uniform
// over a range; in burst mode a contiguous window of frames (and a random
// subset of dimensions) switches to a much noisier range, which is what the
// uncertainty head is supposed to discover.
struct SynthConfig {
  int num_speakers = 10;
  int segments_per_speaker = 5;
  int frames = 40;
  int latent_dim = 8;
  int obs_dim = 8;
  double prior_mean = 0.0;
  double prior_log_prec = 0.0;
  double noise_log_prec_min = 1.0;
  double noise_log_prec_max = 3.0;
  bool noise_burst = false;
  double burst_prob = 0.7;
  // Burst length as a fraction of T, drawn uniform in [min, max] per segment;
  // leaving min negative pins it to burst_fraction.
  double burst_fraction = 0.3;
  double burst_fraction_min = -1.0;
  double burst_dim_fraction = 0.5;
  double burst_log_prec_min = -4.0;
  double burst_log_prec_max = -2.0;
  ObsMap obs_map = ObsMap::kLinearTanh;
  uint64_t seed = 1;
  // Trial-list generation for gen-data: all within-speaker pairs are targets,
  // nontargets are sampled at this ratio.
  bool make_trials = false;
  double trial_nontarget_ratio = 3.0;

  void validate() const;
  static SynthConfig from_config(const KeyValueConfig &kv);
};

Corpus gen_synthetic_corpus(const SynthConfig &cfg);

// --- feature files: magic "XVF1", u32 F, u64 T, T*F float32, little-endian
void write_features(const Tensor &feats, const std::string &path);
Tensor read_features(const std::string &path);

// --- trial lists: text lines "enrollID testID target|nontarget"
struct TrialRecord {
  std::string enroll_id;
  std::string test_id;
  bool target = false;
  double score = 0.0;
  bool scored = false;
};

std::vector<TrialRecord> load_trials(const std::string &path);
void write_trials(const std::vector<TrialRecord> &trials,
                  const std::string &path);

// --- score files: text lines "enrollID testID score" (6 decimals)
void write_scores(const std::vector<TrialRecord> &trials,
                  const std::string &path);
// Attaches scores from a score file onto a trial list, joining on the id
// pair; every trial must receive exactly one score.
void attach_scores(std::vector<TrialRecord> *trials, const std::string &path);

// --- model checkpoints: magic "XVM1", config text block, tagged float64
// sections; round trips are bit-exact.
void save_model(ModelParams &params, const std::string &path);
ModelParams load_model(const std::string &path);

// --- corpus directories: feats/<segment>.xvf plus labels.tsv; trials.txt
// appears when the synth config asked for it.
void write_corpus_dir(const Corpus &corpus, const std::string &dir);
Corpus read_corpus_dir(const std::string &dir);

std::vector<TrialRecord> make_trials(const Corpus &corpus,
                                     double nontarget_ratio, uint64_t seed);

}  // namespace xivec

#endif  // XIVEC_DATA_IO_H_
