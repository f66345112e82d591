// include/xivec/model.h

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

#ifndef XIVEC_MODEL_H_
#define XIVEC_MODEL_H_

#include <functional>
#include <string>
#include <vector>

#include "xivec/decoder.h"
#include "xivec/encoder.h"
#include "xivec/pooling.h"

namespace xivec {

// A complete speaker-embedding system: frame encoder, temporal pooling
// (Gaussian posterior or plain statistics), and classifier decoder.
struct ModelConfig {
  EncoderConfig encoder;
  bool gaussian_pool = true;  // false: mean/std statistical pooling
  PoolingMode pool;           // prior/isotropic flags and the std branch
  DecoderConfig decoder;

  void validate() const;
  // D, or 2D when the pooled vector carries a std branch.
  int decoder_input_dim() const;
  std::string system_name() const;

  // Builds the config for one of the named systems at desk scale:
  //   xvector-mu, xvector-mu-sigma,
  //   xivector-phi, xivector-phi-sigma,
  //   xivector-noprior-phi, xivector-noprior-phi-sigma,
  //   xivector-isotropic-phi, xivector-isotropic-phi-sigma,
  //   xivector-noprior-isotropic-phi
  static ModelConfig make_system(const std::string &system, int feat_dim,
                                 int num_classes);
};

struct ModelParams {
  ModelConfig cfg;
  EncoderParams encoder;
  PriorParams prior;
  DecoderParams decoder;

  static ModelParams init(const ModelConfig &cfg, uint64_t seed);
  // Stable named traversal of every trainable tensor; the prior participates
  // only for Gaussian-pool systems.
  void visit(const std::function<void(const std::string &, Tensor *)> &fn);
  std::vector<Tensor *> tensors();
  void zero_grads();
  int64_t num_parameters();
};

struct ForwardIds {
  Tape::Id pooled = -1;
  Tape::Id embedding = -1;
  Tape::Id logits = -1;
  Tape::Id loss = -1;
  PoolIds pool;  // populated on the Gaussian path
};

// Whole-pipeline forward on one sequence; label < 0 skips the loss node.
ForwardIds model_forward(Tape &tape, const Tensor &feats, ModelParams &params,
                         int label);

// Pre-activation bottleneck output of the decoder, eager.
Tensor extract_embedding(const Tensor &feats, ModelParams *params);

}  // namespace xivec

#endif  // XIVEC_MODEL_H_
