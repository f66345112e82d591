// include/xivec/decoder.h

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

#ifndef XIVEC_DECODER_H_
#define XIVEC_DECODER_H_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "xivec/tensor.h"

namespace xivec {

// Utterance classifier head. The first affine layer is the bottleneck whose
// pre-activation output is the speaker embedding.
struct DecoderConfig {
  int input_dim = 64;       // pooled feature width (D, or 2D with a std branch)
  int embed_dim = 32;       // E
  std::vector<int> hidden;  // optional extra relu layers after the bottleneck
  int num_classes = 10;     // C

  void validate() const;
};

struct DecoderParams {
  DecoderConfig cfg;
  Tensor w_embed, b_embed;
  std::vector<std::pair<Tensor, Tensor>> hidden;
  Tensor w_out, b_out;

  static DecoderParams init(const DecoderConfig &cfg, Rng *rng);
  void visit(const std::function<void(const std::string &, Tensor *)> &fn);
};

// Logits [C] for a pooled vector [input_dim]. embedding_out, when non-null,
// receives the pre-activation bottleneck output [E].
Tape::Id decoder_forward(Tape &tape, Tape::Id pooled, DecoderParams &params,
                         Tape::Id *embedding_out = nullptr);

}  // namespace xivec

#endif  // XIVEC_DECODER_H_
