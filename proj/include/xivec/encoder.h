// include/xivec/encoder.h

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

#ifndef XIVEC_ENCODER_H_
#define XIVEC_ENCODER_H_

#include <functional>
#include <string>
#include <vector>

#include "xivec/tensor.h"

namespace xivec {

struct TdnnLayerSpec {
  int out_dim;
  int kernel;    // context width; the layer sees (kernel-1)*dilation extra frames
  int dilation;
};

// Frame encoder: a stack of dilated 1-D convolutions with ReLU, a point
// estimate head (identity on the last layer output), and an auxiliary
// two-layer head that predicts per-frame diagonal log-precisions.
struct EncoderConfig {
  int input_dim = 20;
  std::vector<TdnnLayerSpec> layers = {{48, 5, 1}, {48, 3, 2}, {64, 1, 1}};
  int aux_hidden = 16;
  bool has_aux = true;    // the plain x-vector trunk does not need the head
  bool isotropic = false; // aux head emits one shared log-precision per frame
  int aux_tap = -1;       // index of the layer feeding the aux head; -1 = last

  int pooled_dim() const { return layers.back().out_dim; }
  int tap_index() const {
    return aux_tap < 0 ? static_cast<int>(layers.size()) - 1 : aux_tap;
  }
  int tap_dim() const { return layers[static_cast<size_t>(tap_index())].out_dim; }
  void validate() const;

  // Desk-scale topology used by the tests and default configs.
  static EncoderConfig desk_default(int feat_dim = 20);
  // TDNN-5 topology with a 1500-dim pooling layer and a 256-unit aux head.
  static EncoderConfig tdnn5_standard(int feat_dim = 40);
};

// "out:kernel:dilation" comma lists used by configs and checkpoints.
std::vector<TdnnLayerSpec> parse_layer_specs(
    const std::vector<std::string> &items);
std::string format_layer_specs(const std::vector<TdnnLayerSpec> &layers);

struct EncoderOutput {
  Tensor z;         // [T,D] point estimates
  Tensor log_prec;  // [T,D] diagonal log-precisions; empty without the aux head
};

struct EncoderParams {
  struct Layer {
    Tensor kernel;  // [K, in, out]
    Tensor bias;    // [out]
  };
  EncoderConfig cfg;
  std::vector<Layer> layers;
  Tensor aux_w1, aux_b1, aux_w2, aux_b2;

  static EncoderParams init(const EncoderConfig &cfg, Rng *rng);
  // Enumerates every parameter tensor with a stable name; the traversal
  // order is the checkpoint section order.
  void visit(const std::function<void(const std::string &, Tensor *)> &fn);
};

struct EncoderIds {
  Tape::Id z = -1;
  Tape::Id log_prec = -1;
};

// Frame trunk only: conv + ReLU stack, returns the last layer output [T,D].
// tap_out, when non-null, receives the id of the aux tap layer output.
Tape::Id tdnn_forward(Tape &tape, Tape::Id x, EncoderParams &params,
                      Tape::Id *tap_out = nullptr);

// Aux head on top of tapped frame features: 2*log(softplus(fc2(relu(fc1 .))))
// broadcast from one column to D under the isotropic flag.
Tape::Id aux_head_forward(Tape &tape, Tape::Id frame_feats,
                          EncoderParams &params);

// Both heads. log_prec is -1 when the config has no aux head.
EncoderIds encoder_forward(Tape &tape, Tape::Id x, EncoderParams &params);

// Eager convenience wrapper; gradients are not retained.
EncoderOutput encode(const Tensor &x, EncoderParams *params);

}  // namespace xivec

#endif  // XIVEC_ENCODER_H_
