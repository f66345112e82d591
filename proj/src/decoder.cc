// src/decoder.cc

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

#include "xivec/decoder.h"

#include <cmath>

namespace xivec {

void DecoderConfig::validate() const {
  if (input_dim < 1 || embed_dim < 1)
    throw ConfigError("decoder: dims must be positive");
  if (num_classes < 2)
    throw ConfigError("decoder: need at least two classes");
  for (int h : hidden)
    if (h < 1) throw ConfigError("decoder: hidden dims must be positive");
}

DecoderParams DecoderParams::init(const DecoderConfig &cfg, Rng *rng) {
  cfg.validate();
  DecoderParams p;
  p.cfg = cfg;
  p.w_embed = Tensor::rand_uniform({cfg.input_dim, cfg.embed_dim},
                                   std::sqrt(6.0 / cfg.input_dim), rng);
  p.b_embed = Tensor::zeros({cfg.embed_dim});
  int in_dim = cfg.embed_dim;
  for (int h : cfg.hidden) {
    p.hidden.emplace_back(
        Tensor::rand_uniform({in_dim, h}, std::sqrt(6.0 / in_dim), rng),
        Tensor::zeros({h}));
    in_dim = h;
  }
  p.w_out = Tensor::rand_uniform({in_dim, cfg.num_classes},
                                 std::sqrt(6.0 / in_dim), rng);
  p.b_out = Tensor::zeros({cfg.num_classes});
  return p;
}

void DecoderParams::visit(
    const std::function<void(const std::string &, Tensor *)> &fn) {
  fn("decoder.embed.w", &w_embed);
  fn("decoder.embed.b", &b_embed);
  for (size_t i = 0; i < hidden.size(); ++i) {
    const std::string prefix = "decoder.hidden" + std::to_string(i);
    fn(prefix + ".w", &hidden[i].first);
    fn(prefix + ".b", &hidden[i].second);
  }
  fn("decoder.out.w", &w_out);
  fn("decoder.out.b", &b_out);
}

Tape::Id decoder_forward(Tape &tape, Tape::Id pooled, DecoderParams &params,
                         Tape::Id *embedding_out) {
  const Tensor &pv = tape.val(pooled);
  if (pv.ndim() != 1 || pv.dim(0) != params.cfg.input_dim)
    throw DimensionError("decoder: pooled vector does not match input_dim");
  auto row = tape.as_row(pooled);
  auto pre = tape.affine(row, tape.param(&params.w_embed),
                         tape.param(&params.b_embed));
  if (embedding_out != nullptr) *embedding_out = tape.flatten(pre);
  auto h = tape.relu(pre);
  for (auto &[w, b] : params.hidden)
    h = tape.relu(tape.affine(h, tape.param(&w), tape.param(&b)));
  auto logits = tape.affine(h, tape.param(&params.w_out),
                            tape.param(&params.b_out));
  return tape.flatten(logits);
}

}  // namespace xivec
