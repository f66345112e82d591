// src/encoder.cc

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

#include "xivec/encoder.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace xivec {

std::vector<TdnnLayerSpec> parse_layer_specs(
    const std::vector<std::string> &items) {
  std::vector<TdnnLayerSpec> layers;
  for (const std::string &item : items) {
    TdnnLayerSpec spec{};
    if (std::sscanf(item.c_str(), "%d:%d:%d", &spec.out_dim, &spec.kernel,
                    &spec.dilation) != 3)
      throw ConfigError("bad TDNN layer spec '" + item +
                        "', expected out:kernel:dilation");
    layers.push_back(spec);
  }
  return layers;
}

std::string format_layer_specs(const std::vector<TdnnLayerSpec> &layers) {
  std::ostringstream out;
  for (size_t i = 0; i < layers.size(); ++i)
    out << (i ? "," : "") << layers[i].out_dim << ':' << layers[i].kernel
        << ':' << layers[i].dilation;
  return out.str();
}

void EncoderConfig::validate() const {
  if (input_dim < 1) throw ConfigError("encoder: input_dim must be positive");
  if (layers.empty()) throw ConfigError("encoder: at least one TDNN layer");
  for (const auto &l : layers) {
    if (l.out_dim < 1 || l.kernel < 1 || l.dilation < 1)
      throw ConfigError("encoder: layer dims/kernel/dilation must be positive");
  }
  if (has_aux && aux_hidden < 1)
    throw ConfigError("encoder: aux_hidden must be >= 1");
  if (aux_tap >= static_cast<int>(layers.size()))
    throw ConfigError("encoder: aux_tap out of range");
}

EncoderConfig EncoderConfig::desk_default(int feat_dim) {
  EncoderConfig cfg;
  cfg.input_dim = feat_dim;
  cfg.layers = {{48, 5, 1}, {48, 3, 2}, {64, 1, 1}};
  cfg.aux_hidden = 16;
  return cfg;
}

EncoderConfig EncoderConfig::tdnn5_standard(int feat_dim) {
  EncoderConfig cfg;
  cfg.input_dim = feat_dim;
  cfg.layers = {{512, 5, 1}, {512, 3, 2}, {512, 3, 3}, {512, 1, 1},
                {1500, 1, 1}};
  cfg.aux_hidden = 256;
  return cfg;
}

EncoderParams EncoderParams::init(const EncoderConfig &cfg, Rng *rng) {
  cfg.validate();
  EncoderParams p;
  p.cfg = cfg;
  int in_dim = cfg.input_dim;
  for (const auto &spec : cfg.layers) {
    Layer layer;
    const double limit = std::sqrt(6.0 / (double(spec.kernel) * in_dim));
    layer.kernel =
        Tensor::rand_uniform({spec.kernel, in_dim, spec.out_dim}, limit, rng);
    layer.bias = Tensor::zeros({spec.out_dim});
    p.layers.push_back(std::move(layer));
    in_dim = spec.out_dim;
  }
  if (cfg.has_aux) {
    const int tap = cfg.tap_dim();
    const int hid = cfg.aux_hidden;
    const int out = cfg.isotropic ? 1 : cfg.pooled_dim();
    p.aux_w1 = Tensor::rand_uniform({tap, hid}, std::sqrt(6.0 / tap), rng);
    p.aux_b1 = Tensor::zeros({hid});
    // The output layer starts at zero: every frame then carries the same
    // log-precision, the pooling gains start uniform, and the head learns
    // deviations from a plain mean only as the loss asks for them.
    p.aux_w2 = Tensor::zeros({hid, out});
    p.aux_b2 = Tensor::zeros({out});
  }
  return p;
}

void EncoderParams::visit(
    const std::function<void(const std::string &, Tensor *)> &fn) {
  for (size_t i = 0; i < layers.size(); ++i) {
    const std::string prefix = "encoder.tdnn" + std::to_string(i);
    fn(prefix + ".kernel", &layers[i].kernel);
    fn(prefix + ".bias", &layers[i].bias);
  }
  if (cfg.has_aux) {
    fn("encoder.aux.w1", &aux_w1);
    fn("encoder.aux.b1", &aux_b1);
    fn("encoder.aux.w2", &aux_w2);
    fn("encoder.aux.b2", &aux_b2);
  }
}

Tape::Id tdnn_forward(Tape &tape, Tape::Id x, EncoderParams &params,
                      Tape::Id *tap_out) {
  const int tap_index = params.cfg.tap_index();
  Tape::Id h = x;
  Tape::Id tap = -1;
  for (size_t i = 0; i < params.layers.size(); ++i) {
    auto &layer = params.layers[i];
    h = tape.relu(tape.conv1d(h, tape.param(&layer.kernel),
                              tape.param(&layer.bias),
                              params.cfg.layers[i].dilation));
    if (static_cast<int>(i) == tap_index) tap = h;
  }
  if (tap_out != nullptr) *tap_out = tap;
  return h;
}

Tape::Id aux_head_forward(Tape &tape, Tape::Id frame_feats,
                          EncoderParams &params) {
  if (!params.cfg.has_aux)
    throw ConfigError("aux_head_forward: encoder has no aux head");
  auto hidden = tape.relu(tape.affine(frame_feats, tape.param(&params.aux_w1),
                                      tape.param(&params.aux_b1)));
  auto pre = tape.affine(hidden, tape.param(&params.aux_w2),
                         tape.param(&params.aux_b2));
  auto log_prec = tape.scale(tape.log_softplus(pre), 2.0);
  if (params.cfg.isotropic)
    log_prec = tape.broadcast_col(log_prec, params.cfg.pooled_dim());
  return log_prec;
}

EncoderIds encoder_forward(Tape &tape, Tape::Id x, EncoderParams &params) {
  const Tensor &xv = tape.val(x);
  if (xv.ndim() != 2 || xv.cols() != params.cfg.input_dim)
    throw DimensionError("encoder: input must be [T, input_dim]");
  EncoderIds out;
  Tape::Id tap = -1;
  out.z = tdnn_forward(tape, x, params, &tap);
  if (params.cfg.has_aux) out.log_prec = aux_head_forward(tape, tap, params);
  return out;
}

EncoderOutput encode(const Tensor &x, EncoderParams *params) {
  Tape tape;
  auto ids = encoder_forward(tape, tape.input(x), *params);
  EncoderOutput out;
  out.z = tape.val(ids.z);
  if (ids.log_prec >= 0) out.log_prec = tape.val(ids.log_prec);
  out.z.grad.clear();
  out.log_prec.grad.clear();
  return out;
}

}  // namespace xivec
