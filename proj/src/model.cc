// src/model.cc

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

#include "xivec/model.h"

namespace xivec {

void ModelConfig::validate() const {
  encoder.validate();
  decoder.validate();
  if (gaussian_pool && !encoder.has_aux)
    throw ConfigError("model: Gaussian pooling needs the aux head");
  if (decoder.input_dim != decoder_input_dim())
    throw ConfigError("model: decoder input_dim does not match pooling output");
  if (pool.isotropic() != encoder.isotropic)
    throw ConfigError("model: isotropic flags of pooling and encoder disagree");
}

int ModelConfig::decoder_input_dim() const {
  const int d = encoder.pooled_dim();
  return pool.with_weighted_std ? 2 * d : d;
}

std::string ModelConfig::system_name() const {
  if (!gaussian_pool)
    return pool.with_weighted_std ? "xvector-mu-sigma" : "xvector-mu";
  std::string name = "xivector";
  if (!pool.include_prior()) name += "-noprior";
  if (pool.isotropic()) name += "-isotropic";
  name += "-phi";
  if (pool.with_weighted_std) name += "-sigma";
  return name;
}

ModelConfig ModelConfig::make_system(const std::string &system, int feat_dim,
                                     int num_classes) {
  ModelConfig cfg;
  cfg.encoder = EncoderConfig::desk_default(feat_dim);
  cfg.decoder.embed_dim = 32;
  cfg.decoder.num_classes = num_classes;

  std::string rest = system;
  if (rest.rfind("xvector", 0) == 0) {
    cfg.gaussian_pool = false;
    cfg.encoder.has_aux = false;
    cfg.pool.with_weighted_std = (rest == "xvector-mu-sigma");
    if (rest != "xvector-mu" && rest != "xvector-mu-sigma")
      throw ConfigError("unknown system '" + system + "'");
  } else if (rest.rfind("xivector", 0) == 0) {
    cfg.gaussian_pool = true;
    const bool noprior = rest.find("-noprior") != std::string::npos;
    const bool isotropic = rest.find("-isotropic") != std::string::npos;
    const bool sigma = rest.size() >= 6 &&
                       rest.compare(rest.size() - 6, 6, "-sigma") == 0;
    std::string expect = "xivector";
    if (noprior) expect += "-noprior";
    if (isotropic) expect += "-isotropic";
    expect += "-phi";
    if (sigma) expect += "-sigma";
    if (rest != expect) throw ConfigError("unknown system '" + system + "'");
    cfg.pool.kind = noprior
                        ? (isotropic ? PoolKind::kNoPriorIsotropic
                                     : PoolKind::kNoPrior)
                        : (isotropic ? PoolKind::kIsotropic : PoolKind::kFull);
    cfg.pool.with_weighted_std = sigma;
    cfg.encoder.isotropic = isotropic;
  } else {
    throw ConfigError("unknown system '" + system + "'");
  }
  cfg.decoder.input_dim = cfg.decoder_input_dim();
  cfg.validate();
  return cfg;
}

ModelParams ModelParams::init(const ModelConfig &cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  ModelParams p;
  p.cfg = cfg;
  p.encoder = EncoderParams::init(cfg.encoder, &rng);
  p.prior = PriorParams::init(cfg.encoder.pooled_dim());
  p.decoder = DecoderParams::init(cfg.decoder, &rng);
  return p;
}

void ModelParams::visit(
    const std::function<void(const std::string &, Tensor *)> &fn) {
  encoder.visit(fn);
  if (cfg.gaussian_pool) {
    fn("prior.mu_p", &prior.mu_p);
    fn("prior.log_prec", &prior.log_prec);
  }
  decoder.visit(fn);
}

std::vector<Tensor *> ModelParams::tensors() {
  std::vector<Tensor *> out;
  visit([&](const std::string &, Tensor *t) { out.push_back(t); });
  return out;
}

void ModelParams::zero_grads() {
  visit([](const std::string &, Tensor *t) {
    t->ensure_grad();
    t->zero_grad();
  });
}

int64_t ModelParams::num_parameters() {
  int64_t n = 0;
  visit([&](const std::string &, Tensor *t) { n += t->numel(); });
  return n;
}

ForwardIds model_forward(Tape &tape, const Tensor &feats, ModelParams &params,
                         int label) {
  ForwardIds out;
  auto x = tape.input(feats);
  EncoderIds enc = encoder_forward(tape, x, params.encoder);

  if (params.cfg.gaussian_pool) {
    out.pool = gaussian_pool_forward(
        tape, enc.z, enc.log_prec, tape.param(&params.prior.mu_p),
        tape.param(&params.prior.log_prec), params.cfg.pool,
        params.cfg.pool.with_weighted_std);
    out.pooled = params.cfg.pool.with_weighted_std
                     ? tape.concat(out.pool.phi, out.pool.sigma_w)
                     : out.pool.phi;
  } else {
    auto [mu, sigma] = stat_pool_forward(tape, enc.z);
    out.pooled =
        params.cfg.pool.with_weighted_std ? tape.concat(mu, sigma) : mu;
  }

  out.logits = decoder_forward(tape, out.pooled, params.decoder,
                               &out.embedding);
  if (label >= 0) out.loss = tape.cross_entropy(out.logits, label);
  return out;
}

Tensor extract_embedding(const Tensor &feats, ModelParams *params) {
  Tape tape;
  ForwardIds ids = model_forward(tape, feats, *params, -1);
  Tensor emb = tape.val(ids.embedding);
  emb.grad.clear();
  return emb;
}

}  // namespace xivec
