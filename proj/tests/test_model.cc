// tests/test_model.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numeric>

#include "test_util.h"
#include "xivec/model.h"
#include "xivec/trainer.h"

using namespace xivec;
using testutil::max_fd_rel_err;
using testutil::random_tensor;

namespace {

ModelConfig micro_config(const std::string &system) {
  ModelConfig cfg = ModelConfig::make_system(system, 4, 3);
  cfg.encoder.layers = {{6, 3, 1}, {8, 1, 1}};
  cfg.encoder.aux_hidden = 4;
  cfg.decoder.embed_dim = 5;
  cfg.decoder.input_dim = cfg.decoder_input_dim();
  return cfg;
}

// Seed whose forward pass keeps every relu/clamp input clear of its kink, so
// central differences stay valid.
ModelParams micro_params_with_margin(const ModelConfig &cfg, const Tensor &x,
                                     int label) {
  for (uint64_t seed = 1; seed <= 200; ++seed) {
    ModelParams params = ModelParams::init(cfg, seed);
    Tape probe;
    (void)model_forward(probe, x, params, label);
    if (probe.min_kink_margin() > 1e-3) return params;
  }
  throw Error("no kink-free seed found");
}

}  // namespace

TEST_CASE("decoder: uniform logits at zero weights, shape contract") {
  Rng rng(1);
  DecoderConfig cfg;
  cfg.input_dim = 6;
  cfg.embed_dim = 4;
  cfg.num_classes = 5;
  DecoderParams params = DecoderParams::init(cfg, &rng);
  for (Tensor *t : {&params.w_embed, &params.b_embed, &params.w_out,
                    &params.b_out})
    std::fill(t->data.begin(), t->data.end(), 0.0);
  Tape tp;
  auto logits = decoder_forward(tp, tp.input(random_tensor({6}, &rng)), params);
  REQUIRE(tp.val(logits).shape == std::vector<int>({5}));
  for (double v : tp.val(logits).data) CHECK(v == 0.0);

  // Cross-entropy at uniform logits is exactly log C.
  auto loss = tp.cross_entropy(logits, 2);
  CHECK(tp.val(loss).at(0) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("decoder: two-class hand-computed affine chain") {
  Rng rng(2);
  DecoderConfig cfg;
  cfg.input_dim = 2;
  cfg.embed_dim = 2;
  cfg.num_classes = 2;
  DecoderParams params = DecoderParams::init(cfg, &rng);
  params.w_embed = Tensor::from_data({2, 2}, {1.0, 0.5, -1.0, 2.0});
  params.b_embed = Tensor::vec({0.0, 1.0});
  params.w_out = Tensor::from_data({2, 2}, {1.0, -1.0, 0.5, 0.5});
  params.b_out = Tensor::vec({0.25, -0.25});
  Tape tp;
  Tape::Id emb = -1;
  auto logits =
      decoder_forward(tp, tp.input(Tensor::vec({2.0, 1.0})), params, &emb);
  // embedding pre-activation: [2,1].[[1,.5],[-1,2]] + [0,1] = [1, 4]
  CHECK(tp.val(emb).at(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tp.val(emb).at(1) == doctest::Approx(4.0).epsilon(1e-12));
  // logits: relu([1,4]) = [1,4]; [1,4].[[1,-1],[.5,.5]] + [.25,-.25]
  CHECK(tp.val(logits).at(0) == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(tp.val(logits).at(1) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("extract_embedding: shape, determinism, compositional consistency") {
  Rng rng(3);
  ModelConfig cfg = micro_config("xivector-phi");
  ModelParams params = ModelParams::init(cfg, 7);

  SUBCASE("dim E for any length") {
    for (int t_len : {1, 3, 17}) {
      Tensor x = random_tensor({t_len, 4}, &rng);
      Tensor emb = extract_embedding(x, &params);
      CHECK(emb.shape == std::vector<int>({5}));
    }
  }
  SUBCASE("identical utterances, identical embeddings") {
    Tensor x = random_tensor({9, 4}, &rng);
    Tensor a = extract_embedding(x, &params);
    Tensor b = extract_embedding(x, &params);
    CHECK(std::memcmp(a.data.data(), b.data.data(),
                      a.data.size() * sizeof(double)) == 0);
  }
  SUBCASE("embedding equals affine(phi) computed independently") {
    Tensor x = random_tensor({9, 4}, &rng);
    EncoderOutput enc = encode(x, &params.encoder);
    PooledPosterior post =
        gaussian_posterior_pool(enc, params.prior, params.cfg.pool);
    Tensor expected = Tensor::zeros({5});
    for (int j = 0; j < 5; ++j) {
      double v = params.decoder.b_embed.at(j);
      for (int a = 0; a < 8; ++a)
        v += post.phi.at(a) * params.decoder.w_embed.at(a, j);
      expected.at(j) = v;
    }
    Tensor emb = extract_embedding(x, &params);
    for (int j = 0; j < 5; ++j)
      CHECK(emb.at(j) == doctest::Approx(expected.at(j)).epsilon(1e-12));
  }
}

TEST_CASE("extract_embedding: frame permutation invariance without context") {
  // With K=1 layers the encoder is frame-local, so permuting input frames
  // permutes (z, log_prec) jointly and pooling is order-invariant.
  Rng rng(4);
  ModelConfig cfg = ModelConfig::make_system("xivector-phi-sigma", 4, 3);
  cfg.encoder.layers = {{6, 1, 1}, {8, 1, 1}};
  cfg.encoder.aux_hidden = 4;
  cfg.decoder.embed_dim = 5;
  cfg.decoder.input_dim = cfg.decoder_input_dim();
  ModelParams params = ModelParams::init(cfg, 11);

  Tensor x = random_tensor({8, 4}, &rng);
  Tensor perm = Tensor::zeros({8, 4});
  std::vector<int> order(8);
  std::iota(order.begin(), order.end(), 0);
  Rng prng(5);
  prng.shuffle(&order);
  for (int t = 0; t < 8; ++t)
    for (int j = 0; j < 4; ++j) perm.at(t, j) = x.at(order[t], j);

  Tensor a = extract_embedding(x, &params);
  Tensor b = extract_embedding(perm, &params);
  for (int j = 0; j < 5; ++j)
    CHECK(a.at(j) == doctest::Approx(b.at(j)).epsilon(1e-10));
}

TEST_CASE("model_forward gradients: micro pipeline, every parameter") {
  for (const char *system :
       {"xivector-phi", "xivector-phi-sigma", "xvector-mu-sigma",
        "xivector-noprior-phi", "xivector-isotropic-phi"}) {
    CAPTURE(system);
    ModelConfig cfg = micro_config(system);
    Rng rng(10);
    Tensor x = random_tensor({6, 4}, &rng, 1.0, 1e-2);
    ModelParams params = micro_params_with_margin(cfg, x, 1);

    std::vector<Tensor *> all = params.tensors();
    auto run = [&](bool with_grad) {
      if (with_grad) params.zero_grads();
      Tape tp;
      ForwardIds ids = model_forward(tp, x, params, 1);
      if (with_grad) tp.backward(ids.loss);
      return tp.val(ids.loss).at(0);
    };
    CHECK(max_fd_rel_err(all, run) < 1e-4);
  }
}

TEST_CASE("train_minibatch: zero learning rate leaves parameters intact") {
  ModelConfig cfg = micro_config("xivector-phi");
  ModelParams params = ModelParams::init(cfg, 3);
  Rng rng(6);
  Tensor f0 = random_tensor({6, 4}, &rng), f1 = random_tensor({6, 4}, &rng);
  std::vector<BatchExample> batch = {{&f0, 0}, {&f1, 2}};

  std::vector<Tensor> before;
  for (Tensor *t : params.tensors()) before.push_back(*t);
  const double loss = train_minibatch(&params, batch, 0.0);
  CHECK(loss > 0.0);
  auto tensors = params.tensors();
  for (size_t i = 0; i < tensors.size(); ++i)
    CHECK(std::memcmp(tensors[i]->data.data(), before[i].data.data(),
                      before[i].data.size() * sizeof(double)) == 0);
}

TEST_CASE("train_minibatch: loss is a deterministic function of state") {
  ModelConfig cfg = micro_config("xivector-phi");
  Rng rng(7);
  Tensor f0 = random_tensor({6, 4}, &rng), f1 = random_tensor({6, 4}, &rng);
  std::vector<BatchExample> batch = {{&f0, 1}, {&f1, 0}};
  ModelParams a = ModelParams::init(cfg, 9);
  ModelParams b = ModelParams::init(cfg, 9);
  CHECK(train_minibatch(&a, batch, 0.0) == train_minibatch(&b, batch, 0.0));
}

TEST_CASE("train_minibatch: overfits one fixed batch") {
  ModelConfig cfg = micro_config("xivector-phi");
  cfg.decoder.num_classes = 2;
  ModelParams params = ModelParams::init(cfg, 5);
  Rng rng(8);
  std::vector<Tensor> feats;
  for (int i = 0; i < 4; ++i) feats.push_back(random_tensor({6, 4}, &rng, 2.0));
  std::vector<BatchExample> batch = {
      {&feats[0], 0}, {&feats[1], 1}, {&feats[2], 0}, {&feats[3], 1}};

  double prev = train_minibatch(&params, batch, 0.05);
  for (int step = 1; step < 50; ++step) {
    const double loss = train_minibatch(&params, batch, 0.05);
    CHECK(loss < prev);
    prev = loss;
  }
}

TEST_CASE("train_minibatch: the prior moves after one step") {
  ModelConfig cfg = micro_config("xivector-phi");
  ModelParams params = ModelParams::init(cfg, 12);
  Rng rng(13);
  Tensor f0 = random_tensor({6, 4}, &rng), f1 = random_tensor({6, 4}, &rng);
  std::vector<BatchExample> batch = {{&f0, 0}, {&f1, 1}};
  train_minibatch(&params, batch, 0.1);
  double moved = 0.0;
  for (double v : params.prior.mu_p.data) moved += std::fabs(v);
  for (double v : params.prior.log_prec.data) moved += std::fabs(v);
  CHECK(moved > 0.0);
}

TEST_CASE("train: determinism, accuracy, prior learning, config errors") {
  SynthConfig synth;
  synth.num_speakers = 10;
  synth.segments_per_speaker = 6;
  synth.frames = 30;
  synth.latent_dim = 6;
  synth.obs_dim = 6;
  synth.prior_log_prec = 0.0;
  synth.noise_log_prec_min = 0.0;
  synth.noise_log_prec_max = 4.0;
  synth.obs_map = ObsMap::kLinearTanh;
  synth.seed = 77;
  Corpus corpus = gen_synthetic_corpus(synth);

  ModelConfig cfg = ModelConfig::make_system("xivector-phi", 6, 10);
  cfg.encoder.layers = {{16, 3, 1}, {16, 3, 2}, {24, 1, 1}};
  cfg.encoder.aux_hidden = 8;
  cfg.decoder.embed_dim = 16;
  cfg.decoder.input_dim = cfg.decoder_input_dim();

  TrainConfig tc;
  tc.batch_size = 4;
  tc.lr = 0.05;
  tc.max_epochs = 30;
  tc.stop_tol = 0.0;
  tc.segment_frames = 30;
  tc.seed = 21;

  SUBCASE("same seed, bit-identical loss history") {
    ModelParams a = ModelParams::init(cfg, 1);
    ModelParams b = ModelParams::init(cfg, 1);
    TrainConfig short_tc = tc;
    short_tc.max_epochs = 3;
    TrainResult ra = train(&a, corpus, short_tc);
    TrainResult rb = train(&b, corpus, short_tc);
    REQUIRE(ra.history.size() == rb.history.size());
    for (size_t e = 0; e < ra.history.size(); ++e) {
      CHECK(ra.history[e].loss == rb.history[e].loss);
      CHECK(ra.history[e].accuracy == rb.history[e].accuracy);
    }
  }
  SUBCASE("10-speaker corpus trains past 90% accuracy, prior learns") {
    ModelParams params = ModelParams::init(cfg, 1);
    TrainResult result = train(&params, corpus, tc);
    CHECK(result.history.size() <= 30);
    CHECK(evaluate_accuracy(&params, corpus) > 0.9);
    double lp_norm = 0.0;
    for (double v : params.prior.log_prec.data) lp_norm += std::fabs(v);
    CHECK(lp_norm > 0.0);
  }
  SUBCASE("single-speaker corpus is rejected") {
    SynthConfig solo = synth;
    solo.num_speakers = 1;
    Corpus solo_corpus = gen_synthetic_corpus(solo);
    ModelParams params = ModelParams::init(cfg, 1);
    CHECK_THROWS_AS(train(&params, solo_corpus, tc), ConfigError);
  }
}

TEST_CASE("fit_length: crop and cyclic tile") {
  Rng rng(14);
  Tensor feats = Tensor::from_data({3, 2}, {1, 2, 3, 4, 5, 6});
  SUBCASE("exact length passes through") {
    Tensor out = fit_length(feats, 3, &rng);
    CHECK(std::memcmp(out.data.data(), feats.data.data(),
                      feats.data.size() * sizeof(double)) == 0);
  }
  SUBCASE("tiling repeats frames cyclically") {
    Tensor out = fit_length(feats, 7, &rng);
    REQUIRE(out.shape == std::vector<int>({7, 2}));
    for (int t = 0; t < 7; ++t)
      for (int j = 0; j < 2; ++j) CHECK(out.at(t, j) == feats.at(t % 3, j));
  }
  SUBCASE("cropping preserves a contiguous window") {
    Tensor longer = random_tensor({10, 2}, &rng);
    Tensor out = fit_length(longer, 4, &rng);
    REQUIRE(out.shape == std::vector<int>({4, 2}));
    bool found = false;
    for (int start = 0; start + 4 <= 10 && !found; ++start) {
      bool match = true;
      for (int t = 0; t < 4 && match; ++t)
        for (int j = 0; j < 2 && match; ++j)
          match = out.at(t, j) == longer.at(start + t, j);
      found = match;
    }
    CHECK(found);
  }
}
