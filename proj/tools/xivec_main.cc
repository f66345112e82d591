// tools/xivec_main.cc

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

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>

#include "xivec/experiment.h"
#include "xivec/logging.h"
#include "xivec/metrics.h"

namespace fs = std::filesystem;
using namespace xivec;

namespace {

void cmd_gen_data(const std::string &config_path, const std::string &out_dir) {
  SynthConfig cfg =
      SynthConfig::from_config(KeyValueConfig::from_file(config_path));
  Corpus corpus = gen_synthetic_corpus(cfg);
  write_corpus_dir(corpus, out_dir);
  log::info("wrote " + std::to_string(corpus.segments.size()) +
            " segments from " + std::to_string(corpus.num_speakers) +
            " speakers under " + out_dir);
  if (cfg.make_trials) {
    auto trials =
        make_trials(corpus, cfg.trial_nontarget_ratio, cfg.seed + 7919);
    write_trials(trials, (fs::path(out_dir) / "trials.txt").string());
    log::info("wrote " + std::to_string(trials.size()) + " trials");
  }
}

ModelConfig model_config_from(const KeyValueConfig &kv, int feat_dim,
                              int num_speakers) {
  ModelConfig cfg = ModelConfig::make_system(
      kv.get_string("system", "xivector-phi"), feat_dim, num_speakers);
  if (kv.has("model.layers"))
    cfg.encoder.layers = parse_layer_specs(kv.get_list("model.layers"));
  if (kv.has("model.aux_hidden"))
    cfg.encoder.aux_hidden = kv.require_int("model.aux_hidden");
  if (kv.has("model.embed_dim"))
    cfg.decoder.embed_dim = kv.require_int("model.embed_dim");
  if (kv.has("model.decoder_hidden")) {
    cfg.decoder.hidden.clear();
    for (const std::string &item : kv.get_list("model.decoder_hidden"))
      cfg.decoder.hidden.push_back(std::stoi(item));
  }
  cfg.decoder.input_dim = cfg.decoder_input_dim();
  cfg.validate();
  return cfg;
}

void cmd_train(const std::string &config_path, const std::string &corpus_dir,
               const std::string &model_path,
               const std::string &history_path) {
  KeyValueConfig kv = KeyValueConfig::from_file(config_path);
  Corpus corpus = read_corpus_dir(corpus_dir);
  if (corpus.segments.empty()) throw ConfigError("train: empty corpus");
  const int feat_dim = corpus.segments.front().feats.cols();
  ModelConfig cfg = model_config_from(kv, feat_dim, corpus.num_speakers);
  TrainConfig tc = TrainConfig::from_config(kv);
  ModelParams params = ModelParams::init(cfg, tc.seed);
  log::info("training " + cfg.system_name() + " on " +
            std::to_string(corpus.segments.size()) + " segments (" +
            std::to_string(params.num_parameters()) + " parameters)");
  TrainResult result = train(&params, corpus, tc);
  const EpochStats &last = result.history.back();
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "finished after %zu epochs: loss %.6f, accuracy %.4f",
                result.history.size(), last.loss, last.accuracy);
  log::info(buf);
  save_model(params, model_path);
  if (!history_path.empty()) write_loss_history(result, history_path);
}

void cmd_embed(const std::string &model_path, const std::string &feats_path,
               const std::string &out_path) {
  ModelParams params = load_model(model_path);
  Tensor feats = read_features(feats_path);
  Tensor emb = extract_embedding(feats, &params);
  Tensor row = Tensor::zeros({1, emb.dim(0)});
  row.data = emb.data;
  write_features(row, out_path);
}

std::string find_features(const std::string &dir, const std::string &id) {
  const fs::path direct = fs::path(dir) / (id + ".xvf");
  if (fs::exists(direct)) return direct.string();
  const fs::path nested = fs::path(dir) / "feats" / (id + ".xvf");
  if (fs::exists(nested)) return nested.string();
  throw ConfigError("no feature file for segment '" + id + "' under " + dir);
}

void cmd_score(const std::string &model_path, const std::string &trials_path,
               const std::string &features_dir, const std::string &out_path) {
  ModelParams params = load_model(model_path);
  std::vector<TrialRecord> trials = load_trials(trials_path);
  std::map<std::string, Tensor> embeddings;
  auto embedding_of = [&](const std::string &id) -> const Tensor & {
    auto it = embeddings.find(id);
    if (it == embeddings.end()) {
      Tensor feats = read_features(find_features(features_dir, id));
      it = embeddings.emplace(id, extract_embedding(feats, &params)).first;
    }
    return it->second;
  };
  for (auto &t : trials) {
    t.score = cosine_score(embedding_of(t.enroll_id), embedding_of(t.test_id));
    t.scored = true;
  }
  write_scores(trials, out_path);
  log::info("scored " + std::to_string(trials.size()) + " trials over " +
            std::to_string(embeddings.size()) + " segments");
}

void cmd_eval(const std::string &scores_path, const std::string &trials_path,
              double p_target, double c_miss, double c_fa) {
  std::vector<TrialRecord> trials = load_trials(trials_path);
  attach_scores(&trials, scores_path);
  DetMetrics det = compute_det_metrics(trials, p_target, c_miss, c_fa);
  std::printf("EER (%%): %.4f\n", 100.0 * det.eer);
  std::printf("MinDCF (p_target=%g): %.4f\n", p_target, det.min_dcf);
}

void cmd_experiment(const std::string &config_path,
                    const std::string &out_csv) {
  ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  auto results = run_experiment(cfg);
  write_experiment_csv(results, out_csv);
  for (const auto &r : results) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-28s EER %.4f  MinDCF %.4f",
                  r.system.c_str(), r.eer, r.min_dcf);
    log::info(buf);
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"xi-vector speaker embedding toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, corpus_dir, model_path, feats_path;
  std::string trials_path, scores_path, features_dir, history_path;
  double p_target = 0.01, c_miss = 1.0, c_fa = 1.0;

  auto *gen = app.add_subcommand("gen-data", "synthesize a labeled corpus");
  gen->add_option("--config", config_path, "synthesis config")->required();
  gen->add_option("--out", out_path, "output corpus directory")->required();

  auto *tr = app.add_subcommand("train", "train a speaker embedding system");
  tr->add_option("--config", config_path, "system + training config")
      ->required();
  tr->add_option("--corpus", corpus_dir, "corpus directory")->required();
  tr->add_option("--out", model_path, "output model checkpoint")->required();
  tr->add_option("--history", history_path, "loss history CSV");

  auto *em = app.add_subcommand("embed", "extract one embedding");
  em->add_option("--model", model_path, "model checkpoint")->required();
  em->add_option("--features", feats_path, "feature file")->required();
  em->add_option("--out", out_path, "output embedding file")->required();

  auto *sc = app.add_subcommand("score", "score a trial list");
  sc->add_option("--model", model_path, "model checkpoint")->required();
  sc->add_option("--trials", trials_path, "trial list")->required();
  sc->add_option("--features", features_dir, "feature directory")->required();
  sc->add_option("--out", out_path, "output score file")->required();

  auto *ev = app.add_subcommand("eval", "detection metrics from scores");
  ev->add_option("--scores", scores_path, "score file")->required();
  ev->add_option("--trials", trials_path, "trial list")->required();
  ev->add_option("--p-target", p_target, "target prior");
  ev->add_option("--c-miss", c_miss, "miss cost");
  ev->add_option("--c-fa", c_fa, "false-alarm cost");

  auto *ex = app.add_subcommand("experiment", "train and compare systems");
  ex->add_option("--config", config_path, "experiment config")->required();
  ex->add_option("--out", out_path, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) cmd_gen_data(config_path, out_path);
    else if (tr->parsed())
      cmd_train(config_path, corpus_dir, model_path, history_path);
    else if (em->parsed()) cmd_embed(model_path, feats_path, out_path);
    else if (sc->parsed())
      cmd_score(model_path, trials_path, features_dir, out_path);
    else if (ev->parsed())
      cmd_eval(scores_path, trials_path, p_target, c_miss, c_fa);
    else if (ex->parsed()) cmd_experiment(config_path, out_path);
  } catch (const std::exception &e) {
    log::error(e.what());
    return 1;
  }
  return 0;
}
