// python/xivec_module.cc

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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "xivec/experiment.h"
#include "xivec/metrics.h"

namespace py = pybind11;
using namespace xivec;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Tensor tensor_from_array(const DoubleArray &arr, const char *what) {
  py::buffer_info info = arr.request();
  if (info.ndim != 1 && info.ndim != 2)
    throw DimensionError(std::string(what) + ": expected a 1-D or 2-D array");
  std::vector<int> shape;
  for (py::ssize_t d = 0; d < info.ndim; ++d)
    shape.push_back(static_cast<int>(info.shape[d]));
  const double *data = static_cast<const double *>(info.ptr);
  return Tensor::from_data(
      shape, std::vector<double>(data, data + arr.size()));
}

py::array_t<double> array_from_tensor(const Tensor &t) {
  std::vector<py::ssize_t> shape(t.shape.begin(), t.shape.end());
  py::array_t<double> out(shape);
  std::copy(t.data.begin(), t.data.end(),
            static_cast<double *>(out.request().ptr));
  return out;
}

PoolingMode mode_of(bool include_prior) {
  PoolingMode mode;
  mode.kind = include_prior ? PoolKind::kFull : PoolKind::kNoPrior;
  return mode;
}

std::vector<TrialRecord> trials_from_scores(
    const std::vector<double> &target_scores,
    const std::vector<double> &nontarget_scores) {
  std::vector<TrialRecord> trials;
  int k = 0;
  for (double s : target_scores) {
    TrialRecord t;
    t.enroll_id = "e" + std::to_string(k);
    t.test_id = "t" + std::to_string(k++);
    t.target = true;
    t.score = s;
    t.scored = true;
    trials.push_back(std::move(t));
  }
  for (double s : nontarget_scores) {
    TrialRecord t;
    t.enroll_id = "e" + std::to_string(k);
    t.test_id = "t" + std::to_string(k++);
    t.target = false;
    t.score = s;
    t.scored = true;
    trials.push_back(std::move(t));
  }
  return trials;
}

// Owning wrapper so Python holds a stable model object.
struct PyModel {
  std::shared_ptr<ModelParams> params;

  static PyModel load_from(const std::string &path) {
    return PyModel{std::make_shared<ModelParams>(load_model(path))};
  }
  void save_to(const std::string &path) { save_model(*params, path); }
  py::array_t<double> embed(const DoubleArray &feats) {
    Tensor t = tensor_from_array(feats, "embed");
    return array_from_tensor(extract_embedding(t, params.get()));
  }
  std::string system() const { return params->cfg.system_name(); }
  int64_t num_parameters() const { return params->num_parameters(); }
};

Corpus corpus_from_python(
    const std::vector<std::pair<int, DoubleArray>> &segments) {
  Corpus corpus;
  int max_label = -1;
  int index = 0;
  for (const auto &[label, feats] : segments) {
    Segment seg;
    char id[16];
    std::snprintf(id, sizeof(id), "py%05d", index++);
    seg.id = id;
    seg.speaker = label;
    seg.feats = tensor_from_array(feats, "corpus features");
    if (seg.feats.ndim() != 2)
      throw DimensionError("corpus features must be 2-D [T,F]");
    max_label = std::max(max_label, label);
    corpus.segments.push_back(std::move(seg));
  }
  corpus.num_speakers = max_label + 1;
  return corpus;
}

}  // namespace

PYBIND11_MODULE(_xivec, m) {
  m.doc() = "xi-vector speaker embeddings: Gaussian-posterior pooling, "
            "training, and detection metrics";

  py::register_exception<Error>(m, "XivecError");

  m.def(
      "gaussian_posterior_pool",
      [](const DoubleArray &z, const DoubleArray &log_prec,
         const DoubleArray &mu_p, const DoubleArray &prior_log_prec,
         bool include_prior) {
        Tensor zt = tensor_from_array(z, "z");
        Tensor lt = tensor_from_array(log_prec, "log_prec");
        PriorParams prior;
        prior.mu_p = tensor_from_array(mu_p, "mu_p");
        prior.log_prec = tensor_from_array(prior_log_prec, "prior_log_prec");
        PooledPosterior post =
            gaussian_posterior_pool(&zt, &lt, prior, mode_of(include_prior));
        Tensor gains = gain_factors(&lt, prior, mode_of(include_prior));
        return py::make_tuple(array_from_tensor(post.phi),
                              array_from_tensor(post.log_prec),
                              array_from_tensor(gains));
      },
      py::arg("z"), py::arg("log_prec"), py::arg("mu_p"),
      py::arg("prior_log_prec"), py::arg("include_prior") = true,
      "Posterior mean, posterior log-precision, and the gain matrix for a "
      "[T,D] sequence of point estimates and log-precisions.");

  m.def(
      "stat_pool",
      [](const DoubleArray &z) {
        auto [mu, sigma] = stat_pool(tensor_from_array(z, "z"));
        return py::make_tuple(array_from_tensor(mu), array_from_tensor(sigma));
      },
      py::arg("z"), "Mean and population standard deviation over frames.");

  m.def(
      "weighted_std",
      [](const DoubleArray &z, const DoubleArray &gains,
         std::optional<DoubleArray> mu_p) {
        Tensor zt = tensor_from_array(z, "z");
        Tensor gt = tensor_from_array(gains, "gains");
        if (mu_p.has_value()) {
          Tensor mt = tensor_from_array(*mu_p, "mu_p");
          return array_from_tensor(weighted_std(zt, gt, &mt));
        }
        return array_from_tensor(weighted_std(zt, gt, nullptr));
      },
      py::arg("z"), py::arg("gains"), py::arg("mu_p") = py::none(),
      "Gain-weighted standard deviation; pass mu_p when the gains carry the "
      "prior row.");

  m.def(
      "cosine_score",
      [](const DoubleArray &a, const DoubleArray &b) {
        return cosine_score(tensor_from_array(a, "a"),
                            tensor_from_array(b, "b"));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "compute_eer",
      [](const std::vector<double> &target_scores,
         const std::vector<double> &nontarget_scores) {
        return compute_eer(trials_from_scores(target_scores, nontarget_scores));
      },
      py::arg("target_scores"), py::arg("nontarget_scores"));

  m.def(
      "compute_min_dcf",
      [](const std::vector<double> &target_scores,
         const std::vector<double> &nontarget_scores, double p_target,
         double c_miss, double c_fa) {
        return compute_min_dcf(
            trials_from_scores(target_scores, nontarget_scores), p_target,
            c_miss, c_fa);
      },
      py::arg("target_scores"), py::arg("nontarget_scores"),
      py::arg("p_target") = 0.01, py::arg("c_miss") = 1.0,
      py::arg("c_fa") = 1.0);

  m.def(
      "generate_corpus",
      [](const std::string &config_text) {
        SynthConfig cfg = SynthConfig::from_config(
            KeyValueConfig::from_string(config_text, "<generate_corpus>"));
        Corpus corpus = gen_synthetic_corpus(cfg);
        py::list out;
        for (const auto &seg : corpus.segments) {
          py::dict d;
          d["id"] = seg.id;
          d["speaker"] = seg.speaker;
          d["features"] = array_from_tensor(seg.feats);
          d["true_latent"] = array_from_tensor(seg.true_latent);
          d["true_log_prec"] = array_from_tensor(seg.true_log_prec);
          out.append(d);
        }
        return out;
      },
      py::arg("config_text"),
      "Synthesize a corpus from key=value config text; returns one dict per "
      "segment with the generator's ground truth attached.");

  m.def(
      "read_features",
      [](const std::string &path) {
        return array_from_tensor(read_features(path));
      },
      py::arg("path"));
  m.def(
      "write_features",
      [](const DoubleArray &feats, const std::string &path) {
        write_features(tensor_from_array(feats, "features"), path);
      },
      py::arg("features"), py::arg("path"));

  py::class_<PyModel>(m, "Model")
      .def_static("load", &PyModel::load_from, py::arg("path"))
      .def("save", &PyModel::save_to, py::arg("path"))
      .def("embed", &PyModel::embed, py::arg("features"),
           "Speaker embedding of a [T,F] feature matrix.")
      .def_property_readonly("system", &PyModel::system)
      .def_property_readonly("num_parameters", &PyModel::num_parameters);

  m.def(
      "train_model",
      [](const std::vector<std::pair<int, DoubleArray>> &corpus,
         const std::string &config_text) {
        Corpus c = corpus_from_python(corpus);
        if (c.segments.empty()) throw ConfigError("train_model: empty corpus");
        KeyValueConfig kv =
            KeyValueConfig::from_string(config_text, "<train_model>");
        ModelConfig cfg = ModelConfig::make_system(
            kv.get_string("system", "xivector-phi"),
            c.segments.front().feats.cols(), c.num_speakers);
        if (kv.has("model.layers"))
          cfg.encoder.layers = parse_layer_specs(kv.get_list("model.layers"));
        if (kv.has("model.aux_hidden"))
          cfg.encoder.aux_hidden = kv.require_int("model.aux_hidden");
        if (kv.has("model.embed_dim"))
          cfg.decoder.embed_dim = kv.require_int("model.embed_dim");
        cfg.decoder.input_dim = cfg.decoder_input_dim();
        cfg.validate();
        TrainConfig tc = TrainConfig::from_config(kv);
        auto params =
            std::make_shared<ModelParams>(ModelParams::init(cfg, tc.seed));
        TrainResult result = train(params.get(), c, tc);
        py::list history;
        for (const auto &e : result.history)
          history.append(py::make_tuple(e.loss, e.accuracy));
        return py::make_tuple(PyModel{params}, history);
      },
      py::arg("corpus"), py::arg("config_text") = "",
      "Train a system on [(label, features [T,F]), ...]; returns (Model, "
      "per-epoch (loss, accuracy) history).");

  m.def(
      "run_experiment",
      [](const std::string &config_text) {
        ExperimentConfig cfg = ExperimentConfig::from_config(
            KeyValueConfig::from_string(config_text, "<run_experiment>"));
        py::list out;
        for (const auto &r : run_experiment(cfg)) {
          py::dict d;
          d["mode"] = r.system;
          d["eer"] = r.eer;
          d["min_dcf"] = r.min_dcf;
          d["seed"] = r.seed;
          out.append(d);
        }
        return out;
      },
      py::arg("config_text"),
      "Train and compare the configured systems; one dict per system.");

  m.attr("__version__") = "0.1.0";
}
