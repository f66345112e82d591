// src/data_io.cc

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

#include "xivec/data_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace xivec {

namespace fs = std::filesystem;

namespace {

// --- little-endian primitives with explicit offsets in error messages ---

class ByteReader {
 public:
  ByteReader(const std::string &path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw FormatError("cannot open '" + path + "'");
  }

  void read_exact(void *dst, size_t n, const char *what) {
    in_.read(reinterpret_cast<char *>(dst), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n)
      throw FormatError(path_ + ": truncated " + what + " at offset " +
                        std::to_string(offset_));
    offset_ += n;
  }

  uint32_t u32(const char *what) {
    uint8_t b[4];
    read_exact(b, 4, what);
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
           uint32_t(b[3]) << 24;
  }

  uint64_t u64(const char *what) {
    uint8_t b[8];
    read_exact(b, 8, what);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  float f32(const char *what) {
    uint32_t bits = u32(what);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }

  double f64(const char *what) {
    uint64_t bits = u64(what);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }

  std::string bytes(size_t n, const char *what) {
    std::string s(n, '\0');
    if (n > 0) read_exact(s.data(), n, what);
    return s;
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

  size_t offset() const { return offset_; }
  const std::string &path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  size_t offset_ = 0;
};

class ByteWriter {
 public:
  ByteWriter(const std::string &path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw FormatError("cannot open '" + path + "' for writing");
  }

  void write(const void *src, size_t n) {
    out_.write(reinterpret_cast<const char *>(src),
               static_cast<std::streamsize>(n));
  }

  void u32(uint32_t v) {
    uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16),
                    uint8_t(v >> 24)};
    write(b, 4);
  }

  void u64(uint64_t v) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = uint8_t(v >> (8 * i));
    write(b, 8);
  }

  void f32(float f) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    u32(bits);
  }

  void f64(double d) {
    uint64_t bits;
    std::memcpy(&bits, &d, 8);
    u64(bits);
  }

  void close() {
    out_.close();
    if (!out_) throw FormatError("write failed for '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream out_;
};

constexpr char kFeatureMagic[4] = {'X', 'V', 'F', '1'};
constexpr char kModelMagic[4] = {'X', 'V', 'M', '1'};
constexpr uint32_t kModelVersion = 1;

std::string speaker_name(int speaker) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "s%03d", speaker);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Synthetic corpus
// ---------------------------------------------------------------------------

void SynthConfig::validate() const {
  if (num_speakers < 1 || segments_per_speaker < 1 || frames < 1 ||
      latent_dim < 1 || obs_dim < 1)
    throw ConfigError("synth: counts and dims must be >= 1");
  if (obs_map == ObsMap::kIdentity && obs_dim != latent_dim)
    throw ConfigError("synth: identity map needs obs_dim == latent_dim");
  if (noise_log_prec_max < noise_log_prec_min ||
      burst_log_prec_max < burst_log_prec_min)
    throw ConfigError("synth: log-precision ranges must be ordered");
  if (burst_fraction <= 0.0 || burst_fraction > 1.0)
    throw ConfigError("synth: burst_fraction must be in (0, 1]");
  if (burst_fraction_min > burst_fraction)
    throw ConfigError("synth: burst_fraction_min exceeds burst_fraction");
  if (trial_nontarget_ratio <= 0.0)
    throw ConfigError("synth: trial_nontarget_ratio must be positive");
}

SynthConfig SynthConfig::from_config(const KeyValueConfig &kv) {
  SynthConfig cfg;
  cfg.num_speakers = kv.get_int("num_speakers", cfg.num_speakers);
  cfg.segments_per_speaker =
      kv.get_int("segments_per_speaker", cfg.segments_per_speaker);
  cfg.frames = kv.get_int("frames", cfg.frames);
  cfg.latent_dim = kv.get_int("latent_dim", cfg.latent_dim);
  cfg.obs_dim = kv.get_int("obs_dim", cfg.obs_dim);
  cfg.prior_mean = kv.get_double("prior_mean", cfg.prior_mean);
  cfg.prior_log_prec = kv.get_double("prior_log_prec", cfg.prior_log_prec);
  cfg.noise_log_prec_min =
      kv.get_double("noise_log_prec_min", cfg.noise_log_prec_min);
  cfg.noise_log_prec_max =
      kv.get_double("noise_log_prec_max", cfg.noise_log_prec_max);
  cfg.noise_burst = kv.get_bool("noise_burst", cfg.noise_burst);
  cfg.burst_prob = kv.get_double("burst_prob", cfg.burst_prob);
  cfg.burst_fraction = kv.get_double("burst_fraction", cfg.burst_fraction);
  cfg.burst_fraction_min =
      kv.get_double("burst_fraction_min", cfg.burst_fraction_min);
  cfg.burst_dim_fraction =
      kv.get_double("burst_dim_fraction", cfg.burst_dim_fraction);
  cfg.burst_log_prec_min =
      kv.get_double("burst_log_prec_min", cfg.burst_log_prec_min);
  cfg.burst_log_prec_max =
      kv.get_double("burst_log_prec_max", cfg.burst_log_prec_max);
  const std::string map = kv.get_string("obs_map", "linear_tanh");
  if (map == "identity") cfg.obs_map = ObsMap::kIdentity;
  else if (map == "linear") cfg.obs_map = ObsMap::kLinear;
  else if (map == "linear_tanh") cfg.obs_map = ObsMap::kLinearTanh;
  else throw ConfigError("synth: unknown obs_map '" + map + "'");
  cfg.seed = kv.get_u64("seed", cfg.seed);
  cfg.make_trials = kv.get_bool("make_trials", cfg.make_trials);
  cfg.trial_nontarget_ratio =
      kv.get_double("trial_nontarget_ratio", cfg.trial_nontarget_ratio);
  cfg.validate();
  return cfg;
}

Corpus gen_synthetic_corpus(const SynthConfig &cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  // Fixed mixing matrix for the linear observation maps.
  Tensor mix;
  if (cfg.obs_map != ObsMap::kIdentity) {
    mix = Tensor::zeros({cfg.latent_dim, cfg.obs_dim});
    const double s = 1.0 / std::sqrt(double(cfg.latent_dim));
    for (double &v : mix.data) v = rng.normal(0.0, s);
  }

  const double prior_std = std::exp(-0.5 * cfg.prior_log_prec);
  Corpus corpus;
  corpus.num_speakers = cfg.num_speakers;

  for (int s = 0; s < cfg.num_speakers; ++s) {
    Tensor h = Tensor::zeros({cfg.latent_dim});
    for (double &v : h.data) v = rng.normal(cfg.prior_mean, prior_std);

    for (int u = 0; u < cfg.segments_per_speaker; ++u) {
      Segment seg;
      char id[32];
      std::snprintf(id, sizeof(id), "%s_u%03d", speaker_name(s).c_str(), u);
      seg.id = id;
      seg.speaker = s;
      seg.true_latent = h;

      const int t_len = cfg.frames, d = cfg.latent_dim;
      Tensor log_prec = Tensor::zeros({t_len, d});
      for (double &v : log_prec.data)
        v = rng.uniform(cfg.noise_log_prec_min, cfg.noise_log_prec_max);

      if (cfg.noise_burst && rng.uniform() < cfg.burst_prob) {
        const double frac =
            cfg.burst_fraction_min >= 0.0
                ? rng.uniform(cfg.burst_fraction_min, cfg.burst_fraction)
                : cfg.burst_fraction;
        const int burst_len =
            std::max(1, static_cast<int>(std::lround(frac * t_len)));
        const int start = rng.uniform_int(t_len - burst_len + 1);
        std::vector<bool> hit(static_cast<size_t>(d), false);
        bool any = false;
        for (int j = 0; j < d; ++j) {
          hit[static_cast<size_t>(j)] = rng.uniform() < cfg.burst_dim_fraction;
          any = any || hit[static_cast<size_t>(j)];
        }
        if (!any) hit[static_cast<size_t>(rng.uniform_int(d))] = true;
        for (int t = start; t < start + burst_len; ++t)
          for (int j = 0; j < d; ++j)
            if (hit[static_cast<size_t>(j)])
              log_prec.at(t, j) =
                  rng.uniform(cfg.burst_log_prec_min, cfg.burst_log_prec_max);
      }
      seg.true_log_prec = log_prec;

      Tensor latent = Tensor::zeros({t_len, d});
      for (int t = 0; t < t_len; ++t)
        for (int j = 0; j < d; ++j)
          latent.at(t, j) =
              h.at(j) + rng.normal(0.0, std::exp(-0.5 * log_prec.at(t, j)));

      if (cfg.obs_map == ObsMap::kIdentity) {
        seg.feats = latent;
      } else {
        seg.feats = Tensor::zeros({t_len, cfg.obs_dim});
        for (int t = 0; t < t_len; ++t)
          for (int a = 0; a < d; ++a) {
            const double za = latent.at(t, a);
            for (int j = 0; j < cfg.obs_dim; ++j)
              seg.feats.at(t, j) += za * mix.at(a, j);
          }
        if (cfg.obs_map == ObsMap::kLinearTanh)
          for (double &v : seg.feats.data) v = std::tanh(v);
      }
      corpus.segments.push_back(std::move(seg));
    }
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Feature files
// ---------------------------------------------------------------------------

void write_features(const Tensor &feats, const std::string &path) {
  if (feats.ndim() != 2)
    throw DimensionError("write_features: expected a [T,F] tensor");
  if (!all_finite(feats.data.data(), feats.data.size()))
    throw NumericError("write_features: non-finite values");
  ByteWriter out(path);
  out.write(kFeatureMagic, 4);
  out.u32(static_cast<uint32_t>(feats.cols()));
  out.u64(static_cast<uint64_t>(feats.rows()));
  for (double v : feats.data) out.f32(static_cast<float>(v));
  out.close();
}

Tensor read_features(const std::string &path) {
  ByteReader in(path);
  char magic[4];
  in.read_exact(magic, 4, "header");
  if (std::memcmp(magic, kFeatureMagic, 4) != 0)
    throw FormatError(path + ": bad magic at offset 0");
  const uint32_t f = in.u32("header");
  const uint64_t t = in.u64("header");
  if (f == 0 || t == 0)
    throw FormatError(path + ": invalid dims at offset 4");
  if (t > (1ull << 32))
    throw FormatError(path + ": implausible frame count at offset 8");
  Tensor feats = Tensor::zeros({static_cast<int>(t), static_cast<int>(f)});
  for (double &v : feats.data) v = in.f32("payload");
  if (!in.at_eof())
    throw FormatError(path + ": trailing bytes at offset " +
                      std::to_string(in.offset()));
  return feats;
}

// ---------------------------------------------------------------------------
// Trials and scores
// ---------------------------------------------------------------------------

std::vector<TrialRecord> load_trials(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open trials file '" + path + "'");
  std::vector<TrialRecord> trials;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string enroll, test, label, extra;
    if (!(ls >> enroll)) continue;  // blank line
    if (!(ls >> test >> label) || (ls >> extra))
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 'enrollID testID target|nontarget'");
    TrialRecord rec;
    rec.enroll_id = enroll;
    rec.test_id = test;
    if (label == "target") rec.target = true;
    else if (label == "nontarget") rec.target = false;
    else
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": unknown label '" + label + "'");
    trials.push_back(std::move(rec));
  }
  return trials;
}

void write_trials(const std::vector<TrialRecord> &trials,
                  const std::string &path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  for (const auto &t : trials)
    out << t.enroll_id << ' ' << t.test_id << ' '
        << (t.target ? "target" : "nontarget") << '\n';
  if (!out) throw FormatError("write failed for '" + path + "'");
}

void write_scores(const std::vector<TrialRecord> &trials,
                  const std::string &path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  char buf[64];
  for (const auto &t : trials) {
    if (!t.scored)
      throw MetricError("write_scores: unscored trial " + t.enroll_id + " " +
                        t.test_id);
    std::snprintf(buf, sizeof(buf), "%.6f", t.score);
    out << t.enroll_id << ' ' << t.test_id << ' ' << buf << '\n';
  }
  if (!out) throw FormatError("write failed for '" + path + "'");
}

void attach_scores(std::vector<TrialRecord> *trials, const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open scores file '" + path + "'");
  std::map<std::pair<std::string, std::string>, double> scores;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string enroll, test, extra;
    double score;
    if (!(ls >> enroll)) continue;
    if (!(ls >> test >> score) || (ls >> extra))
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 'enrollID testID score'");
    if (!scores.emplace(std::make_pair(enroll, test), score).second)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": duplicate score for " + enroll + " " + test);
  }
  for (auto &t : *trials) {
    auto it = scores.find({t.enroll_id, t.test_id});
    if (it == scores.end())
      throw ConfigError("no score for trial " + t.enroll_id + " " + t.test_id);
    t.score = it->second;
    t.scored = true;
  }
}

// ---------------------------------------------------------------------------
// Model checkpoints
// ---------------------------------------------------------------------------

namespace {

std::string serialize_model_config(const ModelConfig &cfg) {
  std::ostringstream out;
  out << "encoder.input_dim = " << cfg.encoder.input_dim << "\n";
  out << "encoder.layers = " << format_layer_specs(cfg.encoder.layers)
      << "\n";
  out << "encoder.aux_hidden = " << cfg.encoder.aux_hidden << "\n";
  out << "encoder.has_aux = " << (cfg.encoder.has_aux ? 1 : 0) << "\n";
  out << "encoder.isotropic = " << (cfg.encoder.isotropic ? 1 : 0) << "\n";
  out << "encoder.aux_tap = " << cfg.encoder.aux_tap << "\n";
  out << "pool.gaussian = " << (cfg.gaussian_pool ? 1 : 0) << "\n";
  out << "pool.kind = " << pool_kind_name(cfg.pool.kind) << "\n";
  out << "pool.with_std = " << (cfg.pool.with_weighted_std ? 1 : 0) << "\n";
  out << "decoder.input_dim = " << cfg.decoder.input_dim << "\n";
  out << "decoder.embed_dim = " << cfg.decoder.embed_dim << "\n";
  out << "decoder.hidden = ";
  for (size_t i = 0; i < cfg.decoder.hidden.size(); ++i)
    out << (i ? "," : "") << cfg.decoder.hidden[i];
  out << "\n";
  out << "decoder.num_classes = " << cfg.decoder.num_classes << "\n";
  return out.str();
}

ModelConfig parse_model_config(const std::string &text) {
  KeyValueConfig kv = KeyValueConfig::from_string(text, "<checkpoint>");
  ModelConfig cfg;
  cfg.encoder.input_dim = kv.require_int("encoder.input_dim");
  cfg.encoder.layers = parse_layer_specs(kv.get_list("encoder.layers"));
  cfg.encoder.aux_hidden = kv.require_int("encoder.aux_hidden");
  cfg.encoder.has_aux = kv.get_bool("encoder.has_aux", true);
  cfg.encoder.isotropic = kv.get_bool("encoder.isotropic", false);
  cfg.encoder.aux_tap = kv.get_int("encoder.aux_tap", -1);
  cfg.gaussian_pool = kv.get_bool("pool.gaussian", true);
  cfg.pool.kind = pool_kind_from_name(kv.get_string("pool.kind", "full"));
  cfg.pool.with_weighted_std = kv.get_bool("pool.with_std", false);
  cfg.decoder.input_dim = kv.require_int("decoder.input_dim");
  cfg.decoder.embed_dim = kv.require_int("decoder.embed_dim");
  cfg.decoder.hidden.clear();
  for (const std::string &item : kv.get_list("decoder.hidden"))
    cfg.decoder.hidden.push_back(std::stoi(item));
  cfg.decoder.num_classes = kv.require_int("decoder.num_classes");
  cfg.validate();
  return cfg;
}

}  // namespace

void save_model(ModelParams &params, const std::string &path) {
  ByteWriter out(path);
  out.write(kModelMagic, 4);
  out.u32(kModelVersion);
  const std::string cfg_text = serialize_model_config(params.cfg);
  out.u32(static_cast<uint32_t>(cfg_text.size()));
  out.write(cfg_text.data(), cfg_text.size());

  uint32_t count = 0;
  params.visit([&](const std::string &, Tensor *) { ++count; });
  out.u32(count);
  params.visit([&](const std::string &name, Tensor *t) {
    out.u32(static_cast<uint32_t>(name.size()));
    out.write(name.data(), name.size());
    out.u32(static_cast<uint32_t>(t->shape.size()));
    for (int d : t->shape) out.u64(static_cast<uint64_t>(d));
    for (double v : t->data) out.f64(v);
  });
  out.close();
}

ModelParams load_model(const std::string &path) {
  ByteReader in(path);
  char magic[4];
  in.read_exact(magic, 4, "header");
  if (std::memcmp(magic, kModelMagic, 4) != 0)
    throw FormatError(path + ": bad magic at offset 0");
  const uint32_t version = in.u32("header");
  if (version != kModelVersion)
    throw FormatError(path + ": unsupported version " +
                      std::to_string(version));
  const uint32_t cfg_len = in.u32("header");
  const std::string cfg_text = in.bytes(cfg_len, "config block");
  ModelConfig cfg = parse_model_config(cfg_text);

  ModelParams params = ModelParams::init(cfg, 0);
  const uint32_t count = in.u32("section count");

  std::map<std::string, Tensor> sections;
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t name_len = in.u32("section header");
    std::string name = in.bytes(name_len, "section name");
    const uint32_t ndims = in.u32(("section '" + name + "'").c_str());
    std::vector<int> shape;
    int64_t numel = 1;
    for (uint32_t d = 0; d < ndims; ++d) {
      const uint64_t dim = in.u64(("section '" + name + "' dims").c_str());
      if (dim == 0 || dim > (1ull << 31))
        throw FormatError(path + ": section '" + name + "' has invalid shape");
      shape.push_back(static_cast<int>(dim));
      numel *= static_cast<int64_t>(dim);
    }
    Tensor t = Tensor::zeros(shape);
    for (int64_t k = 0; k < numel; ++k)
      t.data[static_cast<size_t>(k)] =
          in.f64(("section '" + name + "' data").c_str());
    if (!sections.emplace(std::move(name), std::move(t)).second)
      throw FormatError(path + ": duplicate section");
  }
  if (!in.at_eof())
    throw FormatError(path + ": trailing bytes at offset " +
                      std::to_string(in.offset()));

  params.visit([&](const std::string &name, Tensor *t) {
    auto it = sections.find(name);
    if (it == sections.end())
      throw FormatError(path + ": missing section '" + name + "'");
    if (it->second.shape != t->shape)
      throw FormatError(path + ": shape mismatch in section '" + name + "'");
    t->data = std::move(it->second.data);
    sections.erase(it);
  });
  if (!sections.empty())
    throw FormatError(path + ": unexpected section '" +
                      sections.begin()->first + "'");
  return params;
}

// ---------------------------------------------------------------------------
// Corpus directories and trial generation
// ---------------------------------------------------------------------------

void write_corpus_dir(const Corpus &corpus, const std::string &dir) {
  fs::create_directories(fs::path(dir) / "feats");
  std::ofstream labels(fs::path(dir) / "labels.tsv");
  if (!labels) throw FormatError("cannot write labels.tsv under '" + dir + "'");
  for (const auto &seg : corpus.segments) {
    labels << seg.id << '\t' << speaker_name(seg.speaker) << '\n';
    write_features(seg.feats, (fs::path(dir) / "feats" / (seg.id + ".xvf")).string());
  }
  if (!labels) throw FormatError("write failed for labels.tsv");
}

Corpus read_corpus_dir(const std::string &dir) {
  const fs::path labels_path = fs::path(dir) / "labels.tsv";
  std::ifstream in(labels_path);
  if (!in)
    throw ConfigError("cannot open corpus labels '" + labels_path.string() +
                      "'");
  Corpus corpus;
  std::map<std::string, int> speaker_ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string id, speaker;
    if (!(ls >> id)) continue;
    if (!(ls >> speaker))
      throw ParseError(labels_path.string() + ":" + std::to_string(lineno) +
                       ": expected 'segmentID speaker'");
    Segment seg;
    seg.id = id;
    auto [it, inserted] =
        speaker_ids.emplace(speaker, static_cast<int>(speaker_ids.size()));
    seg.speaker = it->second;
    (void)inserted;
    seg.feats = read_features((fs::path(dir) / "feats" / (id + ".xvf")).string());
    corpus.segments.push_back(std::move(seg));
  }
  corpus.num_speakers = static_cast<int>(speaker_ids.size());
  return corpus;
}

std::vector<TrialRecord> make_trials(const Corpus &corpus,
                                     double nontarget_ratio, uint64_t seed) {
  std::vector<TrialRecord> trials;
  const auto &segs = corpus.segments;
  std::vector<std::pair<int, int>> nontarget_pairs;
  for (size_t i = 0; i < segs.size(); ++i) {
    for (size_t j = i + 1; j < segs.size(); ++j) {
      if (segs[i].speaker == segs[j].speaker) {
        TrialRecord rec;
        rec.enroll_id = segs[i].id;
        rec.test_id = segs[j].id;
        rec.target = true;
        trials.push_back(std::move(rec));
      } else {
        nontarget_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  const size_t want = std::min(
      nontarget_pairs.size(),
      static_cast<size_t>(std::llround(nontarget_ratio * trials.size())));
  Rng rng(seed);
  rng.shuffle(&nontarget_pairs);
  for (size_t k = 0; k < want; ++k) {
    TrialRecord rec;
    rec.enroll_id = segs[static_cast<size_t>(nontarget_pairs[k].first)].id;
    rec.test_id = segs[static_cast<size_t>(nontarget_pairs[k].second)].id;
    rec.target = false;
    trials.push_back(std::move(rec));
  }
  return trials;
}

}  // namespace xivec
