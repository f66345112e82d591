// include/xivec/pooling.h

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

#ifndef XIVEC_POOLING_H_
#define XIVEC_POOLING_H_

#include <string>
#include <utility>

#include "xivec/encoder.h"
#include "xivec/tensor.h"

namespace xivec {

// Variance floor applied before square roots in the pooled statistics, so a
// constant sequence keeps a finite gradient.
inline constexpr double kVarianceFloor = 1e-10;

// System-level pooling variant. `isotropic` is realized in the encoder (the
// aux head emits one shared log-precision per frame); the pooling math itself
// only depends on whether the prior row participates.
enum class PoolKind { kFull, kNoPrior, kIsotropic, kNoPriorIsotropic };

struct PoolingMode {
  PoolKind kind = PoolKind::kFull;
  bool with_weighted_std = false;

  bool include_prior() const {
    return kind == PoolKind::kFull || kind == PoolKind::kIsotropic;
  }
  bool isotropic() const {
    return kind == PoolKind::kIsotropic || kind == PoolKind::kNoPriorIsotropic;
  }
};

std::string pool_kind_name(PoolKind kind);
PoolKind pool_kind_from_name(const std::string &name);

// Trainable prior over the utterance latent; both vectors start at zero and
// receive gradients through the pooling layer.
struct PriorParams {
  Tensor mu_p;      // [D] prior mean
  Tensor log_prec;  // [D] prior diagonal log-precision

  static PriorParams init(int dim) {
    PriorParams p;
    p.mu_p = Tensor::zeros({dim});
    p.log_prec = Tensor::zeros({dim});
    return p;
  }
};

// Posterior of the utterance latent: mean and diagonal log-precision.
struct PooledPosterior {
  Tensor phi;       // [D]
  Tensor log_prec;  // [D] log of the summed precisions
};

struct PoolIds {
  Tape::Id gains = -1;    // [(T+1) x D] with the prior row, else [T x D]
  Tape::Id phi = -1;      // [D]
  Tape::Id log_ls = -1;   // [D]
  Tape::Id sigma_w = -1;  // [D] gain-weighted std, only when requested
};

// Gaussian posterior pooling on the tape. The gains are a per-dimension
// softmax over log-precisions across the temporal index (prior joins as row
// zero with z_0 = mu_p); phi is the gain-weighted sum of the rows, and the
// posterior log-precision is the log-sum-exp of the row log-precisions. Both
// are computed in the log domain for stability; equivalence with the direct
// linear-domain evaluation is a tested property.
PoolIds gaussian_pool_forward(Tape &tape, Tape::Id z, Tape::Id log_prec,
                              Tape::Id mu_p, Tape::Id prior_log_prec,
                              const PoolingMode &mode, bool want_sigma);

// Mean / population-stddev pooling on the tape (the x-vector baseline).
std::pair<Tape::Id, Tape::Id> stat_pool_forward(Tape &tape, Tape::Id z);

// --- Eager wrappers (no gradients retained) ---

// Gains for a [T,D] log-precision matrix. Pass z/log_prec as nullptr for an
// empty sequence (T = 0): allowed only when the prior row participates.
Tensor gain_factors(const Tensor *log_prec, const PriorParams &prior,
                    const PoolingMode &mode);
PooledPosterior gaussian_posterior_pool(const Tensor *z,
                                        const Tensor *log_prec,
                                        const PriorParams &prior,
                                        const PoolingMode &mode);
inline PooledPosterior gaussian_posterior_pool(const EncoderOutput &enc,
                                               const PriorParams &prior,
                                               const PoolingMode &mode) {
  return gaussian_posterior_pool(&enc.z, &enc.log_prec, prior, mode);
}

// mu and population standard deviation (divide by T) per dimension.
std::pair<Tensor, Tensor> stat_pool(const Tensor &z);

// Gain-weighted standard deviation. `gains` must come from gain_factors over
// the same sequence; when it carries the prior row, mu_p supplies z_0.
Tensor weighted_std(const Tensor &z, const Tensor &gains, const Tensor *mu_p);

}  // namespace xivec

#endif  // XIVEC_POOLING_H_
