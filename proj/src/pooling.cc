// src/pooling.cc

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

#include "xivec/pooling.h"

#include <algorithm>
#include <cmath>

namespace xivec {

std::string pool_kind_name(PoolKind kind) {
  switch (kind) {
    case PoolKind::kFull: return "full";
    case PoolKind::kNoPrior: return "no_prior";
    case PoolKind::kIsotropic: return "isotropic";
    case PoolKind::kNoPriorIsotropic: return "no_prior_isotropic";
  }
  throw ConfigError("unknown pooling kind");
}

PoolKind pool_kind_from_name(const std::string &name) {
  if (name == "full") return PoolKind::kFull;
  if (name == "no_prior") return PoolKind::kNoPrior;
  if (name == "isotropic") return PoolKind::kIsotropic;
  if (name == "no_prior_isotropic") return PoolKind::kNoPriorIsotropic;
  throw ConfigError("unknown pooling kind '" + name + "'");
}

PoolIds gaussian_pool_forward(Tape &tape, Tape::Id z, Tape::Id log_prec,
                              Tape::Id mu_p, Tape::Id prior_log_prec,
                              const PoolingMode &mode, bool want_sigma) {
  const bool have_frames = z >= 0;
  if (!have_frames && !mode.include_prior())
    throw EmptyInputError("gaussian_pool: empty sequence without a prior");
  if (have_frames) {
    const Tensor &zv = tape.val(z), &lv = tape.val(log_prec);
    if (zv.ndim() != 2 || lv.ndim() != 2 || zv.shape != lv.shape)
      throw DimensionError("gaussian_pool: z and log_prec must agree [T,D]");
  }

  Tape::Id rows_logp, rows_z;
  if (mode.include_prior()) {
    auto prior_lp_row = tape.as_row(prior_log_prec);
    auto prior_mu_row = tape.as_row(mu_p);
    rows_logp = have_frames ? tape.concat_rows(prior_lp_row, log_prec)
                            : prior_lp_row;
    rows_z = have_frames ? tape.concat_rows(prior_mu_row, z) : prior_mu_row;
  } else {
    rows_logp = log_prec;
    rows_z = z;
  }

  PoolIds out;
  out.gains = tape.softmax(rows_logp, 0);
  out.phi = tape.sum_axis0(tape.mul(out.gains, rows_z));
  out.log_ls = tape.logsumexp_axis0(rows_logp);
  if (want_sigma) {
    auto second_moment = tape.sum_axis0(tape.mul(out.gains, tape.square(rows_z)));
    auto var = tape.sub(second_moment, tape.square(out.phi));
    out.sigma_w = tape.sqrt(tape.clamp_min(var, kVarianceFloor));
  }
  return out;
}

std::pair<Tape::Id, Tape::Id> stat_pool_forward(Tape &tape, Tape::Id z) {
  const Tensor &zv = tape.val(z);
  if (zv.ndim() != 2) throw DimensionError("stat_pool: expected [T,D]");
  auto mu = tape.mean_axis0(z);
  auto var = tape.sub(tape.mean_axis0(tape.square(z)), tape.square(mu));
  auto sigma = tape.sqrt(tape.clamp_min(var, kVarianceFloor));
  return {mu, sigma};
}

namespace {

int pooled_dim(const Tensor *log_prec, const PriorParams &prior) {
  if (log_prec != nullptr) {
    if (log_prec->ndim() != 2)
      throw DimensionError("gain_factors: log_prec must be [T,D]");
    return log_prec->cols();
  }
  return prior.log_prec.dim(0);
}

}  // namespace

Tensor gain_factors(const Tensor *log_prec, const PriorParams &prior,
                    const PoolingMode &mode) {
  const int d = pooled_dim(log_prec, prior);
  Tape tape;
  Tape::Id z = -1, lp = -1;
  if (log_prec != nullptr) {
    z = tape.input(Tensor::zeros(log_prec->shape));
    lp = tape.input(*log_prec);
  }
  auto mu = tape.input(Tensor::zeros({d}));
  auto plp = tape.input(prior.log_prec);
  PoolIds ids = gaussian_pool_forward(tape, z, lp, mu, plp, mode, false);
  Tensor gains = tape.val(ids.gains);
  gains.grad.clear();
  return gains;
}

PooledPosterior gaussian_posterior_pool(const Tensor *z,
                                        const Tensor *log_prec,
                                        const PriorParams &prior,
                                        const PoolingMode &mode) {
  if ((z == nullptr) != (log_prec == nullptr))
    throw DimensionError("gaussian_posterior_pool: z and log_prec must both "
                         "be present or both absent");
  Tape tape;
  Tape::Id zi = -1, li = -1;
  if (z != nullptr) {
    zi = tape.input(*z);
    li = tape.input(*log_prec);
  }
  auto mu = tape.input(prior.mu_p);
  auto plp = tape.input(prior.log_prec);
  PoolIds ids = gaussian_pool_forward(tape, zi, li, mu, plp, mode, false);
  PooledPosterior out;
  out.phi = tape.val(ids.phi);
  out.log_prec = tape.val(ids.log_ls);
  out.phi.grad.clear();
  out.log_prec.grad.clear();
  return out;
}

std::pair<Tensor, Tensor> stat_pool(const Tensor &z) {
  Tape tape;
  auto [mu, sigma] = stat_pool_forward(tape, tape.input(z));
  Tensor m = tape.val(mu), s = tape.val(sigma);
  m.grad.clear();
  s.grad.clear();
  return {std::move(m), std::move(s)};
}

Tensor weighted_std(const Tensor &z, const Tensor &gains, const Tensor *mu_p) {
  if (z.ndim() != 2 || gains.ndim() != 2 || gains.cols() != z.cols())
    throw DimensionError("weighted_std: shapes disagree");
  const bool with_prior_row = gains.rows() == z.rows() + 1;
  if (!with_prior_row && gains.rows() != z.rows())
    throw DimensionError("weighted_std: gains rows must be T or T+1");
  if (with_prior_row && mu_p == nullptr)
    throw DimensionError("weighted_std: prior row present but mu_p missing");

  const int d = z.cols();
  Tensor sigma = Tensor::zeros({d});
  for (int j = 0; j < d; ++j) {
    double first = 0.0, second = 0.0;
    int row = 0;
    if (with_prior_row) {
      const double m = mu_p->at(j);
      first += gains.at(0, j) * m;
      second += gains.at(0, j) * m * m;
      row = 1;
    }
    for (int t = 0; t < z.rows(); ++t, ++row) {
      const double v = z.at(t, j);
      first += gains.at(row, j) * v;
      second += gains.at(row, j) * v * v;
    }
    sigma.at(j) = std::sqrt(std::max(second - first * first, kVarianceFloor));
  }
  return sigma;
}

}  // namespace xivec
