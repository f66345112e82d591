// src/metrics.cc

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

#include "xivec/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xivec {

double cosine_score(const Tensor &e1, const Tensor &e2) {
  if (e1.ndim() != 1 || e2.ndim() != 1 || e1.dim(0) != e2.dim(0))
    throw DimensionError("cosine_score: embeddings must be 1-D of equal dim");
  double dot = 0.0, n1 = 0.0, n2 = 0.0;
  for (int i = 0; i < e1.dim(0); ++i) {
    dot += e1.at(i) * e2.at(i);
    n1 += e1.at(i) * e1.at(i);
    n2 += e2.at(i) * e2.at(i);
  }
  if (n1 == 0.0 || n2 == 0.0)
    throw MetricError("cosine_score: degenerate zero embedding");
  return dot / (std::sqrt(n1) * std::sqrt(n2));
}

namespace {

// ROC operating points for the accept-if-score>=threshold rule, threshold
// sweeping from +inf down through every distinct score. The first point is
// reject-all (Pmiss=1, Pfa=0) and the last is accept-all (0, 1). Everything
// downstream depends only on score order, which is what makes the metrics
// invariant under monotone transforms.
struct RocPoint {
  double threshold;  // +inf for the reject-all point
  double p_miss;
  double p_fa;
};

std::vector<RocPoint> roc_points(const std::vector<TrialRecord> &trials) {
  std::vector<double> targets, nontargets;
  for (const auto &t : trials) {
    if (!t.scored) throw MetricError("detection metrics: unscored trial");
    (t.target ? targets : nontargets).push_back(t.score);
  }
  if (targets.empty() || nontargets.empty())
    throw MetricError("detection metrics: need both target and nontarget "
                      "trials");
  std::sort(targets.begin(), targets.end(), std::greater<double>());
  std::sort(nontargets.begin(), nontargets.end(), std::greater<double>());

  std::vector<double> values;
  values.reserve(targets.size() + nontargets.size());
  std::merge(targets.begin(), targets.end(), nontargets.begin(),
             nontargets.end(), std::back_inserter(values),
             std::greater<double>());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const double nt = static_cast<double>(targets.size());
  const double nn = static_cast<double>(nontargets.size());
  std::vector<RocPoint> points;
  points.push_back({std::numeric_limits<double>::infinity(), 1.0, 0.0});
  size_t ti = 0, ni = 0;  // counts of scores >= current threshold
  for (double v : values) {
    while (ti < targets.size() && targets[ti] >= v) ++ti;
    while (ni < nontargets.size() && nontargets[ni] >= v) ++ni;
    points.push_back({v, (nt - static_cast<double>(ti)) / nt,
                      static_cast<double>(ni) / nn});
  }
  return points;
}

}  // namespace

double compute_eer(const std::vector<TrialRecord> &trials) {
  return compute_det_metrics(trials).eer;
}

double compute_min_dcf(const std::vector<TrialRecord> &trials, double p_target,
                       double c_miss, double c_fa) {
  return compute_det_metrics(trials, p_target, c_miss, c_fa).min_dcf;
}

DetMetrics compute_det_metrics(const std::vector<TrialRecord> &trials,
                               double p_target, double c_miss, double c_fa) {
  if (p_target <= 0.0 || p_target >= 1.0)
    throw MetricError("detection metrics: p_target must lie in (0, 1)");
  const std::vector<RocPoint> points = roc_points(trials);

  DetMetrics out;

  // EER: Pmiss - Pfa decreases monotonically from +1 to -1 along the sweep;
  // interpolate linearly inside the segment where it crosses zero.
  for (size_t i = 1; i < points.size(); ++i) {
    const double d_prev = points[i - 1].p_miss - points[i - 1].p_fa;
    const double d_cur = points[i].p_miss - points[i].p_fa;
    if (d_cur <= 0.0) {
      if (d_cur == 0.0 || d_prev == d_cur) {
        out.eer = points[i].p_miss;
      } else {
        const double lambda = d_prev / (d_prev - d_cur);
        out.eer = points[i - 1].p_miss +
                  lambda * (points[i].p_miss - points[i - 1].p_miss);
      }
      out.eer_threshold = points[i].threshold;
      break;
    }
  }

  const double norm = std::min(c_miss * p_target, c_fa * (1.0 - p_target));
  double best = std::numeric_limits<double>::infinity();
  for (const auto &p : points) {
    const double cost =
        c_miss * p_target * p.p_miss + c_fa * (1.0 - p_target) * p.p_fa;
    if (cost < best) {
      best = cost;
      out.dcf_threshold = p.threshold;
    }
  }
  out.min_dcf = best / norm;
  return out;
}

}  // namespace xivec
