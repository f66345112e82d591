// include/xivec/metrics.h

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

#ifndef XIVEC_METRICS_H_
#define XIVEC_METRICS_H_

#include <vector>

#include "xivec/data_io.h"
#include "xivec/tensor.h"

namespace xivec {

// Cosine similarity in [-1, 1]. Zero-norm embeddings are degenerate.
double cosine_score(const Tensor &e1, const Tensor &e2);

struct DetMetrics {
  double eer = 0.0;
  double min_dcf = 0.0;
  double eer_threshold = 0.0;  // score at the crossing operating point
  double dcf_threshold = 0.0;  // score attaining the minimum cost
};

// Equal error rate from a threshold sweep over the scored trials, with
// linear interpolation between adjacent operating points of the ROC. Every
// trial must be scored; both classes must be present.
double compute_eer(const std::vector<TrialRecord> &trials);

// Minimum normalized detection cost over all thresholds (the trivial
// accept-all / reject-all operating points included, so the result never
// exceeds 1 under this normalization).
double compute_min_dcf(const std::vector<TrialRecord> &trials,
                       double p_target = 0.01, double c_miss = 1.0,
                       double c_fa = 1.0);

DetMetrics compute_det_metrics(const std::vector<TrialRecord> &trials,
                               double p_target = 0.01, double c_miss = 1.0,
                               double c_fa = 1.0);

}  // namespace xivec

#endif  // XIVEC_METRICS_H_
