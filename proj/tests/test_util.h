// tests/test_util.h

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

#ifndef XIVEC_TESTS_TEST_UTIL_H_
#define XIVEC_TESTS_TEST_UTIL_H_

#include <cmath>
#include <functional>
#include <vector>

#include "xivec/rng.h"
#include "xivec/tensor.h"

namespace xivec {
namespace testutil {

// Random tensor with entries in [-range, range]. With `margin` > 0, entries
// are pushed away from zero by at least that much, which keeps central
// differences off the kinks of relu/clamp style ops.
inline Tensor random_tensor(const std::vector<int> &shape, Rng *rng,
                            double range = 1.0, double margin = 0.0) {
  Tensor t = Tensor::zeros(shape);
  for (double &v : t.data) {
    v = rng->uniform(-range, range);
    if (margin > 0.0 && std::fabs(v) < margin) v += (v >= 0.0 ? margin : -margin);
  }
  return t;
}

// Central finite-difference check of d(loss)/d(params). `run` must evaluate
// the scalar loss from the current parameter values; when `with_grad` is set
// it must also accumulate gradients into the parameters' grad slots (after
// zeroing them). Returns the worst relative error over all entries.
inline double max_fd_rel_err(const std::vector<Tensor *> &params,
                             const std::function<double(bool with_grad)> &run,
                             double eps = 1e-5) {
  for (Tensor *p : params) {
    p->ensure_grad();
    p->zero_grad();
  }
  run(true);
  double worst = 0.0;
  for (Tensor *p : params) {
    for (size_t i = 0; i < p->data.size(); ++i) {
      const double saved = p->data[i];
      p->data[i] = saved + eps;
      const double lp = run(false);
      p->data[i] = saved - eps;
      const double lm = run(false);
      p->data[i] = saved;
      const double fd = (lp - lm) / (2.0 * eps);
      const double g = p->grad[i];
      const double denom = std::max({std::fabs(fd), std::fabs(g), 1e-6});
      worst = std::max(worst, std::fabs(fd - g) / denom);
    }
  }
  return worst;
}

inline bool approx(double a, double b, double tol = 1e-9) {
  return std::fabs(a - b) <= tol;
}

inline bool approx_rel(double a, double b, double rel = 1e-9) {
  return std::fabs(a - b) <= rel * std::max({std::fabs(a), std::fabs(b), 1.0});
}

}  // namespace testutil
}  // namespace xivec

#endif  // XIVEC_TESTS_TEST_UTIL_H_
