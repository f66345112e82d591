// include/xivec/tensor.h

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

#ifndef XIVEC_TENSOR_H_
#define XIVEC_TENSOR_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xivec/error.h"
#include "xivec/rng.h"

namespace xivec {

// Dense row-major float64 tensor. The grad slot is empty until a backward
// pass (or ensure_grad) allocates it; when present it has the same length as
// data. Every primitive checks its output for NaN/Inf, so a Tensor that came
// out of the tape is finite.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;
  std::vector<double> grad;

  Tensor() = default;

  static Tensor zeros(const std::vector<int> &shape);
  static Tensor full(const std::vector<int> &shape, double value);
  static Tensor from_data(const std::vector<int> &shape,
                          std::vector<double> values);
  static Tensor vec(std::vector<double> values);
  // Uniform in [-limit, limit], drawn in row-major order.
  static Tensor rand_uniform(const std::vector<int> &shape, double limit,
                             Rng *rng);

  int ndim() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  int64_t numel() const;
  int rows() const { return shape[0]; }
  int cols() const { return shape[1]; }

  double &at(int i) { return data[static_cast<size_t>(i)]; }
  double at(int i) const { return data[static_cast<size_t>(i)]; }
  double &at(int i, int j) { return data[static_cast<size_t>(i) * cols() + j]; }
  double at(int i, int j) const {
    return data[static_cast<size_t>(i) * cols() + j];
  }
  // 3-D access, shape [K, A, B].
  double &at(int k, int a, int b) {
    return data[(static_cast<size_t>(k) * dim(1) + a) * dim(2) + b];
  }
  double at(int k, int a, int b) const {
    return data[(static_cast<size_t>(k) * dim(1) + a) * dim(2) + b];
  }

  void ensure_grad();  // allocate a zero grad slot if absent
  void zero_grad();    // zero the slot, keeping the allocation
};

bool all_finite(const double *p, size_t n);

// In-place descent update theta <- theta - lr * grad. Tensors without an
// accumulated gradient are left untouched.
void sgd_step(Tensor *t, double lr);
void sgd_step(const std::vector<Tensor *> &params, double lr);

// Reverse-mode tape over Tensors. Usage: bind leaves with param()/input(),
// build the graph with the primitives, then call backward() on a scalar node.
// param() leaves accumulate their gradient into the bound Tensor's grad slot
// so minibatch accumulation across tapes works; input() leaves keep their
// gradient readable via grad_of() until the tape dies. Intermediate gradients
// are released at the end of backward().
class Tape {
 public:
  using Id = int;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Id param(Tensor *p);
  Id input(Tensor v);

  // out[t] = x[t] . W + b          x:[T,A] W:[A,B] b:[B] -> [T,B]
  Id affine(Id x, Id w, Id b);
  // Dilated 1-D convolution over time with edge-replication padding, so the
  // output keeps the input length. kernel:[K,A,B], center tap at K/2.
  Id conv1d(Id x, Id kernel, Id bias, int dilation);
  Id relu(Id x);
  Id softplus(Id x);
  // log(softplus(x)) as one primitive: stays finite for very negative inputs
  // where softplus underflows to zero.
  Id log_softplus(Id x);
  Id exp(Id x);
  Id log(Id x);
  Id sqrt(Id x);
  Id square(Id x);
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);
  Id scale(Id x, double c);
  Id clamp_min(Id x, double floor);
  // Softmax along `axis` of a 1-D or 2-D tensor; output sums to 1 along it.
  Id softmax(Id x, int axis);
  Id logsumexp_axis0(Id x);  // [R,D] -> [D]
  Id sum_axis0(Id x);        // [R,D] -> [D]
  Id mean_axis0(Id x);       // [R,D] -> [D]
  Id sum(Id x);              // -> scalar [1]
  Id concat_rows(Id a, Id b);       // [Ra,D] + [Rb,D] -> [Ra+Rb,D]
  Id concat(Id a, Id b);            // 1-D concat
  Id as_row(Id v);                  // [D] -> [1,D]
  Id flatten(Id x);                 // any -> 1-D
  Id broadcast_col(Id x, int d);    // [T,1] -> [T,d]
  // Cross-entropy of a logit vector against an integer label; equals
  // logsumexp(logits) - logits[label].
  Id cross_entropy(Id logits, int label);

  const Tensor &val(Id id) const;
  // Accumulates d(scale * loss)/d(leaf) into every leaf. Throws NumericError
  // naming the op if a NaN/Inf gradient shows up.
  void backward(Id loss, double scale = 1.0);
  // Gradient of an input() leaf after backward().
  const std::vector<double> &grad_of(Id id) const;

  size_t size() const { return nodes_.size(); }

  // Smallest distance of any relu/clamp_min input to its kink, over every
  // such op recorded so far. Finite-difference checks use this to pick
  // inputs where central differences are valid.
  double min_kink_margin() const { return kink_margin_; }

 private:
  struct Node {
    Tensor value;
    std::vector<double> grad;
    const char *op = "";
    Tensor *external = nullptr;
    bool keep_grad = false;
    std::function<void(Tape &)> backward_fn;
  };

  Id push(Tensor value, const char *op, std::function<void(Tape &)> fn);
  Node &node(Id id);
  const Node &cnode(Id id) const;
  std::vector<double> &grad_buf(Id id);
  void check_id(Id id) const;

  std::vector<Node> nodes_;
  double kink_margin_ = 1e300;
};

}  // namespace xivec

#endif  // XIVEC_TENSOR_H_
