// src/tensor.cc

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

#include "xivec/tensor.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace xivec {

namespace {

int64_t product(const std::vector<int> &shape) {
  int64_t n = 1;
  for (int d : shape) n *= d;
  return n;
}

void check_positive_shape(const std::vector<int> &shape, const char *where) {
  for (int d : shape) {
    if (d <= 0)
      throw DimensionError(std::string(where) +
                           ": shape dimensions must be positive");
  }
}

double stable_softplus(double v) {
  if (v > 0.0) return v + std::log1p(std::exp(-v));
  return std::log1p(std::exp(v));
}

double sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace

bool all_finite(const double *p, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p[i])) return false;
  }
  return true;
}

Tensor Tensor::zeros(const std::vector<int> &shape) {
  check_positive_shape(shape, "zeros");
  Tensor t;
  t.shape = shape;
  t.data.assign(static_cast<size_t>(product(shape)), 0.0);
  return t;
}

Tensor Tensor::full(const std::vector<int> &shape, double value) {
  Tensor t = zeros(shape);
  std::fill(t.data.begin(), t.data.end(), value);
  return t;
}

Tensor Tensor::from_data(const std::vector<int> &shape,
                         std::vector<double> values) {
  check_positive_shape(shape, "from_data");
  if (static_cast<int64_t>(values.size()) != product(shape))
    throw DimensionError("from_data: value count does not match shape");
  Tensor t;
  t.shape = shape;
  t.data = std::move(values);
  return t;
}

Tensor Tensor::vec(std::vector<double> values) {
  if (values.empty()) throw DimensionError("vec: empty vector");
  Tensor t;
  t.shape = {static_cast<int>(values.size())};
  t.data = std::move(values);
  return t;
}

Tensor Tensor::rand_uniform(const std::vector<int> &shape, double limit,
                            Rng *rng) {
  Tensor t = zeros(shape);
  for (double &v : t.data) v = rng->uniform(-limit, limit);
  return t;
}

int64_t Tensor::numel() const { return product(shape); }

void Tensor::ensure_grad() {
  if (grad.empty()) grad.assign(data.size(), 0.0);
}

void Tensor::zero_grad() {
  if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
}

void sgd_step(Tensor *t, double lr) {
  if (t->grad.empty()) return;
  for (size_t i = 0; i < t->data.size(); ++i) t->data[i] -= lr * t->grad[i];
  if (!all_finite(t->data.data(), t->data.size()))
    throw NumericError("sgd_step: parameter became non-finite");
}

void sgd_step(const std::vector<Tensor *> &params, double lr) {
  for (Tensor *t : params) sgd_step(t, lr);
}

// ---------------------------------------------------------------------------
// Tape
// ---------------------------------------------------------------------------

void Tape::check_id(Id id) const {
  if (id < 0 || static_cast<size_t>(id) >= nodes_.size())
    throw Error("tape: bad node id");
}

Tape::Node &Tape::node(Id id) {
  check_id(id);
  return nodes_[static_cast<size_t>(id)];
}

const Tape::Node &Tape::cnode(Id id) const {
  check_id(id);
  return nodes_[static_cast<size_t>(id)];
}

std::vector<double> &Tape::grad_buf(Id id) {
  Node &n = node(id);
  if (n.grad.empty()) n.grad.assign(n.value.data.size(), 0.0);
  return n.grad;
}

Tape::Id Tape::push(Tensor value, const char *op,
                    std::function<void(Tape &)> fn) {
  if (!all_finite(value.data.data(), value.data.size()))
    throw NumericError(std::string("non-finite output of op '") + op + "'");
  Node n;
  n.value = std::move(value);
  n.op = op;
  n.backward_fn = std::move(fn);
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size()) - 1;
}

Tape::Id Tape::param(Tensor *p) {
  if (p == nullptr) throw Error("param: null tensor");
  Id id = push(*p, "param", nullptr);
  node(id).external = p;
  return id;
}

Tape::Id Tape::input(Tensor v) {
  Id id = push(std::move(v), "input", nullptr);
  node(id).keep_grad = true;
  return id;
}

const Tensor &Tape::val(Id id) const { return cnode(id).value; }

const std::vector<double> &Tape::grad_of(Id id) const {
  return cnode(id).grad;
}

void Tape::backward(Id loss, double scale) {
  const Tensor &lv = val(loss);
  if (lv.numel() != 1)
    throw DimensionError("backward: loss must be a scalar");
  grad_buf(loss)[0] = scale;
  for (Id i = loss; i >= 0; --i) {
    Node &n = node(i);
    if (n.grad.empty()) continue;  // not reached by the loss
    if (!all_finite(n.grad.data(), n.grad.size()))
      throw NumericError(std::string("NaN gradient at op '") + n.op + "'");
    if (n.backward_fn) {
      n.backward_fn(*this);
    } else if (n.external != nullptr) {
      n.external->ensure_grad();
      for (size_t k = 0; k < n.grad.size(); ++k)
        n.external->grad[k] += n.grad[k];
    }
  }
  // Release intermediate gradients; input() leaves keep theirs.
  for (Node &n : nodes_) {
    if (!n.keep_grad && n.external == nullptr) {
      n.grad.clear();
      n.grad.shrink_to_fit();
    }
  }
}

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

Tape::Id Tape::affine(Id x, Id w, Id b) {
  const Tensor &xv = val(x), &wv = val(w), &bv = val(b);
  if (xv.ndim() != 2 || wv.ndim() != 2 || bv.ndim() != 1)
    throw DimensionError("affine: expected x[T,A], W[A,B], b[B]");
  const int t_len = xv.rows(), a_len = xv.cols(), b_len = wv.cols();
  if (wv.rows() != a_len)
    throw DimensionError("affine: inner dimensions disagree");
  if (bv.dim(0) != b_len)
    throw DimensionError("affine: bias length does not match W columns");

  Tensor out = Tensor::zeros({t_len, b_len});
  for (int t = 0; t < t_len; ++t) {
    double *orow = &out.at(t, 0);
    for (int j = 0; j < b_len; ++j) orow[j] = bv.at(j);
    for (int a = 0; a < a_len; ++a) {
      const double xa = xv.at(t, a);
      const double *wrow = &wv.data[static_cast<size_t>(a) * b_len];
      for (int j = 0; j < b_len; ++j) orow[j] += xa * wrow[j];
    }
  }
  Id out_id = push(std::move(out), "affine", nullptr);
  node(out_id).backward_fn = [x, w, b, out_id, t_len, a_len,
                              b_len](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x), &wv = tp.val(w);
    std::vector<double> &gx = tp.grad_buf(x);
    std::vector<double> &gw = tp.grad_buf(w);
    std::vector<double> &gb = tp.grad_buf(b);
    for (int t = 0; t < t_len; ++t) {
      const double *grow = &g[static_cast<size_t>(t) * b_len];
      for (int j = 0; j < b_len; ++j) gb[static_cast<size_t>(j)] += grow[j];
      for (int a = 0; a < a_len; ++a) {
        const double xa = xv.at(t, a);
        const double *wrow = &wv.data[static_cast<size_t>(a) * b_len];
        double s = 0.0;
        double *gwrow = &gw[static_cast<size_t>(a) * b_len];
        for (int j = 0; j < b_len; ++j) {
          s += grow[j] * wrow[j];
          gwrow[j] += xa * grow[j];
        }
        gx[static_cast<size_t>(t) * a_len + a] += s;
      }
    }
  };
  return out_id;
}

Tape::Id Tape::conv1d(Id x, Id kernel, Id bias, int dilation) {
  const Tensor &xv = val(x), &kv = val(kernel), &bv = val(bias);
  if (xv.ndim() != 2 || kv.ndim() != 3 || bv.ndim() != 1)
    throw DimensionError("conv1d: expected x[T,A], kernel[K,A,B], bias[B]");
  const int t_len = xv.rows(), a_len = xv.cols();
  const int k_len = kv.dim(0), b_len = kv.dim(2);
  if (kv.dim(1) != a_len)
    throw DimensionError("conv1d: kernel input dim does not match x");
  if (bv.dim(0) != b_len)
    throw DimensionError("conv1d: bias length does not match kernel output");
  if (dilation < 1) throw DimensionError("conv1d: dilation must be >= 1");
  if (t_len < 1) throw EmptyInputError("conv1d: empty sequence");

  const int center = k_len / 2;
  auto src = [&](int t, int k) {
    int s = t + (k - center) * dilation;
    return std::clamp(s, 0, t_len - 1);  // edge replication
  };

  Tensor out = Tensor::zeros({t_len, b_len});
  for (int t = 0; t < t_len; ++t) {
    double *orow = &out.at(t, 0);
    for (int j = 0; j < b_len; ++j) orow[j] = bv.at(j);
    for (int k = 0; k < k_len; ++k) {
      const int s = src(t, k);
      for (int a = 0; a < a_len; ++a) {
        const double xa = xv.at(s, a);
        const double *krow = &kv.data[(static_cast<size_t>(k) * a_len + a) *
                                      b_len];
        for (int j = 0; j < b_len; ++j) orow[j] += xa * krow[j];
      }
    }
  }
  Id out_id = push(std::move(out), "conv1d", nullptr);
  node(out_id).backward_fn = [x, kernel, bias, out_id, t_len, a_len, k_len,
                              b_len, dilation, center](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x), &kv = tp.val(kernel);
    std::vector<double> &gx = tp.grad_buf(x);
    std::vector<double> &gk = tp.grad_buf(kernel);
    std::vector<double> &gb = tp.grad_buf(bias);
    for (int t = 0; t < t_len; ++t) {
      const double *grow = &g[static_cast<size_t>(t) * b_len];
      for (int j = 0; j < b_len; ++j) gb[static_cast<size_t>(j)] += grow[j];
      for (int k = 0; k < k_len; ++k) {
        int s = std::clamp(t + (k - center) * dilation, 0, t_len - 1);
        for (int a = 0; a < a_len; ++a) {
          const double xa = xv.at(s, a);
          const size_t koff = (static_cast<size_t>(k) * a_len + a) * b_len;
          const double *krow = &kv.data[koff];
          double *gkrow = &gk[koff];
          double sx = 0.0;
          for (int j = 0; j < b_len; ++j) {
            sx += grow[j] * krow[j];
            gkrow[j] += xa * grow[j];
          }
          gx[static_cast<size_t>(s) * a_len + a] += sx;
        }
      }
    }
  };
  return out_id;
}

Tape::Id Tape::relu(Id x) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) {
    kink_margin_ = std::min(kink_margin_, std::fabs(v));
    v = std::max(0.0, v);
  }
  Id out_id = push(std::move(out), "relu", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x);
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i)
      if (xv.data[i] > 0.0) gx[i] += g[i];
  };
  return out_id;
}

Tape::Id Tape::softplus(Id x) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) v = stable_softplus(v);
  Id out_id = push(std::move(out), "softplus", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x);
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * sigmoid(xv.data[i]);
  };
  return out_id;
}

Tape::Id Tape::log_softplus(Id x) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) {
    // log(log1p(e^v)) -> v as v -> -inf, so leave very negative inputs alone.
    if (v > -30.0) v = std::log(stable_softplus(v));
  }
  Id out_id = push(std::move(out), "log_softplus", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x);
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i) {
      double v = xv.data[i];
      double d;
      if (v <= -30.0) {
        d = 1.0;  // sigmoid(v)/softplus(v) -> 1
      } else {
        d = sigmoid(v) / stable_softplus(v);
      }
      gx[i] += g[i] * d;
    }
  };
  return out_id;
}

Tape::Id Tape::exp(Id x) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) v = std::exp(v);
  Id out_id = push(std::move(out), "exp", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &ov = tp.val(out_id);
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * ov.data[i];
  };
  return out_id;
}

Tape::Id Tape::log(Id x) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) v = std::log(v);
  Id out_id = push(std::move(out), "log", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x);
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] / xv.data[i];
  };
  return out_id;
}

Tape::Id Tape::sqrt(Id x) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) v = std::sqrt(v);
  Id out_id = push(std::move(out), "sqrt", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &ov = tp.val(out_id);
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i)
      gx[i] += g[i] * 0.5 / ov.data[i];
  };
  return out_id;
}

Tape::Id Tape::square(Id x) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) v = v * v;
  Id out_id = push(std::move(out), "square", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x);
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * 2.0 * xv.data[i];
  };
  return out_id;
}

Tape::Id Tape::add(Id a, Id b) {
  const Tensor &av = val(a), &bv = val(b);
  if (av.shape != bv.shape) throw DimensionError("add: shape mismatch");
  Tensor out = av;
  out.grad.clear();
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += bv.data[i];
  Id out_id = push(std::move(out), "add", nullptr);
  node(out_id).backward_fn = [a, b, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &ga = tp.grad_buf(a);
    std::vector<double> &gb = tp.grad_buf(b);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] += g[i];
    }
  };
  return out_id;
}

Tape::Id Tape::sub(Id a, Id b) {
  const Tensor &av = val(a), &bv = val(b);
  if (av.shape != bv.shape) throw DimensionError("sub: shape mismatch");
  Tensor out = av;
  out.grad.clear();
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= bv.data[i];
  Id out_id = push(std::move(out), "sub", nullptr);
  node(out_id).backward_fn = [a, b, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &ga = tp.grad_buf(a);
    std::vector<double> &gb = tp.grad_buf(b);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] -= g[i];
    }
  };
  return out_id;
}

Tape::Id Tape::mul(Id a, Id b) {
  const Tensor &av = val(a), &bv = val(b);
  if (av.shape != bv.shape) throw DimensionError("mul: shape mismatch");
  Tensor out = av;
  out.grad.clear();
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= bv.data[i];
  Id out_id = push(std::move(out), "mul", nullptr);
  node(out_id).backward_fn = [a, b, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &av = tp.val(a), &bv = tp.val(b);
    std::vector<double> &ga = tp.grad_buf(a);
    std::vector<double> &gb = tp.grad_buf(b);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i] * bv.data[i];
      gb[i] += g[i] * av.data[i];
    }
  };
  return out_id;
}

Tape::Id Tape::scale(Id x, double c) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) v *= c;
  Id out_id = push(std::move(out), "scale", nullptr);
  node(out_id).backward_fn = [x, c, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * c;
  };
  return out_id;
}

Tape::Id Tape::clamp_min(Id x, double floor) {
  const Tensor &xv = val(x);
  Tensor out = xv;
  out.grad.clear();
  for (double &v : out.data) {
    kink_margin_ = std::min(kink_margin_, std::fabs(v - floor));
    v = std::max(v, floor);
  }
  Id out_id = push(std::move(out), "clamp_min", nullptr);
  node(out_id).backward_fn = [x, floor, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x);
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i)
      if (xv.data[i] > floor) gx[i] += g[i];
  };
  return out_id;
}

Tape::Id Tape::softmax(Id x, int axis) {
  const Tensor &xv = val(x);
  if (xv.ndim() != 1 && xv.ndim() != 2)
    throw DimensionError("softmax: expected 1-D or 2-D input");
  if (axis < 0 || axis >= xv.ndim())
    throw DimensionError("softmax: axis out of range");

  // View the tensor as `slices` independent vectors of length `len` with
  // the given stride, softmax each one.
  const int len = (xv.ndim() == 1) ? xv.dim(0) : xv.dim(axis);
  const int slices = (xv.ndim() == 1) ? 1 : xv.dim(1 - axis);
  const int stride = (xv.ndim() == 1 || axis == 1) ? 1 : xv.cols();
  const int slice_step = (xv.ndim() == 1) ? 0 : ((axis == 1) ? xv.cols() : 1);

  Tensor out = xv;
  out.grad.clear();
  for (int s = 0; s < slices; ++s) {
    double *p = out.data.data() + static_cast<size_t>(s) * slice_step;
    double mx = p[0];
    for (int i = 1; i < len; ++i)
      mx = std::max(mx, p[static_cast<size_t>(i) * stride]);
    double z = 0.0;
    for (int i = 0; i < len; ++i) {
      double &v = p[static_cast<size_t>(i) * stride];
      v = std::exp(v - mx);
      z += v;
    }
    for (int i = 0; i < len; ++i) p[static_cast<size_t>(i) * stride] /= z;
  }
  Id out_id = push(std::move(out), "softmax", nullptr);
  node(out_id).backward_fn = [x, out_id, len, slices, stride,
                              slice_step](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &ov = tp.val(out_id);
    std::vector<double> &gx = tp.grad_buf(x);
    for (int s = 0; s < slices; ++s) {
      const size_t base = static_cast<size_t>(s) * slice_step;
      double dot = 0.0;
      for (int i = 0; i < len; ++i) {
        const size_t k = base + static_cast<size_t>(i) * stride;
        dot += g[k] * ov.data[k];
      }
      for (int i = 0; i < len; ++i) {
        const size_t k = base + static_cast<size_t>(i) * stride;
        gx[k] += ov.data[k] * (g[k] - dot);
      }
    }
  };
  return out_id;
}

Tape::Id Tape::logsumexp_axis0(Id x) {
  const Tensor &xv = val(x);
  if (xv.ndim() != 2) throw DimensionError("logsumexp_axis0: expected 2-D");
  const int r_len = xv.rows(), d_len = xv.cols();
  Tensor out = Tensor::zeros({d_len});
  for (int j = 0; j < d_len; ++j) {
    double mx = xv.at(0, j);
    for (int r = 1; r < r_len; ++r) mx = std::max(mx, xv.at(r, j));
    double z = 0.0;
    for (int r = 0; r < r_len; ++r) z += std::exp(xv.at(r, j) - mx);
    out.at(j) = mx + std::log(z);
  }
  Id out_id = push(std::move(out), "logsumexp_axis0", nullptr);
  node(out_id).backward_fn = [x, out_id, r_len, d_len](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    const Tensor &xv = tp.val(x);
    const Tensor &ov = tp.val(out_id);
    std::vector<double> &gx = tp.grad_buf(x);
    for (int j = 0; j < d_len; ++j) {
      for (int r = 0; r < r_len; ++r) {
        gx[static_cast<size_t>(r) * d_len + j] +=
            g[static_cast<size_t>(j)] * std::exp(xv.at(r, j) - ov.at(j));
      }
    }
  };
  return out_id;
}

Tape::Id Tape::sum_axis0(Id x) {
  const Tensor &xv = val(x);
  if (xv.ndim() != 2) throw DimensionError("sum_axis0: expected 2-D");
  const int r_len = xv.rows(), d_len = xv.cols();
  Tensor out = Tensor::zeros({d_len});
  for (int r = 0; r < r_len; ++r)
    for (int j = 0; j < d_len; ++j) out.at(j) += xv.at(r, j);
  Id out_id = push(std::move(out), "sum_axis0", nullptr);
  node(out_id).backward_fn = [x, out_id, r_len, d_len](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &gx = tp.grad_buf(x);
    for (int r = 0; r < r_len; ++r)
      for (int j = 0; j < d_len; ++j)
        gx[static_cast<size_t>(r) * d_len + j] += g[static_cast<size_t>(j)];
  };
  return out_id;
}

Tape::Id Tape::mean_axis0(Id x) {
  const Tensor &xv = val(x);
  if (xv.ndim() != 2) throw DimensionError("mean_axis0: expected 2-D");
  const int r_len = xv.rows();
  return scale(sum_axis0(x), 1.0 / r_len);
}

Tape::Id Tape::sum(Id x) {
  const Tensor &xv = val(x);
  double s = 0.0;
  for (double v : xv.data) s += v;
  Tensor out = Tensor::from_data({1}, {s});
  Id out_id = push(std::move(out), "sum", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const double g = tp.node(out_id).grad[0];
    std::vector<double> &gx = tp.grad_buf(x);
    for (double &v : gx) v += g;
  };
  return out_id;
}

Tape::Id Tape::concat_rows(Id a, Id b) {
  const Tensor &av = val(a), &bv = val(b);
  if (av.ndim() != 2 || bv.ndim() != 2 || av.cols() != bv.cols())
    throw DimensionError("concat_rows: column counts disagree");
  const int ra = av.rows(), rb = bv.rows(), d = av.cols();
  Tensor out = Tensor::zeros({ra + rb, d});
  std::copy(av.data.begin(), av.data.end(), out.data.begin());
  std::copy(bv.data.begin(), bv.data.end(),
            out.data.begin() + static_cast<int64_t>(ra) * d);
  Id out_id = push(std::move(out), "concat_rows", nullptr);
  node(out_id).backward_fn = [a, b, out_id, ra, d](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &ga = tp.grad_buf(a);
    std::vector<double> &gb = tp.grad_buf(b);
    const size_t na = ga.size();
    for (size_t i = 0; i < na; ++i) ga[i] += g[i];
    for (size_t i = 0; i < gb.size(); ++i) gb[i] += g[na + i];
  };
  return out_id;
}

Tape::Id Tape::concat(Id a, Id b) {
  const Tensor &av = val(a), &bv = val(b);
  if (av.ndim() != 1 || bv.ndim() != 1)
    throw DimensionError("concat: expected 1-D inputs");
  Tensor out = Tensor::zeros({av.dim(0) + bv.dim(0)});
  std::copy(av.data.begin(), av.data.end(), out.data.begin());
  std::copy(bv.data.begin(), bv.data.end(), out.data.begin() + av.dim(0));
  Id out_id = push(std::move(out), "concat", nullptr);
  node(out_id).backward_fn = [a, b, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &ga = tp.grad_buf(a);
    std::vector<double> &gb = tp.grad_buf(b);
    const size_t na = ga.size();
    for (size_t i = 0; i < na; ++i) ga[i] += g[i];
    for (size_t i = 0; i < gb.size(); ++i) gb[i] += g[na + i];
  };
  return out_id;
}

Tape::Id Tape::as_row(Id v) {
  const Tensor &vv = val(v);
  if (vv.ndim() != 1) throw DimensionError("as_row: expected 1-D input");
  Tensor out;
  out.shape = {1, vv.dim(0)};
  out.data = vv.data;
  Id out_id = push(std::move(out), "as_row", nullptr);
  node(out_id).backward_fn = [v, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &gv = tp.grad_buf(v);
    for (size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
  };
  return out_id;
}

Tape::Id Tape::flatten(Id x) {
  const Tensor &xv = val(x);
  Tensor out;
  out.shape = {static_cast<int>(xv.numel())};
  out.data = xv.data;
  Id out_id = push(std::move(out), "flatten", nullptr);
  node(out_id).backward_fn = [x, out_id](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &gx = tp.grad_buf(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
  };
  return out_id;
}

Tape::Id Tape::broadcast_col(Id x, int d) {
  const Tensor &xv = val(x);
  if (xv.ndim() != 2 || xv.cols() != 1)
    throw DimensionError("broadcast_col: expected [T,1] input");
  if (d < 1) throw DimensionError("broadcast_col: target width must be >= 1");
  const int t_len = xv.rows();
  Tensor out = Tensor::zeros({t_len, d});
  for (int t = 0; t < t_len; ++t) {
    const double v = xv.at(t, 0);
    for (int j = 0; j < d; ++j) out.at(t, j) = v;
  }
  Id out_id = push(std::move(out), "broadcast_col", nullptr);
  node(out_id).backward_fn = [x, out_id, t_len, d](Tape &tp) {
    const std::vector<double> &g = tp.node(out_id).grad;
    std::vector<double> &gx = tp.grad_buf(x);
    for (int t = 0; t < t_len; ++t) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += g[static_cast<size_t>(t) * d + j];
      gx[static_cast<size_t>(t)] += s;
    }
  };
  return out_id;
}

Tape::Id Tape::cross_entropy(Id logits, int label) {
  const Tensor &lv = val(logits);
  if (lv.ndim() != 1) throw DimensionError("cross_entropy: expected 1-D logits");
  const int c_len = lv.dim(0);
  if (label < 0 || label >= c_len)
    throw DimensionError("cross_entropy: label out of range");
  double mx = lv.at(0);
  for (int i = 1; i < c_len; ++i) mx = std::max(mx, lv.at(i));
  double z = 0.0;
  for (int i = 0; i < c_len; ++i) z += std::exp(lv.at(i) - mx);
  const double lse = mx + std::log(z);
  Tensor out = Tensor::from_data({1}, {lse - lv.at(label)});
  Id out_id = push(std::move(out), "cross_entropy", nullptr);
  node(out_id).backward_fn = [logits, label, out_id, c_len, mx, lse](Tape &tp) {
    const double g = tp.node(out_id).grad[0];
    const Tensor &lv = tp.val(logits);
    std::vector<double> &gl = tp.grad_buf(logits);
    for (int i = 0; i < c_len; ++i) {
      double p = std::exp(lv.at(i) - lse);
      gl[static_cast<size_t>(i)] += g * (p - (i == label ? 1.0 : 0.0));
    }
  };
  return out_id;
}

}  // namespace xivec
