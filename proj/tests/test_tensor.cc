// tests/test_tensor.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "test_util.h"
#include "xivec/tensor.h"

using namespace xivec;
using testutil::max_fd_rel_err;
using testutil::random_tensor;

TEST_CASE("tensor basics and invariants") {
  Tensor t = Tensor::zeros({2, 3});
  CHECK(t.numel() == 6);
  CHECK(t.grad.empty());
  t.ensure_grad();
  CHECK(t.grad.size() == 6);
  CHECK_THROWS_AS(Tensor::zeros({2, 0}), DimensionError);
  CHECK_THROWS_AS(Tensor::from_data({2, 2}, {1.0, 2.0}), DimensionError);
}

TEST_CASE("affine: identity, bias shift, hand matmul") {
  Tape tp;
  auto x = tp.input(Tensor::from_data({1, 2}, {1, 2}));

  SUBCASE("identity") {
    auto w = tp.input(Tensor::from_data({2, 2}, {1, 0, 0, 1}));
    auto b = tp.input(Tensor::vec({0, 0}));
    auto y = tp.affine(x, w, b);
    CHECK(tp.val(y).at(0, 0) == 1.0);
    CHECK(tp.val(y).at(0, 1) == 2.0);
  }
  SUBCASE("bias shift") {
    auto w = tp.input(Tensor::from_data({2, 2}, {1, 0, 0, 1}));
    auto b = tp.input(Tensor::vec({3, 4}));
    auto y = tp.affine(x, w, b);
    CHECK(tp.val(y).at(0, 0) == 4.0);
    CHECK(tp.val(y).at(0, 1) == 6.0);
  }
  SUBCASE("hand matmul") {
    // [1,2] . [[1,1],[1,-1]] = [3,-1]
    auto w = tp.input(Tensor::from_data({2, 2}, {1, 1, 1, -1}));
    auto b = tp.input(Tensor::vec({0, 0}));
    auto y = tp.affine(x, w, b);
    CHECK(tp.val(y).at(0, 0) == 3.0);
    CHECK(tp.val(y).at(0, 1) == -1.0);
  }
  SUBCASE("shape mismatch") {
    auto w = tp.input(Tensor::from_data({3, 2}, {1, 0, 0, 1, 0, 0}));
    auto b = tp.input(Tensor::vec({0, 0}));
    CHECK_THROWS_AS(tp.affine(x, w, b), DimensionError);
  }
}

TEST_CASE("conv1d: identity kernel, edge replication, dilation") {
  Tape tp;
  SUBCASE("K=1 identity map") {
    auto x = tp.input(Tensor::from_data({3, 2}, {1, 2, 3, 4, 5, 6}));
    auto k = tp.input(Tensor::from_data({1, 2, 2}, {1, 0, 0, 1}));
    auto b = tp.input(Tensor::vec({0, 0}));
    auto y = tp.conv1d(x, k, b, 1);
    for (int i = 0; i < 6; ++i) CHECK(tp.val(y).data[i] == tp.val(x).data[i]);
  }
  SUBCASE("moving average with replicated edges") {
    // Hand evaluation: out = [4/3, 2, 3, 11/3]
    auto x = tp.input(Tensor::from_data({4, 1}, {1, 2, 3, 4}));
    auto k = tp.input(Tensor::from_data({3, 1, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
    auto b = tp.input(Tensor::vec({0}));
    auto y = tp.conv1d(x, k, b, 1);
    CHECK(tp.val(y).at(0, 0) == doctest::Approx(4.0 / 3).epsilon(1e-12));
    CHECK(tp.val(y).at(1, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(tp.val(y).at(2, 0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(tp.val(y).at(3, 0) == doctest::Approx(11.0 / 3).epsilon(1e-12));
  }
  SUBCASE("dilated taps shift an impulse") {
    // First tap at offset -2 with dilation 2 moves the impulse from t=2 to t=4.
    auto x = tp.input(Tensor::from_data({5, 1}, {0, 0, 1, 0, 0}));
    auto k = tp.input(Tensor::from_data({3, 1, 1}, {1, 0, 0}));
    auto b = tp.input(Tensor::vec({0}));
    auto y = tp.conv1d(x, k, b, 2);
    for (int t = 0; t < 4; ++t) CHECK(tp.val(y).at(t, 0) == 0.0);
    CHECK(tp.val(y).at(4, 0) == 1.0);
  }
  SUBCASE("empty sequence rejected") {
    CHECK_THROWS_AS(Tensor::zeros({0, 1}), DimensionError);
  }
}

TEST_CASE("activations: relu and softplus analytic points") {
  Tape tp;
  auto x = tp.input(Tensor::vec({-1, 0, 2}));
  auto r = tp.relu(x);
  CHECK(tp.val(r).at(0) == 0.0);
  CHECK(tp.val(r).at(1) == 0.0);
  CHECK(tp.val(r).at(2) == 2.0);

  auto s0 = tp.softplus(tp.input(Tensor::vec({0.0})));
  CHECK(tp.val(s0).at(0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Linear regime: softplus(30) = 30 + log1p(e^-30), within 1e-9 of 30.
  auto s30 = tp.softplus(tp.input(Tensor::vec({30.0})));
  CHECK(std::fabs(tp.val(s30).at(0) - 30.0) < 1e-9);

  // Very negative input stays finite through log_softplus.
  auto ls = tp.log_softplus(tp.input(Tensor::vec({-800.0})));
  CHECK(tp.val(ls).at(0) == -800.0);
}

TEST_CASE("softmax: uniform, hand values, shift invariance, sums to one") {
  Tape tp;
  SUBCASE("equal inputs") {
    auto y = tp.softmax(tp.input(Tensor::vec({5, 5, 5, 5})), 0);
    for (int i = 0; i < 4; ++i)
      CHECK(tp.val(y).at(i) == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("hand exponentiation [0, ln2] -> [1/3, 2/3]") {
    auto y = tp.softmax(tp.input(Tensor::vec({0.0, std::log(2.0)})), 0);
    CHECK(tp.val(y).at(0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(tp.val(y).at(1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  }
  SUBCASE("shift invariance and normalization, randomized") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      int r = 1 + rng.uniform_int(6), c = 1 + rng.uniform_int(6);
      Tensor m = random_tensor({r, c}, &rng, 8.0);
      Tensor shifted = m;
      const double shift = rng.uniform(-5.0, 5.0);
      int axis = rng.uniform_int(2);
      for (double &v : shifted.data) v += shift;
      Tape t2;
      auto a = t2.softmax(t2.input(m), axis);
      auto b = t2.softmax(t2.input(shifted), axis);
      for (size_t i = 0; i < t2.val(a).data.size(); ++i)
        CHECK(std::fabs(t2.val(a).data[i] - t2.val(b).data[i]) < 1e-12);
      // Sum along the axis is 1 +- 1e-12.
      const Tensor &av = t2.val(a);
      int slices = (axis == 0) ? c : r;
      for (int s = 0; s < slices; ++s) {
        double sum = 0.0;
        int len = (axis == 0) ? r : c;
        for (int i = 0; i < len; ++i)
          sum += (axis == 0) ? av.at(i, s) : av.at(s, i);
        CHECK(std::fabs(sum - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("backprop: linear case, zero for unused params") {
  // loss = sum(x . W): dL/dW[a][b] = x[a] summed over rows -> outer structure.
  Tensor w = Tensor::from_data({2, 2}, {0.5, -0.25, 1.5, 2.0});
  Tensor unused = Tensor::from_data({2}, {3.0, 4.0});
  w.ensure_grad();
  unused.ensure_grad();
  Tape tp;
  auto xs = tp.input(Tensor::from_data({2, 2}, {1, 2, 3, 4}));
  auto wid = tp.param(&w);
  auto b = tp.input(Tensor::vec({0, 0}));
  (void)tp.param(&unused);
  auto loss = tp.sum(tp.affine(xs, wid, b));
  tp.backward(loss);
  // grad W[a][b] = sum_t x[t][a]
  CHECK(w.grad[0] == 4.0);  // column a=0: 1+3
  CHECK(w.grad[1] == 4.0);
  CHECK(w.grad[2] == 6.0);  // column a=1: 2+4
  CHECK(w.grad[3] == 6.0);
  CHECK(unused.grad[0] == 0.0);
  CHECK(unused.grad[1] == 0.0);
}

TEST_CASE("backprop: finite differences on a 2-layer net") {
  Rng rng(11);
  Tensor w1 = random_tensor({3, 4}, &rng);
  Tensor b1 = random_tensor({4}, &rng);
  Tensor w2 = random_tensor({4, 2}, &rng);
  Tensor b2 = random_tensor({2}, &rng);
  Tensor x = random_tensor({5, 3}, &rng, 1.0, 1e-2);

  auto run = [&](bool with_grad) {
    if (with_grad)
      for (Tensor *p : {&w1, &b1, &w2, &b2}) p->zero_grad();
    Tape tp;
    auto xi = tp.input(x);
    auto h = tp.relu(tp.affine(xi, tp.param(&w1), tp.param(&b1)));
    auto y = tp.affine(h, tp.param(&w2), tp.param(&b2));
    auto loss = tp.sum(tp.square(y));
    if (with_grad) tp.backward(loss);
    return tp.val(loss).at(0);
  };
  double err = max_fd_rel_err({&w1, &b1, &w2, &b2}, run);
  CHECK(err < 1e-4);
}

TEST_CASE("gradcheck: every primitive against central differences") {
  Rng rng(23);
  // Each entry builds a scalar loss through one primitive from a parameter.
  struct Case {
    const char *name;
    std::function<double(Tensor *, bool)> run;
    double range;
    double margin;
  };
  auto weighted_sum = [](Tape &tp, Tape::Id y, Tensor *coef) {
    // Fixed random projection to a scalar so gradients are non-uniform.
    auto c = tp.input(*coef);
    auto flat_y = tp.flatten(y);
    return tp.sum(tp.mul(flat_y, c));
  };

  std::vector<Case> cases;
  auto add_case = [&](const char *name, double range, double margin,
                      std::function<Tape::Id(Tape &, Tape::Id)> op) {
    cases.push_back({name,
                     [op, weighted_sum](Tensor *p, bool with_grad) {
                       static thread_local Tensor coef;
                       Tape tp;
                       auto x = tp.param(p);
                       auto y = op(tp, x);
                       Rng crng(99);
                       coef = random_tensor(
                           {static_cast<int>(tp.val(y).numel())}, &crng, 1.0);
                       auto loss = weighted_sum(tp, y, &coef);
                       if (with_grad) tp.backward(loss);
                       return tp.val(loss).at(0);
                     },
                     range, margin});
  };

  add_case("relu", 2.0, 1e-2, [](Tape &t, Tape::Id x) { return t.relu(x); });
  add_case("softplus", 4.0, 0.0,
           [](Tape &t, Tape::Id x) { return t.softplus(x); });
  add_case("log_softplus", 4.0, 0.0,
           [](Tape &t, Tape::Id x) { return t.log_softplus(x); });
  add_case("exp", 2.0, 0.0, [](Tape &t, Tape::Id x) { return t.exp(x); });
  add_case("square", 2.0, 0.0, [](Tape &t, Tape::Id x) { return t.square(x); });
  add_case("scale", 2.0, 0.0,
           [](Tape &t, Tape::Id x) { return t.scale(x, -1.7); });
  add_case("clamp_min", 2.0, 1e-2,
           [](Tape &t, Tape::Id x) { return t.clamp_min(x, 0.0); });
  add_case("softmax0", 3.0, 0.0,
           [](Tape &t, Tape::Id x) { return t.softmax(x, 0); });
  add_case("softmax1", 3.0, 0.0,
           [](Tape &t, Tape::Id x) { return t.softmax(x, 1); });
  add_case("logsumexp", 3.0, 0.0,
           [](Tape &t, Tape::Id x) { return t.logsumexp_axis0(x); });
  add_case("sum_axis0", 2.0, 0.0,
           [](Tape &t, Tape::Id x) { return t.sum_axis0(x); });
  add_case("mean_axis0", 2.0, 0.0,
           [](Tape &t, Tape::Id x) { return t.mean_axis0(x); });
  for (auto &c : cases) {
    CAPTURE(c.name);
    for (int trial = 0; trial < 5; ++trial) {
      int r = 2 + rng.uniform_int(4), cdim = 1 + rng.uniform_int(4);
      Tensor p = random_tensor({r, cdim}, &rng, c.range, c.margin);
      auto run = [&](bool g) { return c.run(&p, g); };
      double err = max_fd_rel_err({&p}, run);
      CHECK_MESSAGE(err < 1e-4, c.name << " trial " << trial);
    }
  }

  // broadcast_col wants a [T,1] input.
  for (int trial = 0; trial < 5; ++trial) {
    Tensor p = random_tensor({3 + trial, 1}, &rng);
    auto run = [&](bool with_grad) {
      if (with_grad) p.zero_grad();
      Tape tp;
      auto y = tp.broadcast_col(tp.param(&p), 4);
      auto loss = tp.sum(tp.square(y));
      if (with_grad) tp.backward(loss);
      return tp.val(loss).at(0);
    };
    CHECK(max_fd_rel_err({&p}, run) < 1e-4);
  }

  // Positive-domain primitives.
  for (const char *name : {"log", "sqrt"}) {
    CAPTURE(name);
    for (int trial = 0; trial < 5; ++trial) {
      int n = 2 + rng.uniform_int(6);
      Tensor p = Tensor::zeros({n});
      for (double &v : p.data) v = rng.uniform(0.2, 3.0);
      auto run = [&](bool with_grad) {
        Tape tp;
        auto x = tp.param(&p);
        auto y = (std::strcmp(name, "log") == 0) ? tp.log(x) : tp.sqrt(x);
        auto loss = tp.sum(tp.square(y));
        if (with_grad) {
          p.zero_grad();
          tp.backward(loss);
        }
        return tp.val(loss).at(0);
      };
      CHECK(max_fd_rel_err({&p}, run) < 1e-4);
    }
  }

  // Multi-input primitives: affine, conv1d, add/sub/mul, concat, cross_entropy.
  for (int trial = 0; trial < 5; ++trial) {
    Tensor x = random_tensor({4, 3}, &rng);
    Tensor w = random_tensor({3, 2}, &rng);
    Tensor b = random_tensor({2}, &rng);
    auto run = [&](bool with_grad) {
      if (with_grad)
        for (Tensor *p : {&x, &w, &b}) p->zero_grad();
      Tape tp;
      auto y = tp.affine(tp.param(&x), tp.param(&w), tp.param(&b));
      auto loss = tp.sum(tp.square(y));
      if (with_grad) tp.backward(loss);
      return tp.val(loss).at(0);
    };
    CHECK(max_fd_rel_err({&x, &w, &b}, run) < 1e-4);
  }
  for (int dilation : {1, 2, 3}) {
    Tensor x = random_tensor({7, 2}, &rng);
    Tensor k = random_tensor({3, 2, 4}, &rng);
    Tensor b = random_tensor({4}, &rng);
    auto run = [&](bool with_grad) {
      if (with_grad)
        for (Tensor *p : {&x, &k, &b}) p->zero_grad();
      Tape tp;
      auto y = tp.conv1d(tp.param(&x), tp.param(&k), tp.param(&b), dilation);
      auto loss = tp.sum(tp.square(y));
      if (with_grad) tp.backward(loss);
      return tp.val(loss).at(0);
    };
    CHECK(max_fd_rel_err({&x, &k, &b}, run) < 1e-4);
  }
  {
    Tensor a = random_tensor({3, 2}, &rng), b = random_tensor({3, 2}, &rng);
    auto run = [&](bool with_grad) {
      if (with_grad)
        for (Tensor *p : {&a, &b}) p->zero_grad();
      Tape tp;
      auto ai = tp.param(&a), bi = tp.param(&b);
      auto y = tp.mul(tp.add(ai, bi), tp.sub(ai, bi));
      auto loss = tp.sum(tp.square(y));
      if (with_grad) tp.backward(loss);
      return tp.val(loss).at(0);
    };
    CHECK(max_fd_rel_err({&a, &b}, run) < 1e-4);
  }
  {
    Tensor a = random_tensor({4}, &rng), b = random_tensor({3}, &rng);
    Tensor m = random_tensor({2, 3}, &rng);
    auto run = [&](bool with_grad) {
      if (with_grad)
        for (Tensor *p : {&a, &b, &m}) p->zero_grad();
      Tape tp;
      auto cat = tp.concat(tp.param(&a), tp.param(&b));
      auto rows = tp.concat_rows(tp.as_row(tp.param(&b)), tp.param(&m));
      auto loss =
          tp.sum(tp.square(tp.concat(cat, tp.flatten(rows))));
      if (with_grad) tp.backward(loss);
      return tp.val(loss).at(0);
    };
    CHECK(max_fd_rel_err({&a, &b, &m}, run) < 1e-4);
  }
  for (int label = 0; label < 3; ++label) {
    Tensor logits = random_tensor({3}, &rng, 3.0);
    auto run = [&](bool with_grad) {
      if (with_grad) logits.zero_grad();
      Tape tp;
      auto loss = tp.cross_entropy(tp.param(&logits), label);
      if (with_grad) tp.backward(loss);
      return tp.val(loss).at(0);
    };
    CHECK(max_fd_rel_err({&logits}, run) < 1e-4);
  }
}

TEST_CASE("backprop: NaN poisoning is reported with the op name") {
  Tensor p = Tensor::vec({-1.0});
  Tape tp;
  auto x = tp.param(&p);
  CHECK_THROWS_AS(tp.log(x), NumericError);  // log of a negative value
}

TEST_CASE("sgd_step: arithmetic and convergence") {
  SUBCASE("lr=0 leaves parameters bit-identical") {
    Tensor t = Tensor::vec({0.1, -2.5, 3.75});
    Tensor before = t;
    t.ensure_grad();
    t.grad = {1.0, 2.0, 3.0};
    sgd_step(&t, 0.0);
    CHECK(std::memcmp(t.data.data(), before.data.data(),
                      t.data.size() * sizeof(double)) == 0);
  }
  SUBCASE("single step arithmetic") {
    Tensor t = Tensor::vec({1.0});
    t.ensure_grad();
    t.grad = {2.0};
    sgd_step(&t, 0.1);
    CHECK(t.at(0) == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("quadratic loss (theta-3)^2 converges monotonically") {
    Tensor theta = Tensor::vec({0.0});
    double prev_dist = 3.0;
    for (int step = 0; step < 100; ++step) {
      theta.ensure_grad();
      theta.zero_grad();
      Tape tp;
      auto th = tp.param(&theta);
      auto three = tp.input(Tensor::vec({3.0}));
      auto loss = tp.sum(tp.square(tp.sub(th, three)));
      tp.backward(loss);
      sgd_step(&theta, 0.1);
      double dist = std::fabs(theta.at(0) - 3.0);
      CHECK(dist < prev_dist);
      prev_dist = dist;
    }
    CHECK(prev_dist < 1e-8);
  }
}

TEST_CASE("determinism: identical seeds give bit-identical graphs") {
  auto build = [](uint64_t seed) {
    Rng rng(seed);
    Tensor x = random_tensor({6, 5}, &rng);
    Tensor k = random_tensor({3, 5, 4}, &rng);
    Tensor b = random_tensor({4}, &rng);
    Tape tp;
    auto y = tp.softmax(
        tp.relu(tp.conv1d(tp.input(x), tp.input(k), tp.input(b), 2)), 0);
    return tp.val(y).data;
  };
  auto a = build(321), b = build(321), c = build(322);
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  CHECK(a != c);
}
