#include <cmath>
#include <random>

#include "doctest.h"
#include "kgqr/error.hpp"
#include "kgqr/numerics/adam.hpp"
#include "kgqr/numerics/tape.hpp"
#include "oracles.hpp"

using namespace kgqr;
using namespace kgqr::numerics;

TEST_CASE("tensor construction and shape checks") {
  Tensor t(2, 3, 1.5);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.size() == 6);
  CHECK_THROWS_AS(Tensor(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
  CHECK_THROWS_AS((Tensor{{1, 2}, {3}}), DimensionError);
  CHECK_THROWS_AS(t.item(), DimensionError);
  CHECK(Tensor::scalar(4).item() == 4);
  Tensor bad(1, 2);
  bad[1] = std::nan("");
  CHECK_FALSE(bad.all_finite());
  CHECK_THROWS_AS(require_finite(bad, "test"), NumericError);
}

TEST_CASE("matmul examples") {
  Tape tape;
  Var i2 = tape.constant(Tensor::identity(2));
  Var m = tape.constant(Tensor{{1, 2}, {3, 4}});
  CHECK(tape.value(tape.matmul(i2, m)) == Tensor{{1, 2}, {3, 4}});
  Var a = tape.constant(Tensor{{1, 0}});
  Var b = tape.constant(Tensor{{0}, {1}});
  CHECK(tape.value(tape.matmul(a, b)).item() == 0.0);
}

TEST_CASE("matmul shape mismatch names both shapes") {
  Tape tape;
  Var a = tape.constant(Tensor(2, 3));
  Var b = tape.constant(Tensor(2, 3));
  try {
    tape.matmul(a, b);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    std::string msg = e.what();
    CHECK(msg.find("2x3") != std::string::npos);
  }
}

TEST_CASE("matmul gradient of sum matches finite differences") {
  std::mt19937_64 rng(3);
  Parameter a("a", Tensor::uniform(3, 4, 1.0, rng));
  Parameter b("b", Tensor::uniform(4, 2, 1.0, rng));
  Parameter* ps[] = {&a, &b};
  auto r = oracle::gradcheck(ps, [&](Tape& t) { return t.sum(t.matmul(t.param(a), t.param(b))); });
  CHECK(r.checked == 20);
  CHECK(r.max_rel_error < 1e-6);
}

TEST_CASE("elementwise ops") {
  Tape tape;
  Var x = tape.constant(Tensor::row({-1, 0, 2}));
  CHECK(tape.value(tape.relu(x)) == Tensor::row({0, 0, 2}));
  Parameter s("s", Tensor::scalar(0.0));
  Tape t2;
  Var sv = t2.sigmoid(t2.param(s));
  CHECK(t2.value(sv).item() == 0.5);
  t2.backward(sv);
  CHECK(s.grad.item() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("binary elementwise shape mismatch") {
  Tape tape;
  Var a = tape.constant(Tensor(1, 3));
  Var b = tape.constant(Tensor(1, 2));
  CHECK_THROWS_AS(tape.add(a, b), DimensionError);
  CHECK_THROWS_AS(tape.mul(a, b), DimensionError);
}

TEST_CASE("non-finite op output is rejected") {
  Tape tape;
  Var a = tape.constant(Tensor::scalar(1e308));
  CHECK_THROWS_AS(tape.scale(a, 1e10), NumericError);
}

TEST_CASE("tanh, sigmoid, relu gradients match finite differences") {
  std::mt19937_64 rng(5);
  Parameter x("x", Tensor::uniform(1, 5, 2.0, rng));
  Parameter* ps[] = {&x};
  auto th = oracle::gradcheck(ps, [&](Tape& t) { return t.sum(t.tanh(t.param(x))); });
  CHECK(th.max_rel_error < 1e-6);
  auto sg = oracle::gradcheck(ps, [&](Tape& t) { return t.sum(t.sigmoid(t.param(x))); });
  CHECK(sg.max_rel_error < 1e-6);
  auto rl = oracle::gradcheck(ps, [&](Tape& t) {
    Var v = t.param(x);
    return t.sum(t.mul(t.relu(v), v));
  });
  CHECK(rl.max_rel_error < 1e-6);
}

TEST_CASE("structural ops gradients") {
  std::mt19937_64 rng(9);
  Parameter x("x", Tensor::uniform(4, 3, 1.0, rng));
  Parameter y("y", Tensor::uniform(4, 2, 1.0, rng));
  Parameter bias("bias", Tensor::uniform(1, 3, 1.0, rng));
  Parameter* ps[] = {&x, &y, &bias};
  auto r = oracle::gradcheck(ps, [&](Tape& t) {
    Var xv = t.add_row(t.param(x), t.param(bias));
    Var cat = t.concat_cols(xv, t.param(y));
    Var g = t.gather_rows(cat, {3, 0, 0});
    Var s = t.segment_mean(cat, {{0, 1}, {}, {2, 3, 3}});
    Var sq = t.mul(s, s);
    return t.add(t.mean(t.tanh(g)), t.sum(t.sub(sq, t.scale(s, 0.3))));
  });
  CHECK(r.max_rel_error < 1e-6);
}

TEST_CASE("segment_mean empty group gives zero row") {
  Tape tape;
  Var x = tape.constant(Tensor{{1, 2}, {3, 4}});
  Var s = tape.segment_mean(x, {{}, {0, 1}});
  CHECK(tape.value(s) == Tensor{{0, 0}, {2, 3}});
}

TEST_CASE("backward basics") {
  Parameter x("x", Tensor::scalar(3.0));
  {
    Tape t;
    Var v = t.param(x);
    t.backward(t.mul(v, v));
    CHECK(x.grad.item() == 6.0);
  }
  x.zero_grad();
  {
    Tape t;
    t.param(x);
    Var c = t.constant(Tensor::scalar(2.0));
    t.backward(c);
    CHECK(x.grad.item() == 0.0);
  }
}

TEST_CASE("fan-out gradients accumulate additively") {
  Parameter x("x", Tensor::scalar(2.0));
  Tape t;
  Var v = t.param(x);
  Var y = t.add(t.scale(v, 3.0), t.mul(v, v));
  t.backward(y);
  CHECK(x.grad.item() == 7.0);
}

TEST_CASE("backward errors") {
  Tape t;
  Var v = t.constant(Tensor(1, 2));
  CHECK_THROWS_AS(t.backward(v), DimensionError);
  Var s = t.sum(v);
  t.backward(s);
  CHECK(t.consumed());
  CHECK_THROWS_AS(t.backward(s), StateError);
  CHECK_THROWS_AS(t.add(s, s), StateError);
}

TEST_CASE("non-trainable parameter receives no gradient") {
  Parameter x("x", Tensor::scalar(3.0), false);
  Tape t;
  Var v = t.param(x);
  t.backward(t.mul(v, v));
  CHECK(x.grad.item() == 0.0);
}

TEST_CASE("param_rows scatters into the table gradient") {
  Parameter table("table", Tensor{{1, 2}, {3, 4}, {5, 6}});
  Tape t;
  Var rows = t.param_rows(table, {2, 0, 2});
  t.backward(t.sum(rows));
  CHECK(table.grad == Tensor{{1, 1}, {0, 0}, {2, 2}});
}

TEST_CASE("adam zero gradient leaves parameters unchanged") {
  Parameter p("p", Tensor::row({1.0, -2.0}));
  Adam adam({&p});
  adam.step();
  CHECK(p.value == Tensor::row({1.0, -2.0}));
  CHECK(adam.step_count() == 1);
}

TEST_CASE("adam first step magnitude is the learning rate") {
  Parameter p("p", Tensor::scalar(0.0));
  Adam adam({&p}, AdamConfig{0.1});
  p.grad[0] = 1.0;
  adam.step();
  CHECK(p.value.item() == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("adam converges on a quadratic") {
  Parameter x("x", Tensor::scalar(0.0));
  Adam adam({&x}, AdamConfig{0.1});
  for (int i = 0; i < 100; ++i) {
    adam.zero_grad();
    Tape t;
    Var d = t.sub(t.param(x), t.constant(Tensor::scalar(2.0)));
    t.backward(t.mul(d, d));
    adam.step();
  }
  CHECK(std::abs(x.value.item() - 2.0) < 0.1);
  CHECK(adam.step_count() == 100);
}

TEST_CASE("adam rejects bad gradients without touching parameters") {
  Parameter a("a", Tensor::scalar(1.0));
  Parameter b("b", Tensor::scalar(1.0));
  Adam adam({&a, &b});
  a.grad[0] = 1.0;
  b.grad[0] = std::nan("");
  CHECK_THROWS_AS(adam.step(), NumericError);
  CHECK(a.value.item() == 1.0);
  CHECK(adam.step_count() == 0);
  b.grad = Tensor(1, 2);
  CHECK_THROWS_AS(adam.step(), DimensionError);
}

TEST_CASE("identical seeds give identical tensors") {
  std::mt19937_64 r1(11), r2(11);
  CHECK(Tensor::uniform(3, 3, 1.0, r1) == Tensor::uniform(3, 3, 1.0, r2));
}
