#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kgqr/numerics/tensor.hpp"

namespace kgqr::numerics {

// A trainable tensor living outside any tape. Gradients from every tape the
// parameter is bound to accumulate into `grad` until zero_grad().
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor value, bool trainable = true)
      : name(std::move(name)), value(std::move(value)), trainable(trainable) {
    grad = Tensor(this->value.rows(), this->value.cols());
  }

  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;

  void zero_grad() {
    if (!grad.same_shape(value)) grad = Tensor(value.rows(), value.cols());
    grad.fill(0.0);
  }
};

// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = static_cast<std::size_t>(-1);
};

enum class ElementwiseOp { relu, sigmoid, tanh, add, mul, sub, scale };

// Records a forward computation and replays it backwards once.
//
// Ops are appended in execution order, so the node list is already a
// topological order. Gradients are summed at fan-out points. Every op output
// is checked for NaN/Inf.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  Var constant(Tensor value);
  // Binds a parameter; backward() adds into param.grad when trainable.
  Var param(Parameter& p);
  // Rows of a parameter without binding the whole table; the backward pass
  // scatters into p.grad directly.
  Var param_rows(Parameter& p, std::vector<std::size_t> rows);

  const Tensor& value(Var v) const;
  // Gradient of the last backward() loss w.r.t. `v`.
  const Tensor& grad(Var v) const;

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double factor);
  Var relu(Var a);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var elementwise(ElementwiseOp op, Var a, Var b = {}, double factor = 1.0);

  // x[n×m] + bias[1×m] added to every row.
  Var add_row(Var x, Var bias);
  Var concat_cols(Var a, Var b);
  Var gather_rows(Var x, std::vector<std::size_t> rows);
  // Row g of the output is the mean of x's rows listed in groups[g]; an
  // empty group yields a zero row.
  Var segment_mean(Var x, std::vector<std::vector<std::size_t>> groups);
  Var sum(Var x);
  Var mean(Var x);

  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Parameter* param = nullptr;
    std::function<void(Tape&, std::size_t)> backward;
  };

  Var push(Tensor value, const char* op, std::function<void(Tape&, std::size_t)> backward);
  Node& node(Var v);
  const Node& node(Var v) const;
  Tensor& grad_of(std::size_t id);
  void check_open() const;

  std::vector<Node> nodes_;
  bool consumed_ = false;
};

// Plain (untaped) helpers used by oracles and inference caches.
Tensor matmul(const Tensor& a, const Tensor& b);

}  // namespace kgqr::numerics
