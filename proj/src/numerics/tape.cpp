#include "kgqr/numerics/tape.hpp"

#include <cmath>

#include "kgqr/error.hpp"

namespace kgqr::numerics {
namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                         b.shape_string());
  }
}

// c += a * b
void matmul_acc(const Tensor& a, const Tensor& b, Tensor& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c.row_span(i).data();
    const double* arow = a.row_span(i).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b.row_span(p).data();
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c += a * bᵀ
void matmul_bt_acc(const Tensor& a, const Tensor& b, Tensor& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a.row_span(i).data();
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = b.row_span(j).data();
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += arow[p] * brow[p];
      c(i, j) += s;
    }
  }
}

// c += aᵀ * b
void matmul_at_acc(const Tensor& a, const Tensor& b, Tensor& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t r = 0; r < m; ++r) {
    const double* arow = a.row_span(r).data();
    const double* brow = b.row_span(r).data();
    for (std::size_t i = 0; i < k; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c.row_span(i).data();
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ " + a.shape_string() + " * " +
                         b.shape_string());
  }
  Tensor c(a.rows(), b.cols());
  matmul_acc(a, b, c);
  return c;
}

void Tape::check_open() const {
  if (consumed_) throw StateError("tape already consumed by backward()");
}

Tape::Node& Tape::node(Var v) {
  if (v.id >= nodes_.size()) throw std::out_of_range("Var does not belong to this tape");
  return nodes_[v.id];
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id >= nodes_.size()) throw std::out_of_range("Var does not belong to this tape");
  return nodes_[v.id];
}

Tensor& Tape::grad_of(std::size_t id) { return nodes_[id].grad; }

Var Tape::push(Tensor value, const char* op, std::function<void(Tape&, std::size_t)> backward) {
  check_open();
  require_finite(value, op);
  nodes_.push_back(Node{std::move(value), Tensor{}, nullptr, std::move(backward)});
  return Var{nodes_.size() - 1};
}

const Tensor& Tape::value(Var v) const { return node(v).value; }

const Tensor& Tape::grad(Var v) const {
  if (!consumed_) throw StateError("grad() requested before backward()");
  return node(v).grad;
}

Var Tape::constant(Tensor value) { return push(std::move(value), "constant", nullptr); }

Var Tape::param(Parameter& p) {
  Var v = push(p.value, "param", nullptr);
  nodes_[v.id].param = &p;
  return v;
}

Var Tape::param_rows(Parameter& p, std::vector<std::size_t> rows) {
  const Tensor& table = p.value;
  Tensor out(rows.size(), table.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= table.rows()) {
      throw DimensionError("param_rows: row " + std::to_string(rows[i]) + " outside '" + p.name +
                           "' " + table.shape_string());
    }
    auto src = table.row_span(rows[i]);
    std::copy(src.begin(), src.end(), out.row_span(i).begin());
  }
  Parameter* target = &p;
  return push(std::move(out), "param_rows",
              [target, rows = std::move(rows)](Tape& t, std::size_t self) {
                if (!target->trainable) return;
                if (!target->grad.same_shape(target->value)) target->zero_grad();
                const Tensor& g = t.grad_of(self);
                for (std::size_t i = 0; i < rows.size(); ++i) {
                  auto src = g.row_span(i);
                  auto dst = target->grad.row_span(rows[i]);
                  for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
                }
              });
}

Var Tape::matmul(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  Tensor out = numerics::matmul(av, bv);
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "matmul", [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    matmul_bt_acc(g, t.nodes_[ib].value, t.grad_of(ia));
    matmul_at_acc(t.nodes_[ia].value, g, t.grad_of(ib));
  });
}

Var Tape::add(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  require_same_shape(av, bv, "add");
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "add", [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    Tensor& gb = t.grad_of(ib);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
  });
}

Var Tape::sub(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  require_same_shape(av, bv, "sub");
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "sub", [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    Tensor& gb = t.grad_of(ib);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
  });
}

Var Tape::mul(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  require_same_shape(av, bv, "mul");
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "mul", [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& x = t.nodes_[ia].value;
    const Tensor& y = t.nodes_[ib].value;
    Tensor& ga = t.grad_of(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i];
    Tensor& gb = t.grad_of(ib);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * x[i];
  });
}

Var Tape::scale(Var a, double factor) {
  Tensor out = value(a);
  for (auto& v : out.values()) v *= factor;
  const std::size_t ia = a.id;
  return push(std::move(out), "scale", [ia, factor](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor * g[i];
  });
}

Var Tape::relu(Var a) {
  Tensor out = value(a);
  for (auto& v : out.values()) v = v > 0.0 ? v : 0.0;
  const std::size_t ia = a.id;
  return push(std::move(out), "relu", [ia](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& x = t.nodes_[ia].value;
    Tensor& ga = t.grad_of(ia);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (x[i] > 0.0) ga[i] += g[i];
    }
  });
}

Var Tape::sigmoid(Var a) {
  Tensor out = value(a);
  for (auto& v : out.values()) v = 1.0 / (1.0 + std::exp(-v));
  const std::size_t ia = a.id;
  return push(std::move(out), "sigmoid", [ia](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& s = t.nodes_[self].value;
    Tensor& ga = t.grad_of(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s[i] * (1.0 - s[i]);
  });
}

Var Tape::tanh(Var a) {
  Tensor out = value(a);
  for (auto& v : out.values()) v = std::tanh(v);
  const std::size_t ia = a.id;
  return push(std::move(out), "tanh", [ia](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& y = t.nodes_[self].value;
    Tensor& ga = t.grad_of(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var Tape::elementwise(ElementwiseOp op, Var a, Var b, double factor) {
  switch (op) {
    case ElementwiseOp::relu: return relu(a);
    case ElementwiseOp::sigmoid: return sigmoid(a);
    case ElementwiseOp::tanh: return tanh(a);
    case ElementwiseOp::add: return add(a, b);
    case ElementwiseOp::mul: return mul(a, b);
    case ElementwiseOp::sub: return sub(a, b);
    case ElementwiseOp::scale: return scale(a, factor);
  }
  throw std::invalid_argument("unknown elementwise op");
}

Var Tape::add_row(Var x, Var bias) {
  const Tensor& xv = value(x);
  const Tensor& bv = value(bias);
  if (bv.rows() != 1 || bv.cols() != xv.cols()) {
    throw DimensionError("add_row: bias " + bv.shape_string() + " does not fit " +
                         xv.shape_string());
  }
  Tensor out = xv;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row_span(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += bv[c];
  }
  const std::size_t ix = x.id, ib = bias.id;
  return push(std::move(out), "add_row", [ix, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    Tensor& gx = t.grad_of(ix);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    Tensor& gb = t.grad_of(ib);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      auto row = g.row_span(r);
      for (std::size_t c = 0; c < row.size(); ++c) gb[c] += row[c];
    }
  });
}

Var Tape::concat_cols(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  if (av.rows() != bv.rows()) {
    throw DimensionError("concat_cols: row counts differ " + av.shape_string() + " vs " +
                         bv.shape_string());
  }
  const std::size_t ca = av.cols(), cb = bv.cols();
  Tensor out(av.rows(), ca + cb);
  for (std::size_t r = 0; r < av.rows(); ++r) {
    auto dst = out.row_span(r);
    auto sa = av.row_span(r);
    auto sb = bv.row_span(r);
    std::copy(sa.begin(), sa.end(), dst.begin());
    std::copy(sb.begin(), sb.end(), dst.begin() + static_cast<std::ptrdiff_t>(ca));
  }
  const std::size_t ia = a.id, ib = b.id;
  return push(std::move(out), "concat_cols", [ia, ib, ca, cb](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    Tensor& gb = t.grad_of(ib);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      auto src = g.row_span(r);
      for (std::size_t c = 0; c < ca; ++c) ga(r, c) += src[c];
      for (std::size_t c = 0; c < cb; ++c) gb(r, c) += src[ca + c];
    }
  });
}

Var Tape::gather_rows(Var x, std::vector<std::size_t> rows) {
  const Tensor& xv = value(x);
  Tensor out(rows.size(), xv.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= xv.rows()) {
      throw DimensionError("gather_rows: row " + std::to_string(rows[i]) + " outside " +
                           xv.shape_string());
    }
    auto src = xv.row_span(rows[i]);
    std::copy(src.begin(), src.end(), out.row_span(i).begin());
  }
  const std::size_t ix = x.id;
  return push(std::move(out), "gather_rows",
              [ix, rows = std::move(rows)](Tape& t, std::size_t self) {
                const Tensor& g = t.grad_of(self);
                Tensor& gx = t.grad_of(ix);
                for (std::size_t i = 0; i < rows.size(); ++i) {
                  auto src = g.row_span(i);
                  auto dst = gx.row_span(rows[i]);
                  for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
                }
              });
}

Var Tape::segment_mean(Var x, std::vector<std::vector<std::size_t>> groups) {
  const Tensor& xv = value(x);
  Tensor out(groups.size(), xv.cols());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) continue;
    auto dst = out.row_span(g);
    for (std::size_t r : groups[g]) {
      if (r >= xv.rows()) {
        throw DimensionError("segment_mean: row " + std::to_string(r) + " outside " +
                             xv.shape_string());
      }
      auto src = xv.row_span(r);
      for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
    }
    const double inv = 1.0 / static_cast<double>(groups[g].size());
    for (auto& v : dst) v *= inv;
  }
  const std::size_t ix = x.id;
  return push(std::move(out), "segment_mean",
              [ix, groups = std::move(groups)](Tape& t, std::size_t self) {
                const Tensor& g = t.grad_of(self);
                Tensor& gx = t.grad_of(ix);
                for (std::size_t k = 0; k < groups.size(); ++k) {
                  if (groups[k].empty()) continue;
                  const double inv = 1.0 / static_cast<double>(groups[k].size());
                  auto src = g.row_span(k);
                  for (std::size_t r : groups[k]) {
                    auto dst = gx.row_span(r);
                    for (std::size_t c = 0; c < src.size(); ++c) dst[c] += inv * src[c];
                  }
                }
              });
}

Var Tape::sum(Var x) {
  double s = 0.0;
  for (double v : value(x).values()) s += v;
  const std::size_t ix = x.id;
  return push(Tensor::scalar(s), "sum", [ix](Tape& t, std::size_t self) {
    const double g = t.grad_of(self)[0];
    for (auto& v : t.grad_of(ix).values()) v += g;
  });
}

Var Tape::mean(Var x) {
  const std::size_t n = value(x).size();
  if (n == 0) throw DimensionError("mean of empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

void Tape::backward(Var loss) {
  check_open();
  const Tensor& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw DimensionError("backward: loss must be scalar, got " + lv.shape_string());
  }
  for (auto& n : nodes_) n.grad = Tensor(n.value.rows(), n.value.cols());
  nodes_[loss.id].grad[0] = 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    if (nodes_[i].backward) nodes_[i].backward(*this, i);
  }
  consumed_ = true;
  for (auto& n : nodes_) {
    if (n.param == nullptr || !n.param->trainable) continue;
    Tensor& pg = n.param->grad;
    if (!pg.same_shape(n.param->value)) n.param->zero_grad();
    for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += n.grad[i];
  }
}

}  // namespace kgqr::numerics
