#include "kgqr/encoder/gru.hpp"

#include <algorithm>
#include <cmath>

#include "kgqr/error.hpp"

namespace kgqr::encoder {

std::vector<Parameter*> GruParameters::parameters() {
  return {&w_z, &u_z, &b_z, &w_r, &u_r, &b_r, &w_h, &u_h, &b_h};
}

GruParameters GruParameters::init(std::size_t input_dim, std::size_t hidden_dim,
                                  std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  auto in = [&](const char* n) {
    return Parameter(n, Tensor::uniform(input_dim, hidden_dim, bound, rng));
  };
  auto rec = [&](const char* n) {
    return Parameter(n, Tensor::uniform(hidden_dim, hidden_dim, bound, rng));
  };
  auto bias = [&](const char* n) { return Parameter(n, Tensor(1, hidden_dim)); };
  GruParameters p;
  p.w_z = in("gru.W_z");
  p.u_z = rec("gru.U_z");
  p.b_z = bias("gru.b_z");
  p.w_r = in("gru.W_r");
  p.u_r = rec("gru.U_r");
  p.b_r = bias("gru.b_r");
  p.w_h = in("gru.W_h");
  p.u_h = rec("gru.U_h");
  p.b_h = bias("gru.b_h");
  return p;
}

GruParameters GruParameters::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  GruParameters p;
  p.w_z = Parameter("gru.W_z", Tensor(input_dim, hidden_dim));
  p.u_z = Parameter("gru.U_z", Tensor(hidden_dim, hidden_dim));
  p.b_z = Parameter("gru.b_z", Tensor(1, hidden_dim));
  p.w_r = Parameter("gru.W_r", Tensor(input_dim, hidden_dim));
  p.u_r = Parameter("gru.U_r", Tensor(hidden_dim, hidden_dim));
  p.b_r = Parameter("gru.b_r", Tensor(1, hidden_dim));
  p.w_h = Parameter("gru.W_h", Tensor(input_dim, hidden_dim));
  p.u_h = Parameter("gru.U_h", Tensor(hidden_dim, hidden_dim));
  p.b_h = Parameter("gru.b_h", Tensor(1, hidden_dim));
  return p;
}

GruVars bind(Tape& tape, GruParameters& gru) {
  return GruVars{tape.param(gru.w_z), tape.param(gru.u_z), tape.param(gru.b_z),
                 tape.param(gru.w_r), tape.param(gru.u_r), tape.param(gru.b_r),
                 tape.param(gru.w_h), tape.param(gru.u_h), tape.param(gru.b_h)};
}

Var gru_step(Tape& tape, const GruVars& g, Var h_prev, Var x) {
  const std::size_t rows = tape.value(h_prev).rows();
  const std::size_t cols = tape.value(h_prev).cols();
  if (rows != tape.value(x).rows()) {
    throw DimensionError("gru_step: batch mismatch " + tape.value(h_prev).shape_string() +
                         " vs " + tape.value(x).shape_string());
  }
  auto gate = [&](Var w, Var u, Var b, Var h) {
    return tape.add_row(tape.add(tape.matmul(x, w), tape.matmul(h, u)), b);
  };
  Var z = tape.sigmoid(gate(g.w_z, g.u_z, g.b_z, h_prev));
  Var r = tape.sigmoid(gate(g.w_r, g.u_r, g.b_r, h_prev));
  Var candidate = tape.tanh(gate(g.w_h, g.u_h, g.b_h, tape.mul(r, h_prev)));
  Var keep = tape.sub(tape.constant(Tensor(rows, cols, 1.0)), z);
  return tape.add(tape.mul(keep, h_prev), tape.mul(z, candidate));
}

Tensor gru_step(GruParameters& gru, const Tensor& h_prev, const Tensor& x) {
  Tape tape;
  GruVars vars = bind(tape, gru);
  Var out = gru_step(tape, vars, tape.constant(h_prev), tape.constant(x));
  return tape.value(out);
}

Var gru_encode(Tape& tape, const GruVars& gru, Var inputs,
               const std::vector<std::vector<std::size_t>>& sequences, std::size_t hidden_dim) {
  const std::size_t batch = sequences.size();
  Var h = tape.constant(Tensor(batch, hidden_dim));
  std::size_t longest = 0;
  for (const auto& s : sequences) longest = std::max(longest, s.size());
  for (std::size_t step = 0; step < longest; ++step) {
    std::vector<std::size_t> rows(batch, 0);
    bool all_active = true;
    Tensor mask(batch, hidden_dim, 1.0);
    for (std::size_t b = 0; b < batch; ++b) {
      if (step < sequences[b].size()) {
        rows[b] = sequences[b][step];
      } else {
        all_active = false;
        for (auto& v : mask.row_span(b)) v = 0.0;
      }
    }
    Var x = tape.gather_rows(inputs, std::move(rows));
    Var next = gru_step(tape, gru, h, x);
    if (all_active) {
      h = next;
      continue;
    }
    // Exact select: m*next + (1-m)*h with m in {0,1}.
    Tensor inverse = mask;
    for (auto& v : inverse.values()) v = 1.0 - v;
    h = tape.add(tape.mul(tape.constant(std::move(mask)), next),
                 tape.mul(tape.constant(std::move(inverse)), h));
  }
  return h;
}

}  // namespace kgqr::encoder
