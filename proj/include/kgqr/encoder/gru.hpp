#pragma once

#include <random>
#include <vector>

#include "kgqr/numerics/tape.hpp"

namespace kgqr::encoder {

using numerics::Parameter;
using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

// Row-vector GRU cell:
//   z  = σ(x·W_z + h·U_z + b_z)
//   r  = σ(x·W_r + h·U_r + b_r)
//   ĥ  = tanh(x·W_h + (r∘h)·U_h + b_h)
//   h' = (1−z)∘h + z∘ĥ
struct GruParameters {
  Parameter w_z, u_z, b_z;
  Parameter w_r, u_r, b_r;
  Parameter w_h, u_h, b_h;

  std::size_t input_dim() const { return w_z.value.rows(); }
  std::size_t hidden_dim() const { return u_z.value.rows(); }
  std::vector<Parameter*> parameters();

  // Matrices uniform on ±1/sqrt(hidden), biases zero.
  static GruParameters init(std::size_t input_dim, std::size_t hidden_dim, std::mt19937_64& rng);
  static GruParameters zeros(std::size_t input_dim, std::size_t hidden_dim);
};

struct GruVars {
  Var w_z, u_z, b_z, w_r, u_r, b_r, w_h, u_h, b_h;
};
GruVars bind(Tape& tape, GruParameters& gru);

// One step for a batch: h_prev is n×H, x is n×D.
Var gru_step(Tape& tape, const GruVars& gru, Var h_prev, Var x);
Tensor gru_step(GruParameters& gru, const Tensor& h_prev, const Tensor& x);

// Folds the cell over each sequence (row indices into `inputs`) from a zero
// initial state. Sequences may differ in length; shorter ones hold their
// state once exhausted. Returns one hidden row per sequence.
Var gru_encode(Tape& tape, const GruVars& gru, Var inputs,
               const std::vector<std::vector<std::size_t>>& sequences, std::size_t hidden_dim);

}  // namespace kgqr::encoder
