#pragma once

#include <random>
#include <span>
#include <vector>

#include "kgqr/numerics/tape.hpp"

namespace kgqr::agent {

using numerics::Parameter;
using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

enum class ValueInput { state, item };

struct QNetConfig {
  std::size_t state_dim = 50;
  std::size_t item_dim = 50;
  std::size_t hidden = 64;
  ValueInput value_input = ValueInput::state;
};

// Dueling heads, each a two-layer MLP with a ReLU hidden layer:
//   V: value_input -> hidden -> 1
//   A: (state || item) -> hidden -> 1
//   Q = V + A
struct QNetParameters {
  QNetConfig config;
  Parameter v_w1, v_b1, v_w2, v_b2;
  Parameter a_w1, a_b1, a_w2, a_b2;

  std::size_t value_input_dim() const {
    return config.value_input == ValueInput::state ? config.state_dim : config.item_dim;
  }
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  // Weights uniform on ±1/sqrt(fan_in), biases zero.
  static QNetParameters init(const QNetConfig& cfg, std::mt19937_64& rng);
  static QNetParameters zeros(const QNetConfig& cfg);
};

struct QNetVars {
  Var v_w1, v_b1, v_w2, v_b2;
  Var a_w1, a_b1, a_w2, a_b2;
};
QNetVars bind(Tape& tape, QNetParameters& q);

// Row-paired: states n×H, items n×d -> n×1.
Var value_head(Tape& tape, const QNetVars& q, Var input);
Var advantage_head(Tape& tape, const QNetVars& q, Var states, Var items);
Var q_value(Tape& tape, const QNetVars& q, ValueInput value_input, Var states, Var items);

struct HeadScores {
  std::vector<double> value;      // per candidate (constant when fed from the state)
  std::vector<double> advantage;  // per candidate
};
// Forward-only scoring of one state (1×H) against n candidate rows (n×d).
HeadScores score_heads(const QNetParameters& q, const Tensor& state, const Tensor& items);
// V + A, minus the candidate-mean advantage when `mean_advantage` is set.
std::vector<double> score_candidates(const QNetParameters& q, const Tensor& state,
                                     const Tensor& items, bool mean_advantage = false);

// θ' <- τθ + (1-τ)θ'
void soft_update(std::span<Parameter* const> target, std::span<const Parameter* const> online,
                 double tau);
void soft_update(QNetParameters& target, const QNetParameters& online, double tau);

}  // namespace kgqr::agent
