#include "kgqr/agent/qnet.hpp"

#include <cmath>

#include "kgqr/error.hpp"

namespace kgqr::agent {

std::vector<Parameter*> QNetParameters::parameters() {
  return {&v_w1, &v_b1, &v_w2, &v_b2, &a_w1, &a_b1, &a_w2, &a_b2};
}

std::vector<const Parameter*> QNetParameters::parameters() const {
  return {&v_w1, &v_b1, &v_w2, &v_b2, &a_w1, &a_b1, &a_w2, &a_b2};
}

namespace {

QNetParameters shaped(const QNetConfig& cfg) {
  if (cfg.state_dim == 0 || cfg.item_dim == 0 || cfg.hidden == 0) {
    throw ConfigError("q-network: dimensions must be positive");
  }
  QNetParameters q;
  q.config = cfg;
  const std::size_t vin = q.value_input_dim();
  const std::size_t ain = cfg.state_dim + cfg.item_dim;
  q.v_w1 = Parameter("q.value.w1", Tensor(vin, cfg.hidden));
  q.v_b1 = Parameter("q.value.b1", Tensor(1, cfg.hidden));
  q.v_w2 = Parameter("q.value.w2", Tensor(cfg.hidden, 1));
  q.v_b2 = Parameter("q.value.b2", Tensor(1, 1));
  q.a_w1 = Parameter("q.adv.w1", Tensor(ain, cfg.hidden));
  q.a_b1 = Parameter("q.adv.b1", Tensor(1, cfg.hidden));
  q.a_w2 = Parameter("q.adv.w2", Tensor(cfg.hidden, 1));
  q.a_b2 = Parameter("q.adv.b2", Tensor(1, 1));
  return q;
}

double fan_bound(std::size_t fan_in) { return 1.0 / std::sqrt(static_cast<double>(fan_in)); }

}  // namespace

QNetParameters QNetParameters::zeros(const QNetConfig& cfg) { return shaped(cfg); }

QNetParameters QNetParameters::init(const QNetConfig& cfg, std::mt19937_64& rng) {
  QNetParameters q = shaped(cfg);
  const std::size_t vin = q.value_input_dim();
  const std::size_t ain = cfg.state_dim + cfg.item_dim;
  q.v_w1.value = Tensor::uniform(vin, cfg.hidden, fan_bound(vin), rng);
  q.v_w2.value = Tensor::uniform(cfg.hidden, 1, fan_bound(cfg.hidden), rng);
  q.a_w1.value = Tensor::uniform(ain, cfg.hidden, fan_bound(ain), rng);
  q.a_w2.value = Tensor::uniform(cfg.hidden, 1, fan_bound(cfg.hidden), rng);
  return q;
}

QNetVars bind(Tape& tape, QNetParameters& q) {
  return {tape.param(q.v_w1), tape.param(q.v_b1), tape.param(q.v_w2), tape.param(q.v_b2),
          tape.param(q.a_w1), tape.param(q.a_b1), tape.param(q.a_w2), tape.param(q.a_b2)};
}

Var value_head(Tape& tape, const QNetVars& q, Var input) {
  Var h = tape.relu(tape.add_row(tape.matmul(input, q.v_w1), q.v_b1));
  return tape.add_row(tape.matmul(h, q.v_w2), q.v_b2);
}

Var advantage_head(Tape& tape, const QNetVars& q, Var states, Var items) {
  Var x = tape.concat_cols(states, items);
  Var h = tape.relu(tape.add_row(tape.matmul(x, q.a_w1), q.a_b1));
  return tape.add_row(tape.matmul(h, q.a_w2), q.a_b2);
}

Var q_value(Tape& tape, const QNetVars& q, ValueInput value_input, Var states, Var items) {
  Var v = value_head(tape, q, value_input == ValueInput::state ? states : items);
  return tape.add(v, advantage_head(tape, q, states, items));
}

HeadScores score_heads(const QNetParameters& q, const Tensor& state, const Tensor& items) {
  const auto& cfg = q.config;
  if (state.rows() != 1 || state.cols() != cfg.state_dim) {
    throw DimensionError("score_heads: state is " + state.shape_string() + ", expected 1x" +
                         std::to_string(cfg.state_dim));
  }
  if (items.cols() != cfg.item_dim) {
    throw DimensionError("score_heads: items are " + items.shape_string() + ", expected nx" +
                         std::to_string(cfg.item_dim));
  }
  const std::size_t n = items.rows();
  const std::size_t H = cfg.hidden;
  const Tensor& aw = q.a_w1.value;

  // state part of the advantage pre-activation is shared by every candidate
  std::vector<double> shared(H, 0.0);
  for (std::size_t j = 0; j < H; ++j) shared[j] = q.a_b1.value[j];
  for (std::size_t k = 0; k < cfg.state_dim; ++k) {
    const double s = state[k];
    if (s == 0.0) continue;
    for (std::size_t j = 0; j < H; ++j) shared[j] += s * aw(k, j);
  }

  auto mlp_out = [&](const std::vector<double>& pre, const Tensor& w2, const Tensor& b2) {
    double out = b2[0];
    for (std::size_t j = 0; j < H; ++j) {
      if (pre[j] > 0.0) out += pre[j] * w2[j];
    }
    return out;
  };

  auto value_of = [&](std::span<const double> input) {
    std::vector<double> pre(H);
    for (std::size_t j = 0; j < H; ++j) pre[j] = q.v_b1.value[j];
    for (std::size_t k = 0; k < input.size(); ++k) {
      const double x = input[k];
      if (x == 0.0) continue;
      for (std::size_t j = 0; j < H; ++j) pre[j] += x * q.v_w1.value(k, j);
    }
    return mlp_out(pre, q.v_w2.value, q.v_b2.value);
  };

  HeadScores out;
  out.value.resize(n);
  out.advantage.resize(n);
  const double state_value =
      cfg.value_input == ValueInput::state ? value_of(state.row_span(0)) : 0.0;
  std::vector<double> pre(H);
  for (std::size_t i = 0; i < n; ++i) {
    pre = shared;
    auto row = items.row_span(i);
    for (std::size_t k = 0; k < cfg.item_dim; ++k) {
      const double x = row[k];
      if (x == 0.0) continue;
      for (std::size_t j = 0; j < H; ++j) pre[j] += x * aw(cfg.state_dim + k, j);
    }
    out.advantage[i] = mlp_out(pre, q.a_w2.value, q.a_b2.value);
    out.value[i] = cfg.value_input == ValueInput::state ? state_value : value_of(row);
  }
  return out;
}

std::vector<double> score_candidates(const QNetParameters& q, const Tensor& state,
                                     const Tensor& items, bool mean_advantage) {
  HeadScores h = score_heads(q, state, items);
  double mean = 0.0;
  if (mean_advantage && !h.advantage.empty()) {
    for (double a : h.advantage) mean += a;
    mean /= static_cast<double>(h.advantage.size());
  }
  std::vector<double> out(h.value.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = h.value[i] + h.advantage[i] - mean;
  return out;
}

void soft_update(std::span<Parameter* const> target, std::span<const Parameter* const> online,
                 double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("soft_update: tau must lie in [0, 1]");
  if (target.size() != online.size()) throw DimensionError("soft_update: parameter count differs");
  for (std::size_t p = 0; p < target.size(); ++p) {
    if (!target[p]->value.same_shape(online[p]->value)) {
      throw DimensionError("soft_update: " + target[p]->name + " is " +
                           target[p]->value.shape_string() + " but online is " +
                           online[p]->value.shape_string());
    }
  }
  for (std::size_t p = 0; p < target.size(); ++p) {
    auto dst = target[p]->value.values();
    auto src = online[p]->value.values();
    if (tau == 1.0) {
      std::copy(src.begin(), src.end(), dst.begin());
      continue;
    }
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = tau * src[i] + (1.0 - tau) * dst[i];
  }
}

void soft_update(QNetParameters& target, const QNetParameters& online, double tau) {
  auto t = target.parameters();
  auto o = online.parameters();
  soft_update(std::span<Parameter* const>(t), std::span<const Parameter* const>(o), tau);
}

}  // namespace kgqr::agent
