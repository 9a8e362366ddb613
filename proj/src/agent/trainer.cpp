#include "kgqr/agent/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "kgqr/error.hpp"

namespace kgqr::agent {

void TrainConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in (0, 1]");
  for (double e : {epsilon_start, epsilon_end}) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  }
  if (!(epsilon_decay_fraction >= 0.0 && epsilon_decay_fraction <= 1.0)) {
    throw ConfigError("epsilon_decay_fraction must lie in [0, 1]");
  }
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (buffer_capacity == 0) throw ConfigError("buffer_capacity must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (horizon == 0) throw ConfigError("horizon must be >= 1");
  if (updates_per_round == 0) throw ConfigError("updates_per_round must be >= 1");
}

std::size_t TrainConfig::decay_steps() const {
  if (epsilon_decay_steps > 0) return epsilon_decay_steps;
  return static_cast<std::size_t>(std::llround(epsilon_decay_fraction * static_cast<double>(budget)));
}

double TrainConfig::epsilon_at(std::size_t interactions) const {
  const std::size_t n = decay_steps();
  if (n == 0 || interactions >= n) return epsilon_end;
  const double f = static_cast<double>(interactions) / static_cast<double>(n);
  return epsilon_start + (epsilon_end - epsilon_start) * f;
}

sim::EpisodeLog run_episode(KgqrAgent& agent, const sim::SimulatorModel& model,
                            const sim::PopularityTable& popularity, sim::UserId user,
                            std::size_t horizon, const std::function<double(std::size_t)>& epsilon,
                            std::mt19937_64& rng, const TransitionSink& sink) {
  if (popularity.empty()) throw std::invalid_argument("reset: empty popularity table");
  if (!agent.in_action_space(popularity.items.front())) {
    throw ConfigError("most popular item is outside the agent's action space");
  }
  if (agent.action_space().size() < horizon) {
    throw ConfigError("action space has " + std::to_string(agent.action_space().size()) +
                      " items, fewer than the horizon " + std::to_string(horizon));
  }
  const bool keep_current = agent.config().mean_advantage;
  std::vector<ItemId> observation;
  sim::EpisodeState state = sim::reset(model, user, popularity, horizon);
  Tensor hidden = agent.initial_state();
  std::uint64_t version = agent.version();
  if (!state.history.empty()) hidden = agent.advance_state(hidden, state.history.back());

  kg::CandidateSet next;
  if (!state.done) next = agent.candidates(state.history, state.recommended);
  if (sink) {
    Experience e;
    e.action = state.recommended.front();
    e.reward = state.log.steps.front().reward;
    e.next_observation = state.history;
    e.terminal = state.done;
    if (keep_current) {
      e.candidates = agent.candidates({}, {}).items;
    }
    e.next_candidates = next.items;
    sink(std::move(e));
  }

  while (!state.done) {
    if (agent.version() != version) {
      hidden = agent.state_of(state.history);
      version = agent.version();
    }
    kg::CandidateSet current = std::move(next);
    observation = state.history;
    const ItemId item = agent.act(hidden, current.items, epsilon(state.t), rng);
    sim::step(state, model, item);
    const bool clicked = state.history.size() > observation.size();
    if (clicked) hidden = agent.advance_state(hidden, item);
    next = state.done ? kg::CandidateSet{} : agent.candidates(state.history, state.recommended);
    if (sink) {
      Experience e;
      e.observation = std::move(observation);
      e.action = item;
      e.reward = state.log.steps.back().reward;
      e.next_observation = state.history;
      if (keep_current) e.candidates = current.items;
      e.next_candidates = next.items;
      e.terminal = state.done;
      sink(std::move(e));
    }
  }
  return std::move(state.log);
}

sim::EpisodeLog greedy_episode(KgqrAgent& agent, const sim::SimulatorModel& model,
                               const sim::PopularityTable& popularity, sim::UserId user,
                               std::size_t horizon) {
  std::mt19937_64 unused(0);
  return run_episode(agent, model, popularity, user, horizon, [](std::size_t) { return 0.0; },
                     unused);
}

TrainStats train(KgqrAgent& agent, const Environment& env, const TrainConfig& cfg,
                 std::uint64_t seed, const EvalCallback& on_eval) {
  cfg.validate();
  if (env.simulator == nullptr || !env.simulator->fitted()) {
    throw StateError("train: simulator is not fitted");
  }
  if (env.popularity == nullptr) throw StateError("train: no popularity table");

  TrainStats stats;
  std::size_t last_eval = static_cast<std::size_t>(-1);
  auto evaluate = [&] {
    if (!on_eval || last_eval == stats.interactions) return;
    on_eval(agent, stats.interactions);
    last_eval = stats.interactions;
  };
  evaluate();
  if (env.train_users.empty() || cfg.budget == 0) return stats;

  std::mt19937_64 explore_rng(seed * 0x9E3779B97F4A7C15ULL + 1);
  std::mt19937_64 replay_rng(seed * 0x9E3779B97F4A7C15ULL + 2);
  std::mt19937_64 order_rng(seed * 0x9E3779B97F4A7C15ULL + 3);
  numerics::Adam optimizer(agent.trainable_parameters(),
                           numerics::AdamConfig{cfg.learning_rate, 0.9, 0.999, 1e-8});
  ReplayBuffer buffer(cfg.buffer_capacity);
  const std::size_t warmup = std::max<std::size_t>(1, cfg.min_replay ? cfg.min_replay : cfg.batch_size);

  auto learn = [&] {
    if (buffer.size() < warmup) return;
    for (std::size_t u = 0; u < cfg.updates_per_round; ++u) {
      auto batch = buffer.sample(cfg.batch_size, replay_rng);
      stats.last_loss = update_step(agent, optimizer, batch, cfg.gamma, cfg.tau);
      ++stats.updates;
    }
  };

  std::vector<sim::UserId> order = env.train_users;
  std::size_t next_eval = cfg.eval_every;
  std::size_t episode_start = 0;
  auto epsilon = [&](std::size_t t) { return cfg.epsilon_at(episode_start + t); };
  TransitionSink sink = [&](Experience&& e) {
    buffer.push(std::move(e));
    if (cfg.cadence == UpdateCadence::step) learn();
  };

  while (stats.interactions < cfg.budget) {
    std::shuffle(order.begin(), order.end(), order_rng);
    for (sim::UserId user : order) {
      episode_start = stats.interactions;
      auto log = run_episode(agent, *env.simulator, *env.popularity, user, cfg.horizon, epsilon,
                             explore_rng, sink);
      stats.interactions += log.steps.size();
      ++stats.episodes;
      if (cfg.cadence == UpdateCadence::episode) learn();
      if (cfg.eval_every > 0 && stats.interactions >= next_eval) {
        evaluate();
        while (next_eval <= stats.interactions) next_eval += cfg.eval_every;
      }
      if (stats.interactions >= cfg.budget) break;
    }
  }
  evaluate();
  return stats;
}

}  // namespace kgqr::agent
