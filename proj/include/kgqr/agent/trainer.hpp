#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "kgqr/agent/dqn.hpp"
#include "kgqr/sim/episode.hpp"

namespace kgqr::agent {

enum class UpdateCadence { episode, step };

struct TrainConfig {
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  // Linear decay length in interactions; 0 means decay_fraction of the budget.
  std::size_t epsilon_decay_steps = 0;
  double epsilon_decay_fraction = 0.2;
  double tau = 0.01;
  std::size_t batch_size = 128;
  std::size_t buffer_capacity = 10000;
  // Updates start once the buffer holds this many experiences; 0 means batch_size.
  std::size_t min_replay = 0;
  double learning_rate = 1e-3;
  std::size_t horizon = 32;
  std::size_t budget = 100000;  // training interactions
  UpdateCadence cadence = UpdateCadence::episode;
  std::size_t updates_per_round = 1;
  std::size_t eval_every = 0;  // interactions between evaluations; 0 = only first and last

  void validate() const;
  std::size_t decay_steps() const;
  double epsilon_at(std::size_t interactions) const;
};

struct Environment {
  const sim::SimulatorModel* simulator = nullptr;
  const sim::PopularityTable* popularity = nullptr;
  std::vector<sim::UserId> train_users;
};

using TransitionSink = std::function<void(Experience&&)>;

// One full episode: reset delivers the popular item, then the agent picks
// from its candidate sets. `epsilon` is asked before every agent step with
// the number of steps already taken in this episode.
sim::EpisodeLog run_episode(KgqrAgent& agent, const sim::SimulatorModel& model,
                            const sim::PopularityTable& popularity, sim::UserId user,
                            std::size_t horizon, const std::function<double(std::size_t)>& epsilon,
                            std::mt19937_64& rng, const TransitionSink& sink = {});

// Greedy episode, no exploration, nothing stored.
sim::EpisodeLog greedy_episode(KgqrAgent& agent, const sim::SimulatorModel& model,
                               const sim::PopularityTable& popularity, sim::UserId user,
                               std::size_t horizon);

struct TrainStats {
  std::size_t interactions = 0;
  std::size_t episodes = 0;
  std::size_t updates = 0;
  double last_loss = 0.0;
};

// Called with the interaction count at 0, after every `eval_every`
// interactions (checked at episode boundaries) and once at the end.
using EvalCallback = std::function<void(KgqrAgent&, std::size_t interactions)>;

TrainStats train(KgqrAgent& agent, const Environment& env, const TrainConfig& cfg,
                 std::uint64_t seed, const EvalCallback& on_eval = {});

}  // namespace kgqr::agent
