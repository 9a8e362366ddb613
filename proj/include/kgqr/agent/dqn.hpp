#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kgqr/agent/qnet.hpp"
#include "kgqr/agent/replay.hpp"
#include "kgqr/encoder/state.hpp"
#include "kgqr/kg/neighborhood.hpp"
#include "kgqr/numerics/adam.hpp"

namespace kgqr::agent {

// Network shape and the three ablation switches:
//   (kg_embeddings, gcn_propagation, candidate_selection)
//   (0,0,0) KGQR-KG      MF item embeddings, frozen
//   (1,0,0) KGQR-GCN-CS  TransE entity embeddings, frozen
//   (1,1,0) KGQR-CS      GCN over trainable entity embeddings
//   (1,1,1) KGQR         GCN plus k-hop candidate selection
struct AgentConfig {
  bool kg_embeddings = true;
  bool gcn_propagation = true;
  bool candidate_selection = true;
  std::size_t embedding_dim = 50;
  std::size_t hidden_dim = 50;
  std::size_t head_hidden = 64;
  std::size_t gcn_layers = 2;
  std::size_t hops = 2;
  std::size_t candidate_max = kg::kUnboundedCandidates;
  ValueInput value_input = ValueInput::state;
  bool mean_advantage = false;

  void validate() const;
  std::string variant_name() const;
};

// Greedy index: highest score, ties to the lowest item id.
std::size_t argmax_lowest_id(std::span<const double> scores, std::span<const ItemId> items);

// ε-greedy: with probability ε a uniform candidate, otherwise the greedy one.
ItemId select_action(std::span<const double> scores, std::span<const ItemId> candidates,
                     double epsilon, std::mt19937_64& rng);

// r + γ·Q'(s', argmax_a Q(s', a)); r alone when terminal.
double double_q_target(double reward, bool terminal, double gamma,
                       std::span<const double> online_next, std::span<const double> target_next,
                       std::span<const ItemId> next_candidates);

// Owns every trainable tensor plus the target heads. Addresses of parameters
// are stable for the agent's lifetime, so it is neither copyable nor movable.
class KgqrAgent {
 public:
  // `base_table` holds entity rows for KG variants and catalog-item rows for
  // the MF variant.
  KgqrAgent(const kg::KnowledgeGraph& g, AgentConfig cfg, Tensor base_table, std::uint64_t seed);
  KgqrAgent(const KgqrAgent&) = delete;
  KgqrAgent& operator=(const KgqrAgent&) = delete;

  const AgentConfig& config() const { return cfg_; }
  const kg::KnowledgeGraph& graph() const { return *graph_; }
  std::span<const ItemId> action_space() const { return action_space_; }
  bool in_action_space(ItemId item) const;

  encoder::ItemEncoder& encoder() { return encoder_; }
  encoder::GruParameters& gru() { return gru_; }
  QNetParameters& online() { return online_; }
  QNetParameters& target() { return target_; }

  std::vector<Parameter*> trainable_parameters();
  // Everything a checkpoint carries, target heads included.
  std::vector<Parameter*> all_parameters();

  // Bumped whenever parameters change outside a tape; invalidates caches.
  std::uint64_t version() const { return version_; }
  void mark_updated() { ++version_; }

  Tensor item_values(std::span<const ItemId> items);
  Tensor initial_state() const { return Tensor(1, cfg_.hidden_dim); }
  Tensor advance_state(const Tensor& hidden, ItemId clicked);
  Tensor state_of(std::span<const ItemId> history);

  kg::CandidateSet candidates(std::span<const ItemId> history,
                              std::span<const ItemId> excluded) const;
  std::vector<double> q_values(const Tensor& state, std::span<const ItemId> candidates,
                               bool use_target = false);
  ItemId greedy_action(const Tensor& state, std::span<const ItemId> candidates);
  ItemId act(const Tensor& state, std::span<const ItemId> candidates, double epsilon,
             std::mt19937_64& rng);

 private:
  void refresh_cache();

  const kg::KnowledgeGraph* graph_;
  AgentConfig cfg_;
  std::vector<ItemId> action_space_;
  std::vector<bool> in_space_;
  encoder::ItemEncoder encoder_;
  encoder::GruParameters gru_;
  QNetParameters online_;
  QNetParameters target_;
  std::uint64_t version_ = 0;
  std::uint64_t cache_version_ = static_cast<std::uint64_t>(-1);
  Tensor cache_;
};

std::vector<double> compute_targets(KgqrAgent& agent, std::span<const Experience* const> batch,
                                    double gamma);

// mean((y - q)^2); y enters as a constant.
Var squared_error(Tape& tape, Var q, std::span<const double> targets);

// Q(s_t, i_t) through the full encoder for every sample, then the squared
// error against `targets`.
Var td_loss(Tape& tape, KgqrAgent& agent, std::span<const Experience* const> batch,
            std::span<const double> targets);

// One optimizer step on a sampled batch followed by the soft target update.
// Returns the loss before the step.
double update_step(KgqrAgent& agent, numerics::Adam& optimizer,
                   std::span<const Experience* const> batch, double gamma, double tau);

}  // namespace kgqr::agent
