#include "kgqr/agent/dqn.hpp"

#include <algorithm>
#include <cmath>

#include "kgqr/error.hpp"

namespace kgqr::agent {

void AgentConfig::validate() const {
  const bool valid_row = (!kg_embeddings && !gcn_propagation && !candidate_selection) ||
                         (kg_embeddings && !gcn_propagation && !candidate_selection) ||
                         (kg_embeddings && gcn_propagation && !candidate_selection) ||
                         (kg_embeddings && gcn_propagation && candidate_selection);
  if (!valid_row) {
    throw ConfigError("ablation flags (kg_embeddings, gcn_propagation, candidate_selection) = (" +
                      std::to_string(kg_embeddings) + "," + std::to_string(gcn_propagation) + "," +
                      std::to_string(candidate_selection) + ") is not a known variant");
  }
  if (embedding_dim == 0 || hidden_dim == 0 || head_hidden == 0) {
    throw ConfigError("agent dimensions must be positive");
  }
  if (gcn_propagation && gcn_layers == 0) throw ConfigError("gcn_layers must be >= 1");
  if (candidate_selection && hops == 0) throw ConfigError("hops must be >= 1");
  if (candidate_max == 0) throw ConfigError("candidate_max must be >= 1");
}

std::string AgentConfig::variant_name() const {
  if (!kg_embeddings) return "KGQR-KG";
  if (!gcn_propagation) return "KGQR-GCN-CS";
  if (!candidate_selection) return "KGQR-CS";
  return "KGQR";
}

std::size_t argmax_lowest_id(std::span<const double> scores, std::span<const ItemId> items) {
  if (scores.empty()) throw std::invalid_argument("argmax over an empty candidate set");
  if (scores.size() != items.size()) throw DimensionError("argmax: scores and items differ");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best] || (scores[i] == scores[best] && items[i] < items[best])) best = i;
  }
  return best;
}

ItemId select_action(std::span<const double> scores, std::span<const ItemId> candidates,
                     double epsilon, std::mt19937_64& rng) {
  if (candidates.empty()) throw std::invalid_argument("select_action: empty candidate set");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      return candidates[pick(rng)];
    }
  }
  return candidates[argmax_lowest_id(scores, candidates)];
}

double double_q_target(double reward, bool terminal, double gamma,
                       std::span<const double> online_next, std::span<const double> target_next,
                       std::span<const ItemId> next_candidates) {
  if (terminal) return reward;
  if (next_candidates.empty()) {
    throw std::invalid_argument("double_q_target: non-terminal sample without next candidates");
  }
  if (target_next.size() != online_next.size()) {
    throw DimensionError("double_q_target: online and target scores differ in length");
  }
  const std::size_t a = argmax_lowest_id(online_next, next_candidates);
  return reward + gamma * target_next[a];
}

namespace {

QNetParameters renamed_copy(const QNetParameters& q, const std::string& prefix) {
  QNetParameters t = q;
  for (Parameter* p : t.parameters()) p->name = prefix + p->name;
  return t;
}

}  // namespace

KgqrAgent::KgqrAgent(const kg::KnowledgeGraph& g, AgentConfig cfg, Tensor base_table,
                     std::uint64_t seed)
    : graph_(&g),
      cfg_((cfg.validate(), cfg)),
      encoder_(g, Parameter("embedding.table", Tensor(1, 1)), encoder::EmbeddingSource::item_table,
               std::nullopt) {
  std::mt19937_64 rng(seed);
  if (base_table.cols() != cfg_.embedding_dim) {
    throw DimensionError("agent: base embeddings have " + std::to_string(base_table.cols()) +
                         " columns, expected " + std::to_string(cfg_.embedding_dim));
  }
  std::optional<encoder::GcnParameters> gcn;
  if (cfg_.gcn_propagation) gcn = encoder::GcnParameters::init(cfg_.embedding_dim, cfg_.gcn_layers, rng);
  if (cfg_.kg_embeddings) {
    encoder_ = encoder::ItemEncoder(
        g, Parameter("embedding.table", std::move(base_table), cfg_.gcn_propagation),
        encoder::EmbeddingSource::knowledge_graph, std::move(gcn));
  } else {
    if (base_table.rows() != g.item_count()) {
      throw DimensionError("agent: item embeddings cover " + std::to_string(base_table.rows()) +
                           " of " + std::to_string(g.item_count()) + " catalog items");
    }
    encoder_ = encoder::ItemEncoder(g, Parameter("embedding.table", std::move(base_table), false),
                                    encoder::EmbeddingSource::item_table, std::nullopt);
  }
  gru_ = encoder::GruParameters::init(cfg_.embedding_dim, cfg_.hidden_dim, rng);
  QNetConfig qc;
  qc.state_dim = cfg_.hidden_dim;
  qc.item_dim = cfg_.embedding_dim;
  qc.hidden = cfg_.head_hidden;
  qc.value_input = cfg_.value_input;
  online_ = QNetParameters::init(qc, rng);
  target_ = renamed_copy(online_, "target.");

  in_space_.assign(g.item_count(), false);
  for (ItemId i = 0; i < g.item_count(); ++i) {
    if (encoder_.can_embed(i)) {
      action_space_.push_back(i);
      in_space_[i] = true;
    }
  }
  if (action_space_.empty()) throw ConfigError("agent: no catalog item can be embedded");
}

bool KgqrAgent::in_action_space(ItemId item) const {
  return item < in_space_.size() && in_space_[item];
}

std::vector<Parameter*> KgqrAgent::trainable_parameters() {
  std::vector<Parameter*> out;
  for (Parameter* p : encoder_.parameters()) {
    if (p->trainable) out.push_back(p);
  }
  for (Parameter* p : gru_.parameters()) out.push_back(p);
  for (Parameter* p : online_.parameters()) out.push_back(p);
  return out;
}

std::vector<Parameter*> KgqrAgent::all_parameters() {
  std::vector<Parameter*> out = encoder_.parameters();
  for (Parameter* p : gru_.parameters()) out.push_back(p);
  for (Parameter* p : online_.parameters()) out.push_back(p);
  for (Parameter* p : target_.parameters()) out.push_back(p);
  return out;
}

void KgqrAgent::refresh_cache() {
  if (cache_version_ == version_) return;
  Tensor values = encoder_.embed_values(action_space_);
  cache_ = Tensor(graph_->item_count(), cfg_.embedding_dim);
  for (std::size_t r = 0; r < action_space_.size(); ++r) {
    auto src = values.row_span(r);
    std::copy(src.begin(), src.end(), cache_.row_span(action_space_[r]).begin());
  }
  cache_version_ = version_;
}

Tensor KgqrAgent::item_values(std::span<const ItemId> items) {
  refresh_cache();
  Tensor out(items.size(), cfg_.embedding_dim);
  for (std::size_t r = 0; r < items.size(); ++r) {
    if (!in_action_space(items[r])) {
      throw DimensionError("item " + std::to_string(items[r]) + " is outside the action space");
    }
    auto src = cache_.row_span(items[r]);
    std::copy(src.begin(), src.end(), out.row_span(r).begin());
  }
  return out;
}

Tensor KgqrAgent::advance_state(const Tensor& hidden, ItemId clicked) {
  const ItemId one[] = {clicked};
  return encoder::gru_step(gru_, hidden, item_values(one));
}

Tensor KgqrAgent::state_of(std::span<const ItemId> history) {
  Tensor h = initial_state();
  for (ItemId i : history) h = advance_state(h, i);
  return h;
}

kg::CandidateSet KgqrAgent::candidates(std::span<const ItemId> history,
                                       std::span<const ItemId> excluded) const {
  return kg::select_candidates(*graph_, action_space_, history, excluded, cfg_.candidate_selection,
                               cfg_.hops, cfg_.candidate_max);
}

std::vector<double> KgqrAgent::q_values(const Tensor& state, std::span<const ItemId> candidates,
                                        bool use_target) {
  if (candidates.empty()) return {};
  Tensor items = item_values(candidates);
  return score_candidates(use_target ? target_ : online_, state, items, cfg_.mean_advantage);
}

ItemId KgqrAgent::greedy_action(const Tensor& state, std::span<const ItemId> candidates) {
  if (candidates.empty()) throw std::invalid_argument("greedy_action: empty candidate set");
  auto q = q_values(state, candidates);
  return candidates[argmax_lowest_id(q, candidates)];
}

ItemId KgqrAgent::act(const Tensor& state, std::span<const ItemId> candidates, double epsilon,
                      std::mt19937_64& rng) {
  if (candidates.empty()) throw std::invalid_argument("select_action: empty candidate set");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  // Scores are only needed on the greedy branch.
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      return candidates[pick(rng)];
    }
  }
  return greedy_action(state, candidates);
}

std::vector<double> compute_targets(KgqrAgent& agent, std::span<const Experience* const> batch,
                                    double gamma) {
  std::vector<double> y;
  y.reserve(batch.size());
  for (const Experience* e : batch) {
    if (e->terminal) {
      y.push_back(e->reward);
      continue;
    }
    if (e->next_candidates.empty()) {
      throw std::invalid_argument("compute_targets: non-terminal sample without next candidates");
    }
    Tensor s = agent.state_of(e->next_observation);
    auto online = agent.q_values(s, e->next_candidates, false);
    auto target = agent.q_values(s, e->next_candidates, true);
    y.push_back(double_q_target(e->reward, false, gamma, online, target, e->next_candidates));
  }
  return y;
}

Var squared_error(Tape& tape, Var q, std::span<const double> targets) {
  const Tensor& qv = tape.value(q);
  if (targets.empty()) throw std::invalid_argument("td_loss: empty batch");
  if (qv.rows() != targets.size() || qv.cols() != 1) {
    throw DimensionError("td_loss: predictions " + qv.shape_string() + " vs " +
                         std::to_string(targets.size()) + " targets");
  }
  Tensor y(targets.size(), 1, std::vector<double>(targets.begin(), targets.end()));
  Var diff = tape.sub(q, tape.constant(std::move(y)));
  return tape.mean(tape.mul(diff, diff));
}

Var td_loss(Tape& tape, KgqrAgent& agent, std::span<const Experience* const> batch,
            std::span<const double> targets) {
  if (batch.empty()) throw std::invalid_argument("td_loss: empty batch");
  const auto& cfg = agent.config();
  std::vector<ItemId> unique;
  for (const Experience* e : batch) {
    unique.insert(unique.end(), e->observation.begin(), e->observation.end());
    unique.push_back(e->action);
    if (cfg.mean_advantage) {
      if (e->candidates.empty()) throw std::invalid_argument("td_loss: sample lacks candidates");
      unique.insert(unique.end(), e->candidates.begin(), e->candidates.end());
    }
  }
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  auto index_of = [&](ItemId i) {
    return static_cast<std::size_t>(std::lower_bound(unique.begin(), unique.end(), i) -
                                    unique.begin());
  };

  Var embedded = agent.encoder().embed(tape, unique);
  std::vector<std::vector<std::size_t>> sequences;
  std::vector<std::size_t> action_rows;
  for (const Experience* e : batch) {
    std::vector<std::size_t> seq;
    for (ItemId i : e->observation) seq.push_back(index_of(i));
    sequences.push_back(std::move(seq));
    action_rows.push_back(index_of(e->action));
  }
  encoder::GruVars gv = encoder::bind(tape, agent.gru());
  Var states = encoder::gru_encode(tape, gv, embedded, sequences, cfg.hidden_dim);
  Var actions = tape.gather_rows(embedded, std::move(action_rows));
  QNetVars qv = bind(tape, agent.online());
  Var q = q_value(tape, qv, cfg.value_input, states, actions);

  if (cfg.mean_advantage) {
    std::vector<std::size_t> state_rows, item_rows;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      std::vector<std::size_t> grp;
      for (ItemId c : batch[b]->candidates) {
        grp.push_back(state_rows.size());
        state_rows.push_back(b);
        item_rows.push_back(index_of(c));
      }
      groups.push_back(std::move(grp));
    }
    Var a = advantage_head(tape, qv, tape.gather_rows(states, std::move(state_rows)),
                           tape.gather_rows(embedded, std::move(item_rows)));
    q = tape.sub(q, tape.segment_mean(a, std::move(groups)));
  }
  return squared_error(tape, q, targets);
}

double update_step(KgqrAgent& agent, numerics::Adam& optimizer,
                   std::span<const Experience* const> batch, double gamma, double tau) {
  std::vector<double> y = compute_targets(agent, batch, gamma);
  optimizer.zero_grad();
  Tape tape;
  Var loss = td_loss(tape, agent, batch, y);
  const double value = tape.value(loss).item();
  tape.backward(loss);
  optimizer.step();
  soft_update(agent.target(), agent.online(), tau);
  agent.mark_updated();
  return value;
}

}  // namespace kgqr::agent
