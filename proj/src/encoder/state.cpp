#include "kgqr/encoder/state.hpp"

#include <algorithm>
#include <unordered_map>

#include "kgqr/error.hpp"

namespace kgqr::encoder {

ItemEncoder::ItemEncoder(const kg::KnowledgeGraph& g, Parameter table, EmbeddingSource source,
                         std::optional<GcnParameters> gcn)
    : graph_(&g), table_(std::move(table)), source_(source), gcn_(std::move(gcn)) {
  if (source_ == EmbeddingSource::knowledge_graph && table_.value.rows() != g.entity_count()) {
    throw DimensionError("item encoder: entity table has " + std::to_string(table_.value.rows()) +
                         " rows for " + std::to_string(g.entity_count()) + " entities");
  }
  if (gcn_ && source_ != EmbeddingSource::knowledge_graph) {
    throw ConfigError("item encoder: GCN propagation requires knowledge-graph embeddings");
  }
  if (gcn_ && gcn_->dimension() != table_.value.cols()) {
    throw DimensionError("item encoder: GCN dimension differs from embedding dimension");
  }
}

bool ItemEncoder::can_embed(kg::ItemId item) const {
  if (source_ == EmbeddingSource::item_table) return item < table_.value.rows();
  return graph_->entity_of(item).has_value();
}

std::vector<Parameter*> ItemEncoder::parameters() {
  std::vector<Parameter*> out{&table_};
  if (gcn_) {
    auto g = gcn_->parameters();
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

Var ItemEncoder::embed(Tape& tape, std::span<const kg::ItemId> items) {
  std::vector<std::size_t> rows;
  rows.reserve(items.size());
  for (kg::ItemId i : items) {
    if (!can_embed(i)) throw DimensionError("item " + std::to_string(i) + " has no embedding");
    rows.push_back(source_ == EmbeddingSource::item_table ? i : *graph_->entity_of(i));
  }
  if (!gcn_) return tape.param_rows(table_, std::move(rows));
  GcnVars vars = bind(tape, *gcn_);
  std::vector<kg::EntityId> entities(rows.begin(), rows.end());
  return gcn_embed(tape, *graph_, vars, table_, entities);
}

Tensor ItemEncoder::embed_values(std::span<const kg::ItemId> items) {
  Tape tape;
  return tape.value(embed(tape, items));
}

UserState encode_state(std::span<const kg::ItemId> history, ItemEncoder& items,
                       GruParameters& gru) {
  Tape tape;
  GruVars vars = bind(tape, gru);
  std::vector<std::vector<kg::ItemId>> batch{{history.begin(), history.end()}};
  Var h = encode_histories(tape, items, vars, gru.hidden_dim(), batch);
  UserState s;
  s.hidden = tape.value(h);
  s.step = history.size();
  s.observation.assign(history.begin(), history.end());
  return s;
}

Var encode_histories(Tape& tape, ItemEncoder& items, const GruVars& gru, std::size_t hidden_dim,
                     const std::vector<std::vector<kg::ItemId>>& histories) {
  std::vector<kg::ItemId> unique;
  for (const auto& h : histories) unique.insert(unique.end(), h.begin(), h.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.empty()) return tape.constant(Tensor(histories.size(), hidden_dim));

  Var embedded = items.embed(tape, unique);
  std::vector<std::vector<std::size_t>> sequences;
  sequences.reserve(histories.size());
  for (const auto& h : histories) {
    std::vector<std::size_t> seq;
    seq.reserve(h.size());
    for (kg::ItemId i : h) {
      seq.push_back(static_cast<std::size_t>(
          std::lower_bound(unique.begin(), unique.end(), i) - unique.begin()));
    }
    sequences.push_back(std::move(seq));
  }
  return gru_encode(tape, gru, embedded, sequences, hidden_dim);
}

}  // namespace kgqr::encoder
