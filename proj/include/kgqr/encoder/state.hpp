#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kgqr/encoder/gcn.hpp"
#include "kgqr/encoder/gru.hpp"
#include "kgqr/kg/knowledge_graph.hpp"

namespace kgqr::encoder {

enum class EmbeddingSource {
  knowledge_graph,  // table rows are entities; items resolve through the link map
  item_table,       // table rows are catalog items (MF-pretrained)
};

// Produces the vector i_t(G) for catalog items: a row of the base table,
// optionally propagated through the GCN.
class ItemEncoder {
 public:
  ItemEncoder(const kg::KnowledgeGraph& g, Parameter table, EmbeddingSource source,
              std::optional<GcnParameters> gcn);

  std::size_t dimension() const { return table_.value.cols(); }
  bool can_embed(kg::ItemId item) const;
  bool uses_gcn() const { return gcn_.has_value(); }
  EmbeddingSource source() const { return source_; }

  // n x d, differentiable w.r.t. the table (if trainable) and GCN weights.
  Var embed(Tape& tape, std::span<const kg::ItemId> items);
  // Forward-only evaluation.
  Tensor embed_values(std::span<const kg::ItemId> items);

  Parameter& table() { return table_; }
  const Parameter& table() const { return table_; }
  GcnParameters* gcn() { return gcn_ ? &*gcn_ : nullptr; }
  std::vector<Parameter*> parameters();
  const kg::KnowledgeGraph& graph() const { return *graph_; }

 private:
  const kg::KnowledgeGraph* graph_;
  Parameter table_;
  EmbeddingSource source_;
  std::optional<GcnParameters> gcn_;
};

struct UserState {
  Tensor hidden;                         // 1 x H, equals s_t(G)
  std::size_t step = 0;
  std::vector<kg::ItemId> observation;   // clicked items, oldest first
};

// Runs the GRU over the positive-feedback history. An empty history yields
// the zero initial state.
UserState encode_state(std::span<const kg::ItemId> history, ItemEncoder& items,
                       GruParameters& gru);

// Batched form used during training: embeds the union of all history items
// once, then encodes every history. Returns B x H.
Var encode_histories(Tape& tape, ItemEncoder& items, const GruVars& gru, std::size_t hidden_dim,
                     const std::vector<std::vector<kg::ItemId>>& histories);

}  // namespace kgqr::encoder
