#pragma once

#include <random>
#include <span>
#include <vector>

#include "kgqr/kg/knowledge_graph.hpp"
#include "kgqr/numerics/tape.hpp"

namespace kgqr::encoder {

using numerics::Parameter;
using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

// Per-layer weights of the k-hop graph convolution. Embeddings are row
// vectors, so a layer computes relu(e_N · W_k + e_h · B_k); the stored
// matrices are the transposes of the column-vector form.
struct GcnParameters {
  std::vector<Parameter> neighbor_weights;  // W_k, d x d
  std::vector<Parameter> self_weights;      // B_k, d x d

  std::size_t layers() const { return neighbor_weights.size(); }
  std::size_t dimension() const {
    return neighbor_weights.empty() ? 0 : neighbor_weights.front().value.rows();
  }
  std::vector<Parameter*> parameters();

  // Weights uniform on ±1/sqrt(d).
  static GcnParameters init(std::size_t dimension, std::size_t layers, std::mt19937_64& rng);
};

struct GcnVars {
  std::vector<Var> neighbor_weights;
  std::vector<Var> self_weights;
};
GcnVars bind(Tape& tape, GcnParameters& gcn);

// Mean of the neighbors' rows of `embeddings`; zero row when h has none.
Tensor aggregate_neighbors(const kg::KnowledgeGraph& g, const Tensor& embeddings, kg::EntityId h);

// relu(e_n · W + e_h · B)
Var integrate(Tape& tape, Var neighborhood, Var self, Var w, Var b);

// Runs every GCN layer over the receptive field of `targets` and returns one
// row per target (duplicates allowed). Base embeddings are read from `table`
// by entity id.
Var gcn_embed(Tape& tape, const kg::KnowledgeGraph& g, const GcnVars& gcn, Parameter& table,
              std::span<const kg::EntityId> targets);

// Single-item convenience: e^K of the item's entity.
Tensor item_embedding(const kg::KnowledgeGraph& g, kg::ItemId item, GcnParameters& gcn,
                      Parameter& table);

}  // namespace kgqr::encoder
