#include "kgqr/encoder/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "kgqr/error.hpp"

namespace kgqr::encoder {

std::vector<Parameter*> GcnParameters::parameters() {
  std::vector<Parameter*> out;
  for (std::size_t k = 0; k < layers(); ++k) {
    out.push_back(&neighbor_weights[k]);
    out.push_back(&self_weights[k]);
  }
  return out;
}

GcnParameters GcnParameters::init(std::size_t dimension, std::size_t layers,
                                  std::mt19937_64& rng) {
  if (layers == 0) throw ConfigError("gcn: need at least one layer");
  GcnParameters p;
  const double bound = 1.0 / std::sqrt(static_cast<double>(dimension));
  for (std::size_t k = 0; k < layers; ++k) {
    p.neighbor_weights.emplace_back("gcn.W" + std::to_string(k + 1),
                                    Tensor::uniform(dimension, dimension, bound, rng));
    p.self_weights.emplace_back("gcn.B" + std::to_string(k + 1),
                                Tensor::uniform(dimension, dimension, bound, rng));
  }
  return p;
}

GcnVars bind(Tape& tape, GcnParameters& gcn) {
  GcnVars v;
  for (std::size_t k = 0; k < gcn.layers(); ++k) {
    v.neighbor_weights.push_back(tape.param(gcn.neighbor_weights[k]));
    v.self_weights.push_back(tape.param(gcn.self_weights[k]));
  }
  return v;
}

Tensor aggregate_neighbors(const kg::KnowledgeGraph& g, const Tensor& embeddings,
                           kg::EntityId h) {
  if (embeddings.rows() != g.entity_count()) {
    throw DimensionError("aggregate_neighbors: embeddings cover " +
                         std::to_string(embeddings.rows()) + " of " +
                         std::to_string(g.entity_count()) + " entities");
  }
  Tensor out(1, embeddings.cols());
  const auto nbrs = g.neighbors(h);
  if (nbrs.empty()) return out;
  for (kg::EntityId t : nbrs) {
    auto row = embeddings.row_span(t);
    for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c];
  }
  const double inv = 1.0 / static_cast<double>(nbrs.size());
  for (auto& v : out.values()) v *= inv;
  return out;
}

Var integrate(Tape& tape, Var neighborhood, Var self, Var w, Var b) {
  return tape.relu(tape.add(tape.matmul(neighborhood, w), tape.matmul(self, b)));
}

Var gcn_embed(Tape& tape, const kg::KnowledgeGraph& g, const GcnVars& gcn, Parameter& table,
              std::span<const kg::EntityId> targets) {
  const std::size_t layers = gcn.neighbor_weights.size();
  if (layers == 0) throw ConfigError("gcn_embed: no layers");
  if (table.value.rows() != g.entity_count()) {
    throw DimensionError("gcn_embed: embedding table does not cover the graph");
  }
  // sets[k] lists the entities whose layer-k representation is needed.
  std::vector<std::vector<kg::EntityId>> sets(layers + 1);
  sets[layers].assign(targets.begin(), targets.end());
  std::sort(sets[layers].begin(), sets[layers].end());
  sets[layers].erase(std::unique(sets[layers].begin(), sets[layers].end()), sets[layers].end());
  for (std::size_t k = layers; k > 0; --k) {
    std::vector<kg::EntityId> below = sets[k];
    for (kg::EntityId h : sets[k]) {
      auto nbrs = g.neighbors(h);
      below.insert(below.end(), nbrs.begin(), nbrs.end());
    }
    std::sort(below.begin(), below.end());
    below.erase(std::unique(below.begin(), below.end()), below.end());
    sets[k - 1] = std::move(below);
  }

  auto index_in = [](const std::vector<kg::EntityId>& set, kg::EntityId e) {
    return static_cast<std::size_t>(std::lower_bound(set.begin(), set.end(), e) - set.begin());
  };

  Var x = tape.param_rows(table, std::vector<std::size_t>(sets[0].begin(), sets[0].end()));
  for (std::size_t k = 1; k <= layers; ++k) {
    const auto& prev = sets[k - 1];
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> self_rows;
    groups.reserve(sets[k].size());
    for (kg::EntityId h : sets[k]) {
      std::vector<std::size_t> grp;
      for (kg::EntityId t : g.neighbors(h)) grp.push_back(index_in(prev, t));
      groups.push_back(std::move(grp));
      self_rows.push_back(index_in(prev, h));
    }
    Var neighborhood = tape.segment_mean(x, std::move(groups));
    Var self = tape.gather_rows(x, std::move(self_rows));
    x = integrate(tape, neighborhood, self, gcn.neighbor_weights[k - 1], gcn.self_weights[k - 1]);
  }
  std::vector<std::size_t> out_rows;
  out_rows.reserve(targets.size());
  for (kg::EntityId e : targets) out_rows.push_back(index_in(sets[layers], e));
  return tape.gather_rows(x, std::move(out_rows));
}

Tensor item_embedding(const kg::KnowledgeGraph& g, kg::ItemId item, GcnParameters& gcn,
                      Parameter& table) {
  auto entity = g.entity_of(item);
  if (!entity) throw DimensionError("item_embedding: item " + std::to_string(item) + " is unlinked");
  Tape tape;
  GcnVars vars = bind(tape, gcn);
  const kg::EntityId e = *entity;
  Var out = gcn_embed(tape, g, vars, table, std::span<const kg::EntityId>(&e, 1));
  return tape.value(out);
}

}  // namespace kgqr::encoder
