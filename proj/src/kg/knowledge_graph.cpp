#include "kgqr/kg/knowledge_graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <unordered_map>

#include "kgqr/error.hpp"
#include "kgqr/tsv.hpp"

namespace kgqr::kg {

KnowledgeGraph::KnowledgeGraph(std::size_t entity_count, std::size_t relation_count,
                               std::vector<Triple> triples,
                               std::vector<std::optional<EntityId>> item_entity)
    : entity_count_(entity_count),
      relation_count_(relation_count),
      item_entity_(std::move(item_entity)) {
  if (triples.empty()) throw ParseError("empty graph");
  for (const auto& t : triples) {
    check_entity(t.head, "head");
    check_entity(t.tail, "tail");
    if (t.relation >= relation_count_) {
      throw DimensionError("relation id " + std::to_string(t.relation) + " out of range " +
                           std::to_string(relation_count_));
    }
  }
  // Dedupe while keeping first-seen order.
  std::vector<Triple> sorted = triples;
  std::sort(sorted.begin(), sorted.end());
  std::vector<bool> taken(sorted.size(), false);
  triples_.reserve(triples.size());
  for (const auto& t : triples) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
    auto idx = static_cast<std::size_t>(it - sorted.begin());
    // lower_bound lands on the first slot of each run of equal triples.
    if (taken[idx]) continue;
    taken[idx] = true;
    triples_.push_back(t);
  }

  edge_offsets_.assign(entity_count_ + 1, 0);
  for (const auto& t : triples_) ++edge_offsets_[t.head + 1];
  for (std::size_t i = 0; i < entity_count_; ++i) edge_offsets_[i + 1] += edge_offsets_[i];
  edges_.resize(triples_.size());
  std::vector<std::size_t> cursor(edge_offsets_.begin(), edge_offsets_.end() - 1);
  for (const auto& t : triples_) edges_[cursor[t.head]++] = Edge{t.relation, t.tail};

  neighbor_offsets_.assign(entity_count_ + 1, 0);
  for (EntityId h = 0; h < entity_count_; ++h) {
    std::vector<EntityId> tails;
    for (std::size_t i = edge_offsets_[h]; i < edge_offsets_[h + 1]; ++i) {
      tails.push_back(edges_[i].tail);
    }
    std::sort(tails.begin(), tails.end());
    tails.erase(std::unique(tails.begin(), tails.end()), tails.end());
    neighbors_.insert(neighbors_.end(), tails.begin(), tails.end());
    neighbor_offsets_[h + 1] = neighbors_.size();
  }

  entity_item_.assign(entity_count_, std::nullopt);
  for (ItemId i = 0; i < item_entity_.size(); ++i) {
    if (!item_entity_[i]) continue;
    const EntityId e = *item_entity_[i];
    check_entity(e, "linked entity");
    if (entity_item_[e]) {
      throw DimensionError("entity " + std::to_string(e) + " linked to items " +
                           std::to_string(*entity_item_[e]) + " and " + std::to_string(i));
    }
    entity_item_[e] = i;
    linked_items_.push_back(i);
  }
}

void KnowledgeGraph::check_entity(EntityId e, const char* what) const {
  if (e >= entity_count_) {
    throw DimensionError(std::string(what) + " entity id " + std::to_string(e) +
                         " out of range " + std::to_string(entity_count_));
  }
}

std::span<const Edge> KnowledgeGraph::edges(EntityId head) const {
  check_entity(head, "query");
  return {edges_.data() + edge_offsets_[head], edge_offsets_[head + 1] - edge_offsets_[head]};
}

std::span<const EntityId> KnowledgeGraph::neighbors(EntityId head) const {
  check_entity(head, "query");
  return {neighbors_.data() + neighbor_offsets_[head],
          neighbor_offsets_[head + 1] - neighbor_offsets_[head]};
}

std::optional<EntityId> KnowledgeGraph::entity_of(ItemId item) const {
  if (item >= item_entity_.size()) return std::nullopt;
  return item_entity_[item];
}

std::optional<ItemId> KnowledgeGraph::item_of(EntityId entity) const {
  if (entity >= entity_item_.size()) return std::nullopt;
  return entity_item_[entity];
}

namespace {

std::uint32_t intern(std::unordered_map<std::string, std::uint32_t>& ids,
                     std::vector<std::string>& tokens, const std::string& token) {
  auto [it, inserted] = ids.emplace(token, static_cast<std::uint32_t>(tokens.size()));
  if (inserted) tokens.push_back(token);
  return it->second;
}

}  // namespace

LoadedGraph load_graph(std::istream& triples, std::istream& links, const std::string& triples_name,
                       const std::string& links_name) {
  LoadedGraph out;
  std::unordered_map<std::string, std::uint32_t> entity_ids;
  std::unordered_map<std::string, std::uint32_t> relation_ids;
  std::vector<Triple> parsed;
  for_each_tsv_row(triples, triples_name, 3, 3,
                   [&](const std::vector<std::string>& cols, std::size_t) {
                     const EntityId h = intern(entity_ids, out.entity_tokens, cols[0]);
                     const RelationId r = intern(relation_ids, out.relation_tokens, cols[1]);
                     const EntityId t = intern(entity_ids, out.entity_tokens, cols[2]);
                     parsed.push_back(Triple{h, r, t});
                   });
  if (parsed.empty()) throw ParseError(triples_name + ": empty graph");

  std::unordered_map<std::string, std::uint32_t> item_ids;
  std::vector<std::optional<EntityId>> item_entity;
  for_each_tsv_row(links, links_name, 2, 2,
                   [&](const std::vector<std::string>& cols, std::size_t line) {
                     auto ent = entity_ids.find(cols[1]);
                     if (ent == entity_ids.end()) {
                       throw ParseError(links_name + ":" + std::to_string(line) +
                                        ": link error: item '" + cols[0] +
                                        "' linked to unknown entity '" + cols[1] + "'");
                     }
                     const auto before = out.item_tokens.size();
                     const ItemId item = intern(item_ids, out.item_tokens, cols[0]);
                     if (out.item_tokens.size() == before) {
                       if (item_entity[item] != ent->second) {
                         throw ParseError(links_name + ":" + std::to_string(line) +
                                          ": link error: item '" + cols[0] +
                                          "' linked to two entities");
                       }
                       return;
                     }
                     item_entity.emplace_back(ent->second);
                   });
  out.graph = KnowledgeGraph(out.entity_tokens.size(), out.relation_tokens.size(),
                             std::move(parsed), std::move(item_entity));
  return out;
}

LoadedGraph load_graph(const std::filesystem::path& triples, const std::filesystem::path& links) {
  std::ifstream tf(triples);
  if (!tf) throw ParseError("cannot open triples file " + triples.string());
  std::ifstream lf(links);
  if (!lf) throw ParseError("cannot open link file " + links.string());
  return load_graph(tf, lf, triples.string(), links.string());
}

KnowledgeGraph bind_catalog(const LoadedGraph& loaded, std::span<const std::string> catalog) {
  std::unordered_map<std::string, EntityId> link;
  for (ItemId i = 0; i < loaded.item_tokens.size(); ++i) {
    link.emplace(loaded.item_tokens[i], *loaded.graph.entity_of(i));
  }
  std::vector<std::optional<EntityId>> item_entity(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    auto it = link.find(catalog[i]);
    if (it != link.end()) item_entity[i] = it->second;
  }
  const auto& g = loaded.graph;
  return KnowledgeGraph(g.entity_count(), g.relation_count(),
                        std::vector<Triple>(g.triples().begin(), g.triples().end()),
                        std::move(item_entity));
}

}  // namespace kgqr::kg
