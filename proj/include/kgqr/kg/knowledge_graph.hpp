#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kgqr::kg {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using ItemId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct Edge {
  RelationId relation = 0;
  EntityId tail = 0;
};

// Immutable triple store with an item <-> entity link map.
//
// Items are catalog indices [0, item_count). An item may be unlinked; linked
// items map to exactly one entity and no two items share an entity.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  // Validates ids, drops duplicate triples, builds adjacency.
  KnowledgeGraph(std::size_t entity_count, std::size_t relation_count,
                 std::vector<Triple> triples,
                 std::vector<std::optional<EntityId>> item_entity);

  std::size_t entity_count() const { return entity_count_; }
  std::size_t relation_count() const { return relation_count_; }
  std::size_t item_count() const { return item_entity_.size(); }
  std::size_t linked_item_count() const { return linked_items_.size(); }
  std::span<const Triple> triples() const { return triples_; }

  // Outgoing (relation, tail) edges of `head` in triple order.
  std::span<const Edge> edges(EntityId head) const;
  // Distinct tails over all relations, ascending.
  std::span<const EntityId> neighbors(EntityId head) const;

  std::optional<EntityId> entity_of(ItemId item) const;
  std::optional<ItemId> item_of(EntityId entity) const;
  // Linked items, ascending.
  std::span<const ItemId> linked_items() const { return linked_items_; }

 private:
  void check_entity(EntityId e, const char* what) const;

  std::size_t entity_count_ = 0;
  std::size_t relation_count_ = 0;
  std::vector<Triple> triples_;
  std::vector<std::size_t> edge_offsets_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> neighbor_offsets_;
  std::vector<EntityId> neighbors_;
  std::vector<std::optional<EntityId>> item_entity_;
  std::vector<std::optional<ItemId>> entity_item_;
  std::vector<ItemId> linked_items_;
};

// Graph plus the string tokens its dense ids were assigned from. Item ids are
// positions in the link file.
struct LoadedGraph {
  KnowledgeGraph graph;
  std::vector<std::string> entity_tokens;
  std::vector<std::string> relation_tokens;
  std::vector<std::string> item_tokens;
};

// Parses `head\trelation\ttail` triples and `item\tentity` links. Ids are
// assigned densely in order of first appearance. Entities that appear only in
// the link file are a link error.
LoadedGraph load_graph(std::istream& triples, std::istream& links,
                       const std::string& triples_name = "<triples>",
                       const std::string& links_name = "<links>");
LoadedGraph load_graph(const std::filesystem::path& triples, const std::filesystem::path& links);

// Re-keys the link map onto an external item catalog: catalog[i] is the token
// of item i. Catalog tokens absent from the link file stay unlinked.
KnowledgeGraph bind_catalog(const LoadedGraph& loaded, std::span<const std::string> catalog);

}  // namespace kgqr::kg
