#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "kgqr/kg/knowledge_graph.hpp"

namespace kgqr::kg {

inline constexpr std::size_t kUnboundedCandidates = std::numeric_limits<std::size_t>::max();

// Layered frontier expansion: layer l holds every tail of an edge whose head
// is in layer l-1, with layer 0 = seeds. Layers are not pruned against
// earlier layers, so a node may appear in several. Each layer is ascending.
std::vector<std::vector<EntityId>> k_hop_sets(const KnowledgeGraph& g,
                                              std::span<const EntityId> seeds, std::size_t k);

struct CandidateSet {
  // Ordered by hop of discovery, then ascending item id.
  std::vector<ItemId> items;
  // Smallest layer each item appeared in; 0 for fallback members.
  std::vector<std::uint32_t> hops;
  std::vector<EntityId> seeds;
  // Set when the neighborhood was empty and the set was filled from the full
  // unseen catalog instead.
  bool fallback = false;

  bool empty() const { return items.empty(); }
  std::size_t size() const { return items.size(); }
};

// Linked items found in layers 1..k, minus `excluded`, truncated to
// `max_size` by (hop, id). An empty result means the caller must fall back.
CandidateSet candidate_items(const KnowledgeGraph& g, std::span<const EntityId> seeds,
                             std::size_t k, std::size_t max_size,
                             std::span<const ItemId> excluded = {});

// Candidate action set for an episode step. With `use_kg`, seeds are the
// entities of the clicked `history`; when that yields nothing (no linked
// history, depleted neighborhood) the result is every item of `action_space`
// not in `excluded`, untruncated. Without `use_kg` the full unseen action
// space is returned directly.
CandidateSet select_candidates(const KnowledgeGraph& g, std::span<const ItemId> action_space,
                               std::span<const ItemId> history,
                               std::span<const ItemId> excluded, bool use_kg, std::size_t k,
                               std::size_t max_size);

}  // namespace kgqr::kg
