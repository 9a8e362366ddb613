#include "kgqr/kg/neighborhood.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "kgqr/error.hpp"

namespace kgqr::kg {

std::vector<std::vector<EntityId>> k_hop_sets(const KnowledgeGraph& g,
                                              std::span<const EntityId> seeds, std::size_t k) {
  if (seeds.empty()) throw std::invalid_argument("k_hop_sets: empty seed set");
  if (k == 0) throw std::invalid_argument("k_hop_sets: k must be >= 1");
  std::vector<std::vector<EntityId>> layers;
  layers.reserve(k);
  std::vector<EntityId> frontier(seeds.begin(), seeds.end());
  for (EntityId e : frontier) {
    if (e >= g.entity_count()) {
      throw DimensionError("k_hop_sets: seed " + std::to_string(e) + " out of range");
    }
  }
  for (std::size_t l = 0; l < k; ++l) {
    std::vector<EntityId> next;
    for (EntityId h : frontier) {
      auto tails = g.neighbors(h);
      next.insert(next.end(), tails.begin(), tails.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    layers.push_back(next);
    frontier = std::move(next);
  }
  return layers;
}

CandidateSet candidate_items(const KnowledgeGraph& g, std::span<const EntityId> seeds,
                             std::size_t k, std::size_t max_size,
                             std::span<const ItemId> excluded) {
  if (max_size == 0) throw std::invalid_argument("candidate_items: max_size must be >= 1");
  CandidateSet out;
  out.seeds.assign(seeds.begin(), seeds.end());
  const auto layers = k_hop_sets(g, seeds, k);
  const std::unordered_set<ItemId> skip(excluded.begin(), excluded.end());
  std::unordered_map<ItemId, std::uint32_t> hop_of;
  std::vector<std::pair<std::uint32_t, ItemId>> found;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (EntityId e : layers[l]) {
      auto item = g.item_of(e);
      if (!item || skip.count(*item) != 0) continue;
      if (hop_of.emplace(*item, static_cast<std::uint32_t>(l + 1)).second) {
        found.emplace_back(static_cast<std::uint32_t>(l + 1), *item);
      }
    }
  }
  std::sort(found.begin(), found.end());
  if (found.size() > max_size) found.resize(max_size);
  for (const auto& [hop, item] : found) {
    out.items.push_back(item);
    out.hops.push_back(hop);
  }
  return out;
}

CandidateSet select_candidates(const KnowledgeGraph& g, std::span<const ItemId> action_space,
                               std::span<const ItemId> history,
                               std::span<const ItemId> excluded, bool use_kg, std::size_t k,
                               std::size_t max_size) {
  if (use_kg) {
    std::vector<EntityId> seeds;
    for (ItemId i : history) {
      if (auto e = g.entity_of(i)) seeds.push_back(*e);
    }
    if (!seeds.empty()) {
      CandidateSet cs = candidate_items(g, seeds, k, max_size, excluded);
      if (!cs.empty()) return cs;
    }
  }
  CandidateSet out;
  out.fallback = use_kg;
  const std::unordered_set<ItemId> skip(excluded.begin(), excluded.end());
  for (ItemId i : action_space) {
    if (skip.count(i) == 0) {
      out.items.push_back(i);
      out.hops.push_back(0);
    }
  }
  return out;
}

}  // namespace kgqr::kg
