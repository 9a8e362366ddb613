#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "kgqr/kg/knowledge_graph.hpp"

namespace kgqr::agent {

using kg::ItemId;

struct Experience {
  std::vector<ItemId> observation;       // o_t
  ItemId action = 0;                     // i_t
  double reward = 0.0;                   // r_t
  std::vector<ItemId> next_observation;  // o_{t+1}
  std::vector<ItemId> candidates;        // I_t, kept only when the mean-advantage form is on
  std::vector<ItemId> next_candidates;   // I_{t+1}
  bool terminal = false;
};

// Fixed-capacity ring; the oldest experience is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Experience e);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return data_.empty(); }
  // i = 0 is the oldest stored experience.
  const Experience& at(std::size_t i) const;
  // min(n, size) distinct experiences drawn uniformly.
  std::vector<const Experience*> sample(std::size_t n, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Experience> data_;
};

}  // namespace kgqr::agent
