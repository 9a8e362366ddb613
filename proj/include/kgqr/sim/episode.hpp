#pragma once

#include <cstddef>
#include <vector>

#include "kgqr/sim/simulator.hpp"

namespace kgqr::sim {

struct StepRecord {
  ItemId item = 0;
  double raw = 0.0;
  double normalized = 0.0;
  double reward = 0.0;
  bool hit = false;
};

struct EpisodeLog {
  UserId user = 0;
  std::vector<StepRecord> steps;
};

struct EpisodeState {
  UserId user = 0;
  std::size_t t = 0;
  std::size_t horizon = 32;
  std::size_t consecutive_positive = 0;
  std::size_t consecutive_negative = 0;
  std::vector<ItemId> recommended;  // in delivery order
  std::vector<ItemId> history;      // hits only, in delivery order
  bool done = false;
  EpisodeLog log;

  bool was_recommended(ItemId item) const;
};

struct StepOutcome {
  double reward = 0.0;
  Feedback feedback;
};

// R = r_ij + η(c_p − c_n) with the streak counters as they stood before this
// step. Afterwards r_ij > 0 extends the positive streak and anything else the
// negative one; a hit is appended to the history.
StepOutcome step(EpisodeState& state, const SimulatorModel& model, ItemId item);

// Fresh episode whose step 0 delivers the most popular item.
EpisodeState reset(const SimulatorModel& model, UserId user, const PopularityTable& popularity,
                   std::size_t horizon);

}  // namespace kgqr::sim
