#include "kgqr/sim/episode.hpp"

#include <algorithm>

#include "kgqr/error.hpp"

namespace kgqr::sim {

bool EpisodeState::was_recommended(ItemId item) const {
  return std::find(recommended.begin(), recommended.end(), item) != recommended.end();
}

StepOutcome step(EpisodeState& state, const SimulatorModel& model, ItemId item) {
  if (state.done) throw StateError("step() on a finished episode");
  if (state.was_recommended(item)) {
    throw StateError("item " + std::to_string(item) + " already recommended this episode");
  }
  StepOutcome out;
  out.feedback = model.instinctive(state.user, item);
  const double streak = static_cast<double>(state.consecutive_positive) -
                        static_cast<double>(state.consecutive_negative);
  out.reward = out.feedback.normalized + model.eta() * streak;
  if (out.feedback.normalized > 0.0) {
    ++state.consecutive_positive;
    state.consecutive_negative = 0;
  } else {
    ++state.consecutive_negative;
    state.consecutive_positive = 0;
  }
  state.recommended.push_back(item);
  if (out.feedback.hit) state.history.push_back(item);
  state.log.steps.push_back(StepRecord{item, out.feedback.raw, out.feedback.normalized,
                                       out.reward, out.feedback.hit});
  ++state.t;
  if (state.t >= state.horizon) state.done = true;
  return out;
}

EpisodeState reset(const SimulatorModel& model, UserId user, const PopularityTable& popularity,
                   std::size_t horizon) {
  if (popularity.empty()) throw std::invalid_argument("reset: empty popularity table");
  if (horizon == 0) throw ConfigError("reset: horizon must be >= 1");
  EpisodeState s;
  s.user = user;
  s.horizon = horizon;
  s.log.user = user;
  step(s, model, popularity.items.front());
  return s;
}

}  // namespace kgqr::sim
