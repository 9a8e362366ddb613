#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kgqr/sim/episode.hpp"

namespace kgqr::metrics {

using sim::EpisodeLog;

// (1/(#users·T)) Σ_users Σ_{t=0}^{T-1} γ^t R_t
double average_reward(std::span<const EpisodeLog> logs, double gamma);
// Fraction of steps that were hits.
double precision_at_T(std::span<const EpisodeLog> logs);
// Mean over users of hits / #preferences; preference_counts[i] belongs to
// logs[i]. Users with zero preferences contribute 0.
double recall_at_T(std::span<const EpisodeLog> logs, std::span<const std::size_t> preference_counts);

struct UserMetrics {
  sim::UserId user = 0;
  double reward = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t preferences = 0;
  bool zero_preferences = false;
};

struct EvaluationReport {
  double average_reward = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t horizon = 0;
  double gamma = 1.0;
  std::size_t interactions = 0;  // training interactions consumed when evaluated
  std::uint64_t config_hash = 0;
  std::vector<UserMetrics> per_user;
};

// Aggregates are the plain mean of the per-user values.
EvaluationReport evaluate_logs(std::span<const EpisodeLog> logs,
                               std::span<const std::size_t> preference_counts, double gamma);

// Flat `key = value` record.
std::string report_to_text(const EvaluationReport& report);
// user,reward,precision,recall,preferences
std::string per_user_csv(const EvaluationReport& report);
std::vector<UserMetrics> parse_per_user_csv(std::istream& in, const std::string& name);

}  // namespace kgqr::metrics
