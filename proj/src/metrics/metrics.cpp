#include "kgqr/metrics/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "kgqr/error.hpp"
#include "kgqr/tsv.hpp"

namespace kgqr::metrics {

namespace {

std::size_t common_horizon(std::span<const EpisodeLog> logs) {
  if (logs.empty()) throw std::invalid_argument("metrics: no episode logs");
  const std::size_t T = logs.front().steps.size();
  if (T == 0) throw std::invalid_argument("metrics: empty episode");
  for (const auto& l : logs) {
    if (l.steps.size() != T) {
      throw DimensionError("metrics: ragged logs (" + std::to_string(l.steps.size()) + " vs " +
                           std::to_string(T) + " steps)");
    }
  }
  return T;
}

double user_reward(const EpisodeLog& log, double gamma) {
  double s = 0.0;
  double discount = 1.0;
  for (const auto& step : log.steps) {
    s += discount * step.reward;
    discount *= gamma;
  }
  return s / static_cast<double>(log.steps.size());
}

std::size_t hits(const EpisodeLog& log) {
  std::size_t n = 0;
  for (const auto& step : log.steps) n += step.hit ? 1 : 0;
  return n;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double average_reward(std::span<const EpisodeLog> logs, double gamma) {
  const std::size_t T = common_horizon(logs);
  double s = 0.0;
  for (const auto& l : logs) s += user_reward(l, gamma) * static_cast<double>(T);
  return s / (static_cast<double>(logs.size()) * static_cast<double>(T));
}

double precision_at_T(std::span<const EpisodeLog> logs) {
  const std::size_t T = common_horizon(logs);
  std::size_t total = 0;
  for (const auto& l : logs) total += hits(l);
  return static_cast<double>(total) / (static_cast<double>(logs.size()) * static_cast<double>(T));
}

double recall_at_T(std::span<const EpisodeLog> logs, std::span<const std::size_t> preference_counts) {
  common_horizon(logs);
  if (preference_counts.size() != logs.size()) {
    throw std::invalid_argument("recall_at_T: missing preference counts");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (preference_counts[i] == 0) continue;
    s += static_cast<double>(hits(logs[i])) / static_cast<double>(preference_counts[i]);
  }
  return s / static_cast<double>(logs.size());
}

EvaluationReport evaluate_logs(std::span<const EpisodeLog> logs,
                               std::span<const std::size_t> preference_counts, double gamma) {
  const std::size_t T = common_horizon(logs);
  if (preference_counts.size() != logs.size()) {
    throw std::invalid_argument("evaluate_logs: missing preference counts");
  }
  EvaluationReport r;
  r.horizon = T;
  r.gamma = gamma;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    UserMetrics u;
    u.user = logs[i].user;
    u.reward = user_reward(logs[i], gamma);
    const auto h = static_cast<double>(hits(logs[i]));
    u.precision = h / static_cast<double>(T);
    u.preferences = preference_counts[i];
    u.zero_preferences = u.preferences == 0;
    u.recall = u.zero_preferences ? 0.0 : h / static_cast<double>(u.preferences);
    r.average_reward += u.reward;
    r.precision += u.precision;
    r.recall += u.recall;
    r.per_user.push_back(u);
  }
  const auto n = static_cast<double>(logs.size());
  r.average_reward /= n;
  r.precision /= n;
  r.recall /= n;
  return r;
}

std::string report_to_text(const EvaluationReport& r) {
  std::size_t zero = 0;
  for (const auto& u : r.per_user) zero += u.zero_preferences ? 1 : 0;
  std::ostringstream os;
  os << "reward = " << fmt(r.average_reward) << '\n'
     << "precision = " << fmt(r.precision) << '\n'
     << "recall = " << fmt(r.recall) << '\n'
     << "horizon = " << r.horizon << '\n'
     << "gamma = " << fmt(r.gamma) << '\n'
     << "users = " << r.per_user.size() << '\n'
     << "zero_preference_users = " << zero << '\n'
     << "interactions = " << r.interactions << '\n'
     << "config_hash = " << std::hex << r.config_hash << std::dec << '\n';
  return os.str();
}

std::string per_user_csv(const EvaluationReport& r) {
  std::ostringstream os;
  os << "user,reward,precision,recall,preferences\n";
  for (const auto& u : r.per_user) {
    os << u.user << ',' << fmt(u.reward) << ',' << fmt(u.precision) << ',' << fmt(u.recall) << ','
       << u.preferences << '\n';
  }
  return os.str();
}

std::vector<UserMetrics> parse_per_user_csv(std::istream& in, const std::string& name) {
  std::vector<UserMetrics> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || number == 1) continue;
    auto cols = split(line, ',');
    if (cols.size() != 5) {
      throw ParseError(name + ":" + std::to_string(number) + ": expected 5 columns");
    }
    UserMetrics u;
    try {
      u.user = static_cast<sim::UserId>(std::stoul(cols[0]));
      u.reward = std::stod(cols[1]);
      u.precision = std::stod(cols[2]);
      u.recall = std::stod(cols[3]);
      u.preferences = std::stoul(cols[4]);
    } catch (const std::exception&) {
      throw ParseError(name + ":" + std::to_string(number) + ": bad number");
    }
    u.zero_preferences = u.preferences == 0;
    out.push_back(u);
  }
  return out;
}

}  // namespace kgqr::metrics
