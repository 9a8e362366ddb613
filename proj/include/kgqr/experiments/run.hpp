#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kgqr/agent/dqn.hpp"
#include "kgqr/experiments/config.hpp"
#include "kgqr/kg/knowledge_graph.hpp"
#include "kgqr/metrics/metrics.hpp"
#include "kgqr/sim/episode.hpp"

namespace kgqr::experiments {

struct Dataset {
  sim::RatingsData ratings;
  kg::LoadedGraph loaded;
  kg::KnowledgeGraph graph;  // link map keyed by ratings catalog ids
  std::vector<sim::UserId> train_users;
  std::vector<sim::UserId> test_users;
  std::vector<std::size_t> test_preferences;  // aligned with test_users
  sim::SimulatorModel simulator;
  sim::PopularityTable popularity_all;     // every catalog item
  sim::PopularityTable popularity_linked;  // KG-linked items only
  std::size_t unlinked_items = 0;
  std::size_t dropped_users = 0;
};

// Loads ratings and graph, applies the configured filters, splits users and
// fits the simulator.
Dataset ingest(const ExperimentConfig& cfg);
Dataset ingest(std::istream& ratings, std::istream& triples, std::istream& links,
               const ExperimentConfig& cfg);

const sim::PopularityTable& popularity_for(const Dataset& data, const agent::AgentConfig& cfg);

// Builds the agent with pretrained base embeddings: TransE entity vectors
// for KG variants, MF item factors (training users only) otherwise.
std::unique_ptr<agent::KgqrAgent> make_agent(const Dataset& data, const ExperimentConfig& cfg,
                                             std::uint64_t seed);

// Test users actually evaluated (first eval_users of the split when capped).
std::vector<sim::UserId> evaluation_users(const Dataset& data, const ExperimentConfig& cfg);

metrics::EvaluationReport evaluate_greedy(agent::KgqrAgent& agent, const Dataset& data,
                                          const ExperimentConfig& cfg);
// Popular item first, then uniform over unseen items.
metrics::EvaluationReport evaluate_random(const Dataset& data, const ExperimentConfig& cfg,
                                          std::uint64_t seed);

struct CurvePoint {
  std::size_t interactions = 0;
  double reward = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct RunArtifacts {
  std::uint64_t seed = 0;
  std::vector<CurvePoint> curve;
  metrics::EvaluationReport report;
  std::filesystem::path directory;  // empty when nothing was written
  std::filesystem::path checkpoint;
  std::string config_text;
  std::uint64_t config_hash = 0;
  std::size_t interactions = 0;
  std::size_t updates = 0;
};

std::string curve_csv(const std::vector<CurvePoint>& curve, std::uint64_t seed);
std::vector<CurvePoint> parse_curve_csv(std::istream& in, const std::string& name);

// One training run. With a non-empty `out_dir` the run's files are written
// there: curve.csv, report.txt, per_user.csv, checkpoint.bin, config.txt.
RunArtifacts run_seed(const Dataset& data, const ExperimentConfig& cfg, std::uint64_t seed,
                      const std::filesystem::path& out_dir = {});

struct Aggregate {
  double reward_mean = 0.0, reward_std = 0.0;
  double precision_mean = 0.0, precision_std = 0.0;
  double recall_mean = 0.0, recall_std = 0.0;
};
Aggregate aggregate(const std::vector<RunArtifacts>& runs);
std::string aggregate_text(const Aggregate& a, std::size_t runs);

// Every seed of cfg.seeds; writes out_dir/seed_<N>/ and out_dir/aggregate.txt.
std::vector<RunArtifacts> run_experiment(const ExperimentConfig& cfg,
                                         const std::filesystem::path& out_dir);

// First curve point whose reward reaches `threshold`.
std::optional<std::size_t> interactions_to_threshold(const std::vector<CurvePoint>& curve,
                                                     double threshold);

struct MetricComparison {
  std::string metric;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

// Paired per-user comparison; user lists must coincide.
std::vector<MetricComparison> compare_users(const std::vector<metrics::UserMetrics>& a,
                                            const std::vector<metrics::UserMetrics>& b,
                                            double alpha = 0.05);
// Reads seed_*/per_user.csv from both directories, averages each user's
// values over seeds and compares.
std::vector<MetricComparison> compare_runs(const std::filesystem::path& a,
                                           const std::filesystem::path& b, double alpha = 0.05);
std::string comparison_text(const std::vector<MetricComparison>& rows);

struct SweepPoint {
  std::size_t candidate_max = 0;
  std::uint64_t seed = 0;
  metrics::EvaluationReport report;
};
// Full KGQR trained once per (size, seed).
std::vector<SweepPoint> sweep_candidates(const Dataset& data, const ExperimentConfig& cfg,
                                         const std::vector<std::size_t>& sizes,
                                         const std::filesystem::path& out_dir = {});
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace kgqr::experiments
