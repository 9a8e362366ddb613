#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kgqr/agent/dqn.hpp"
#include "kgqr/agent/trainer.hpp"
#include "kgqr/kg/transe.hpp"
#include "kgqr/sim/simulator.hpp"

namespace kgqr::experiments {

struct SynthSpec {
  std::size_t clusters = 5;
  std::size_t items_per_cluster = 10;
  std::size_t users = 250;
  double noise = 0.3;
  std::size_t attributes_per_cluster = 3;
  std::size_t related_per_item = 4;     // intra-cluster item-item edges
  double distractor_rate = 1.0;         // cross-cluster edges per item (expected)
  double observed_fraction = 0.3;       // share of items each user rated
  double popularity_skew = 1.5;         // Zipf exponent on per-item observation odds
  std::uint64_t seed = 7;

  void validate() const;
};

struct ExperimentConfig {
  // data
  std::string dataset = "files";  // files | synthetic
  std::filesystem::path ratings;
  std::filesystem::path triples;
  std::filesystem::path links;
  SynthSpec synth;
  double binarize_threshold = 0.0;  // applied when binarize is set
  bool binarize = false;
  std::size_t min_interactions = 0;
  double train_fraction = 0.8;
  std::uint64_t split_seed = 0;

  // simulator
  double eta = 0.1;
  bool eta_any = false;  // lift the {0, 0.1, 0.2} restriction
  sim::RewardScale scale;
  sim::MfConfig simulator_mf;

  // embeddings
  kg::TranseConfig transe;
  sim::MfConfig item_mf;  // KGQR-KG item embeddings; dimension follows embedding_dim

  agent::AgentConfig agent;
  agent::TrainConfig train;
  std::optional<double> eval_gamma;  // unset: same as train.gamma
  std::size_t eval_users = 0;  // 0 = every test user
  std::vector<std::size_t> candidate_sizes{1000, 2000, 3000, 5000, 10000};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  double effective_eval_gamma() const { return eval_gamma.value_or(train.gamma); }
  void validate() const;
};

// Flat `key = value` lines; '#' starts a comment. Unknown keys and malformed
// values raise ConfigError naming the line.
ExperimentConfig parse_config(const std::string& text, const std::string& name = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);
// Every key with its effective value, sorted by key. Round-trips through
// parse_config.
std::string canonical_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Applies one `key = value` assignment.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

SynthSpec parse_synth_spec(const std::string& text, const std::string& name = "<spec>");

}  // namespace kgqr::experiments
