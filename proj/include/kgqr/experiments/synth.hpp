#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kgqr/experiments/config.hpp"
#include "kgqr/numerics/tensor.hpp"

namespace kgqr::experiments {

// Clustered toy world. Every user has a primary and a secondary cluster;
// ratings come from cluster affinity plus item quality plus Gaussian noise.
// The KG links each item to attribute entities of its cluster, to a few
// items of the same cluster, and occasionally to an item of another cluster.
struct SynthData {
  std::string ratings_tsv;  // observed ratings only
  std::string triples_tsv;
  std::string links_tsv;
  std::vector<std::string> item_tokens;
  std::vector<std::size_t> item_cluster;
  std::vector<std::size_t> user_primary;
  std::vector<std::size_t> user_secondary;
  numerics::Tensor true_ratings;  // users x items, noise included, before sampling
  // cluster of every KG entity token (items and attributes)
  std::vector<std::pair<std::string, std::size_t>> entity_cluster;
};

SynthData synth_env(const SynthSpec& spec);
// Writes ratings.tsv, triples.tsv, links.tsv into `dir`.
void write_synth(const SynthData& data, const std::filesystem::path& dir);

}  // namespace kgqr::experiments
