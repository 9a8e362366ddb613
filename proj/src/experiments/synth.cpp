#include "kgqr/experiments/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "kgqr/tsv.hpp"

namespace kgqr::experiments {

namespace {

constexpr double kPrimary = 4.5;
constexpr double kSecondary = 3.8;
constexpr double kOther = 2.0;
constexpr double kQuality = 0.2;

std::string item_token(std::size_t i) { return "item" + std::to_string(i); }
std::string attr_token(std::size_t c, std::size_t a) {
  return "attr" + std::to_string(c) + "_" + std::to_string(a);
}

}  // namespace

SynthData synth_env(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::size_t C = spec.clusters;
  const std::size_t M = spec.items_per_cluster;
  const std::size_t n_items = C * M;
  SynthData d;

  std::uniform_real_distribution<double> quality(-kQuality, kQuality);
  std::vector<double> q(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    d.item_tokens.push_back(item_token(i));
    d.item_cluster.push_back(i / M);
    q[i] = quality(rng);
  }

  // long-tail observation odds: Zipf weight over a random item ranking
  std::vector<std::size_t> rank(n_items);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), rng);
  std::vector<double> observe(n_items);
  double total = 0.0;
  for (std::size_t i = 0; i < n_items; ++i) {
    observe[i] = std::pow(static_cast<double>(rank[i] + 1), -spec.popularity_skew);
    total += observe[i];
  }
  for (auto& w : observe) {
    w = std::min(1.0, w * spec.observed_fraction * static_cast<double>(n_items) / total);
  }

  std::uniform_int_distribution<std::size_t> pick_cluster(0, C - 1);
  std::uniform_int_distribution<std::size_t> pick_other(0, C - 2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  d.true_ratings = numerics::Tensor(spec.users, n_items);
  std::ostringstream ratings;
  char buf[32];
  for (std::size_t u = 0; u < spec.users; ++u) {
    const std::size_t p = pick_cluster(rng);
    std::size_t s = pick_other(rng);
    if (s >= p) ++s;
    d.user_primary.push_back(p);
    d.user_secondary.push_back(s);
    std::vector<std::size_t> rated;
    for (std::size_t i = 0; i < n_items; ++i) {
      const std::size_t c = d.item_cluster[i];
      const double affinity = c == p ? kPrimary : (c == s ? kSecondary : kOther);
      double r = affinity + q[i] + spec.noise * gauss(rng);
      r = std::clamp(r, 1.0, 5.0);
      d.true_ratings(u, i) = r;
      if (unit(rng) < observe[i]) rated.push_back(i);
    }
    if (rated.empty()) rated.push_back(u % n_items);
    for (std::size_t i : rated) {
      std::snprintf(buf, sizeof buf, "%.4f", d.true_ratings(u, i));
      ratings << "user" << u << '\t' << item_token(i) << '\t' << buf << '\n';
    }
  }
  d.ratings_tsv = ratings.str();

  std::ostringstream triples, links;
  std::set<std::pair<std::size_t, std::size_t>> item_edges;
  for (std::size_t i = 0; i < n_items; ++i) {
    const std::size_t c = d.item_cluster[i];
    const std::size_t a = (i % M) % spec.attributes_per_cluster;
    triples << item_token(i) << "\thas_attribute\t" << attr_token(c, a) << '\n';
    triples << attr_token(c, a) << "\tattribute_of\t" << item_token(i) << '\n';
    links << item_token(i) << '\t' << item_token(i) << '\n';
    d.entity_cluster.emplace_back(item_token(i), c);
  }
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t a = 0; a < spec.attributes_per_cluster && a < M; ++a) {
      d.entity_cluster.emplace_back(attr_token(c, a), c);
    }
  }
  std::uniform_int_distribution<std::size_t> pick_member(0, M - 1);
  for (std::size_t i = 0; i < n_items; ++i) {
    const std::size_t c = d.item_cluster[i];
    const std::size_t want = std::min(spec.related_per_item, M - 1);
    std::size_t added = 0;
    while (added < want) {
      const std::size_t j = c * M + pick_member(rng);
      if (j == i || !item_edges.emplace(i, j).second) continue;
      triples << item_token(i) << "\trelated_to\t" << item_token(j) << '\n';
      ++added;
    }
    auto distractors = static_cast<std::size_t>(std::floor(spec.distractor_rate));
    if (unit(rng) < spec.distractor_rate - std::floor(spec.distractor_rate)) ++distractors;
    for (std::size_t k = 0; k < distractors; ++k) {
      std::size_t other = pick_other(rng);
      if (other >= c) ++other;
      const std::size_t j = other * M + pick_member(rng);
      if (!item_edges.emplace(i, j).second) continue;
      triples << item_token(i) << "\trelated_to\t" << item_token(j) << '\n';
    }
  }
  d.triples_tsv = triples.str();
  d.links_tsv = links.str();
  return d;
}

void write_synth(const SynthData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic((dir / "ratings.tsv").string(), data.ratings_tsv);
  write_file_atomic((dir / "triples.tsv").string(), data.triples_tsv);
  write_file_atomic((dir / "links.tsv").string(), data.links_tsv);
}

}  // namespace kgqr::experiments
