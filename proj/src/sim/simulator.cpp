#include "kgqr/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "kgqr/error.hpp"
#include "kgqr/tsv.hpp"

namespace kgqr::sim {

using numerics::Tensor;

double MfModel::predict(UserId u, ItemId i) const {
  double p = global_mean;
  const bool known_user = u < user_bias.size();
  const bool known_item = i < item_bias.size();
  if (known_user) p += user_bias[u];
  if (known_item) p += item_bias[i];
  if (known_user && known_item) {
    auto pu = user_factors.row_span(u);
    auto qi = item_factors.row_span(i);
    for (std::size_t k = 0; k < pu.size(); ++k) p += pu[k] * qi[k];
  }
  return p;
}

double mf_sample_loss(const MfModel& m, const Rating& r, double regularization,
                      MfSampleGrad* grad) {
  if (r.user >= m.user_count() || r.item >= m.item_count()) {
    throw DimensionError("mf_sample_loss: rating outside the model");
  }
  const double err = r.value - m.predict(r.user, r.item);
  auto pu = m.user_factors.row_span(r.user);
  auto qi = m.item_factors.row_span(r.item);
  const double bu = m.user_bias[r.user];
  const double bi = m.item_bias[r.item];
  double norm = bu * bu + bi * bi;
  for (std::size_t k = 0; k < pu.size(); ++k) norm += pu[k] * pu[k] + qi[k] * qi[k];
  if (grad) {
    grad->user_bias = -err + regularization * bu;
    grad->item_bias = -err + regularization * bi;
    grad->user_factors.resize(pu.size());
    grad->item_factors.resize(qi.size());
    for (std::size_t k = 0; k < pu.size(); ++k) {
      grad->user_factors[k] = -err * qi[k] + regularization * pu[k];
      grad->item_factors[k] = -err * pu[k] + regularization * qi[k];
    }
  }
  return 0.5 * err * err + 0.5 * regularization * norm;
}

MfModel fit_mf(std::span<const Rating> ratings, std::size_t user_count, std::size_t item_count,
               const MfConfig& cfg, std::uint64_t seed) {
  if (ratings.empty()) throw std::invalid_argument("fit_mf: no interactions");
  if (cfg.dimension == 0) throw ConfigError("fit_mf: dimension must be >= 1");
  for (const auto& r : ratings) {
    if (r.user >= user_count || r.item >= item_count) {
      throw DimensionError("fit_mf: rating references user/item outside the declared counts");
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> init(0.0, cfg.init_scale);
  MfModel m;
  m.user_factors = Tensor(user_count, cfg.dimension);
  m.item_factors = Tensor(item_count, cfg.dimension);
  for (auto& v : m.user_factors.values()) v = init(rng);
  for (auto& v : m.item_factors.values()) v = init(rng);
  m.user_bias.assign(user_count, 0.0);
  m.item_bias.assign(item_count, 0.0);
  double total = 0.0;
  for (const auto& r : ratings) total += r.value;
  m.global_mean = total / static_cast<double>(ratings.size());

  std::vector<std::size_t> order(ratings.size());
  std::iota(order.begin(), order.end(), 0);
  const double lr = cfg.learning_rate;
  const double reg = cfg.regularization;
  MfSampleGrad g;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const Rating& r = ratings[idx];
      mf_sample_loss(m, r, reg, &g);
      m.user_bias[r.user] -= lr * g.user_bias;
      m.item_bias[r.item] -= lr * g.item_bias;
      auto pu = m.user_factors.row_span(r.user);
      auto qi = m.item_factors.row_span(r.item);
      for (std::size_t k = 0; k < pu.size(); ++k) {
        pu[k] -= lr * g.user_factors[k];
        qi[k] -= lr * g.item_factors[k];
      }
    }
  }
  double sq = 0.0;
  for (const auto& r : ratings) {
    const double e = r.value - m.predict(r.user, r.item);
    sq += e * e;
  }
  m.train_rmse = std::sqrt(sq / static_cast<double>(ratings.size()));
  if (!std::isfinite(m.train_rmse)) throw NumericError("fit_mf diverged");
  return m;
}

SimulatorModel::SimulatorModel(MfModel mf, RewardScale scale, double eta)
    : mf_(std::move(mf)), scale_(scale), eta_(eta), fitted_(true) {
  if (mf_.dimension() != kFactorDimension) {
    throw ConfigError("simulator: factor dimension must be " + std::to_string(kFactorDimension));
  }
  if (!(scale_.raw_max > scale_.raw_min)) throw ConfigError("simulator: empty rating scale");
}

SimulatorModel SimulatorModel::fit(std::span<const Rating> ratings, std::size_t user_count,
                                   std::size_t item_count, const MfConfig& cfg, RewardScale scale,
                                   double eta, std::uint64_t seed) {
  return SimulatorModel(fit_mf(ratings, user_count, item_count, cfg, seed), scale, eta);
}

double SimulatorModel::normalize(double raw) const {
  return 2.0 * (raw - scale_.raw_min) / (scale_.raw_max - scale_.raw_min) - 1.0;
}

Feedback SimulatorModel::instinctive(UserId u, ItemId i) const {
  if (!fitted_) throw StateError("simulator used before fitting");
  Feedback f;
  f.raw = std::clamp(mf_.predict(u, i), scale_.raw_min, scale_.raw_max);
  f.normalized = normalize(f.raw);
  f.hit = f.raw > scale_.hit_threshold;
  return f;
}

std::size_t SimulatorModel::preference_count(UserId u) const {
  std::size_t n = 0;
  for (ItemId i = 0; i < item_count(); ++i) {
    if (instinctive(u, i).hit) ++n;
  }
  return n;
}

namespace {

void write_values(std::ostream& out, std::span<const double> values) {
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out << (i ? " " : "") << buf;
  }
  out << '\n';
}

void read_values(std::istream& in, std::span<double> values, const char* what) {
  for (auto& v : values) {
    std::string tok;
    if (!(in >> tok)) throw ParseError(std::string("simulator snapshot: truncated ") + what);
    v = std::strtod(tok.c_str(), nullptr);
  }
}

}  // namespace

void SimulatorModel::save(std::ostream& out) const {
  out << "kgqr-simulator 1\n";
  out << "users " << user_count() << " items " << item_count() << " dim " << mf_.dimension()
      << '\n';
  const double header[] = {scale_.raw_min, scale_.raw_max, scale_.hit_threshold, eta_,
                           mf_.global_mean, mf_.train_rmse};
  write_values(out, header);
  write_values(out, mf_.user_bias);
  write_values(out, mf_.item_bias);
  write_values(out, mf_.user_factors.values());
  write_values(out, mf_.item_factors.values());
}

SimulatorModel SimulatorModel::load(std::istream& in) {
  std::string magic, k1, k2, k3;
  int version = 0;
  std::size_t users = 0, items = 0, dim = 0;
  if (!(in >> magic >> version) || magic != "kgqr-simulator" || version != 1) {
    throw ParseError("simulator snapshot: bad header");
  }
  if (!(in >> k1 >> users >> k2 >> items >> k3 >> dim) || k1 != "users" || k2 != "items" ||
      k3 != "dim") {
    throw ParseError("simulator snapshot: bad dimensions line");
  }
  double header[6];
  read_values(in, header, "header");
  MfModel mf;
  mf.user_bias.resize(users);
  mf.item_bias.resize(items);
  mf.user_factors = Tensor(users, dim);
  mf.item_factors = Tensor(items, dim);
  read_values(in, mf.user_bias, "user bias");
  read_values(in, mf.item_bias, "item bias");
  read_values(in, mf.user_factors.values(), "user factors");
  read_values(in, mf.item_factors.values(), "item factors");
  mf.global_mean = header[4];
  mf.train_rmse = header[5];
  return SimulatorModel(std::move(mf), RewardScale{header[0], header[1], header[2]}, header[3]);
}

void SimulatorModel::save(const std::filesystem::path& path) const {
  std::ostringstream os;
  save(os);
  write_file_atomic(path.string(), os.str());
}

SimulatorModel SimulatorModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open simulator snapshot " + path.string());
  return load(in);
}

PopularityTable build_popularity(std::span<const Rating> ratings, std::span<const UserId> users,
                                 std::size_t item_count, std::span<const ItemId> allowed) {
  std::vector<bool> in_users;
  for (UserId u : users) {
    if (u >= in_users.size()) in_users.resize(u + 1, false);
    in_users[u] = true;
  }
  std::vector<std::size_t> counts(item_count, 0);
  for (const auto& r : ratings) {
    if (r.user < in_users.size() && in_users[r.user] && r.item < item_count) ++counts[r.item];
  }
  std::vector<ItemId> items;
  if (allowed.empty()) {
    items.resize(item_count);
    std::iota(items.begin(), items.end(), 0);
  } else {
    items.assign(allowed.begin(), allowed.end());
  }
  std::stable_sort(items.begin(), items.end(), [&](ItemId a, ItemId b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return a < b;
  });
  PopularityTable t;
  for (ItemId i : items) {
    if (counts[i] == 0) continue;
    t.items.push_back(i);
    t.counts.push_back(counts[i]);
  }
  return t;
}

std::pair<std::vector<UserId>, std::vector<UserId>> split_users(std::span<const UserId> users,
                                                                double fraction,
                                                                std::uint64_t seed) {
  if (users.size() < 2) throw std::invalid_argument("split_users: need at least 2 users");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split_users: fraction must lie in (0, 1)");
  }
  std::vector<UserId> shuffled(users.begin(), users.end());
  std::mt19937_64 rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(users.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, users.size() - 1);
  std::vector<UserId> train(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<UserId> test(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train), shuffled.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

}  // namespace kgqr::sim
