#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "kgqr/numerics/tensor.hpp"
#include "kgqr/sim/ratings.hpp"

namespace kgqr::sim {

struct MfConfig {
  std::size_t dimension = 20;
  std::size_t epochs = 50;
  double learning_rate = 0.01;
  double regularization = 0.02;
  double init_scale = 0.1;
};

// Biased matrix factorization: μ + b_u + b_i + p_u·q_i.
struct MfModel {
  numerics::Tensor user_factors;  // users x dim
  numerics::Tensor item_factors;  // items x dim
  std::vector<double> user_bias;
  std::vector<double> item_bias;
  double global_mean = 0.0;
  double train_rmse = 0.0;

  std::size_t user_count() const { return user_bias.size(); }
  std::size_t item_count() const { return item_bias.size(); }
  std::size_t dimension() const { return user_factors.cols(); }
  // Unknown users or items contribute neither bias nor factors.
  double predict(UserId u, ItemId i) const;
};

struct MfSampleGrad {
  double user_bias = 0.0;
  double item_bias = 0.0;
  std::vector<double> user_factors;
  std::vector<double> item_factors;
};

// ½(r − r̂)² + ½λ(b_u² + b_i² + ‖p_u‖² + ‖q_i‖²) for one rating; fills `grad`
// with the partials w.r.t. the touched parameters when non-null.
double mf_sample_loss(const MfModel& m, const Rating& r, double regularization,
                      MfSampleGrad* grad = nullptr);

// SGD on mf_sample_loss, one shuffled pass per epoch.
MfModel fit_mf(std::span<const Rating> ratings, std::size_t user_count, std::size_t item_count,
               const MfConfig& cfg, std::uint64_t seed);

struct RewardScale {
  double raw_min = 1.0;
  double raw_max = 5.0;
  double hit_threshold = 3.5;  // on the raw scale
};

struct Feedback {
  double raw = 0.0;         // clamped prediction r̂
  double normalized = 0.0;  // affine image in [-1, 1]
  bool hit = false;         // raw > threshold
};

// Offline user model: MF instinctive feedback plus the streak term of the
// sequential reward. Immutable once fitted.
class SimulatorModel {
 public:
  static constexpr std::size_t kFactorDimension = 20;

  SimulatorModel() = default;
  SimulatorModel(MfModel mf, RewardScale scale, double eta);

  static SimulatorModel fit(std::span<const Rating> ratings, std::size_t user_count,
                            std::size_t item_count, const MfConfig& cfg, RewardScale scale,
                            double eta, std::uint64_t seed);

  bool fitted() const { return fitted_; }
  const MfModel& mf() const { return mf_; }
  const RewardScale& scale() const { return scale_; }
  double eta() const { return eta_; }
  std::size_t user_count() const { return mf_.user_count(); }
  std::size_t item_count() const { return mf_.item_count(); }

  Feedback instinctive(UserId u, ItemId i) const;
  double normalize(double raw) const;
  // Items whose raw prediction exceeds the hit threshold.
  std::size_t preference_count(UserId u) const;

  void save(std::ostream& out) const;
  static SimulatorModel load(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static SimulatorModel load(const std::filesystem::path& path);

 private:
  MfModel mf_;
  RewardScale scale_;
  double eta_ = 0.0;
  bool fitted_ = false;
};

// Training-user popularity: items by descending interaction count, ties by
// ascending id. Only items in `allowed` (when non-empty) are ranked.
struct PopularityTable {
  std::vector<ItemId> items;
  std::vector<std::size_t> counts;

  bool empty() const { return items.empty(); }
};
PopularityTable build_popularity(std::span<const Rating> ratings, std::span<const UserId> users,
                                 std::size_t item_count, std::span<const ItemId> allowed = {});

// Seeded shuffle then floor(fraction * n) users to the train side.
std::pair<std::vector<UserId>, std::vector<UserId>> split_users(std::span<const UserId> users,
                                                                double fraction,
                                                                std::uint64_t seed);

}  // namespace kgqr::sim
