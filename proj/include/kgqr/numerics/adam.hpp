#pragma once

#include <cstdint>
#include <vector>

#include "kgqr/numerics/tape.hpp"

namespace kgqr::numerics {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction over a fixed set of parameters. Reads each
// parameter's accumulated grad; non-trainable parameters are skipped.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamConfig config = {});

  // Applies one update. Rejects the whole step (no parameter touched) if any
  // gradient is non-finite or shaped differently from its parameter.
  void step();
  void zero_grad();

  std::uint64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }
  const Tensor& first_moment(std::size_t i) const { return first_[i]; }
  const Tensor& second_moment(std::size_t i) const { return second_[i]; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> first_;
  std::vector<Tensor> second_;
  AdamConfig config_;
  std::uint64_t step_ = 0;
};

}  // namespace kgqr::numerics
