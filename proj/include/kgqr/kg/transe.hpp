#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>

#include "kgqr/kg/knowledge_graph.hpp"
#include "kgqr/numerics/tensor.hpp"

namespace kgqr::kg {

struct TranseConfig {
  std::size_t dimension = 50;
  double margin = 1.0;
  std::size_t negatives_per_positive = 1;
  std::size_t epochs = 50;
  double learning_rate = 1e-3;

  void validate() const;
};

struct TranseModel {
  numerics::Tensor entities;   // |E| x dim, rows L2-normalized after training
  numerics::Tensor relations;  // |R| x dim
  double final_loss = 0.0;     // mean hinge loss of the last epoch
};

// ‖e_h + e_r − e_t‖₂
double transe_distance(std::span<const double> head, std::span<const double> relation,
                       std::span<const double> tail);

// max(0, margin + d(pos) − d(neg)). When the grad tensors are non-null the
// gradient is accumulated into them (same shapes as the embeddings).
double transe_margin_loss(const numerics::Tensor& entities, const numerics::Tensor& relations,
                          const Triple& positive, const Triple& negative, double margin,
                          numerics::Tensor* entity_grad = nullptr,
                          numerics::Tensor* relation_grad = nullptr);

// Margin-ranking TransE trained by SGD with uniform head-or-tail corruption.
TranseModel transe_pretrain(const KnowledgeGraph& g, const TranseConfig& cfg, std::uint64_t seed);

// Text snapshot: "kgqr-embeddings <rows> <dim>" header line, then one row per
// line of space-separated %.17g values. Loading restores bit-identical values.
void save_embeddings(std::ostream& out, const numerics::Tensor& table);
numerics::Tensor load_embeddings(std::istream& in);
void save_embeddings(const std::filesystem::path& path, const numerics::Tensor& table);
numerics::Tensor load_embeddings(const std::filesystem::path& path);

}  // namespace kgqr::kg
