#include "kgqr/kg/transe.hpp"

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

namespace kgqr::kg {

using numerics::Tensor;

void TranseConfig::validate() const {
  if (dimension < 1) throw ConfigError("transe: dimension must be >= 1");
  if (!(margin > 0.0)) throw ConfigError("transe: margin must be > 0");
  if (negatives_per_positive < 1) throw ConfigError("transe: need >= 1 negative per positive");
  if (!(learning_rate > 0.0)) throw ConfigError("transe: learning rate must be > 0");
}

double transe_distance(std::span<const double> head, std::span<const double> relation,
                       std::span<const double> tail) {
  if (head.size() != relation.size() || head.size() != tail.size()) {
    throw DimensionError("transe_distance: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    const double x = head[i] + relation[i] - tail[i];
    s += x * x;
  }
  return std::sqrt(s);
}

namespace {

// Adds sign * ∂d/∂(h, r, t) for one triple.
void accumulate_distance_grad(const Tensor& entities, const Tensor& relations, const Triple& t,
                              double sign, Tensor* entity_grad, Tensor* relation_grad) {
  const auto h = entities.row_span(t.head);
  const auto r = relations.row_span(t.relation);
  const auto tl = entities.row_span(t.tail);
  const double d = transe_distance(h, r, tl);
  if (d == 0.0) return;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double g = sign * (h[i] + r[i] - tl[i]) / d;
    if (entity_grad) {
      (*entity_grad)(t.head, i) += g;
      (*entity_grad)(t.tail, i) -= g;
    }
    if (relation_grad) (*relation_grad)(t.relation, i) += g;
  }
}

void normalize_rows(Tensor& t) {
  for (std::size_t r = 0; r < t.rows(); ++r) {
    auto row = t.row_span(r);
    double n = 0.0;
    for (double v : row) n += v * v;
    n = std::sqrt(n);
    if (n > 0.0) {
      for (auto& v : row) v /= n;
    }
  }
}

}  // namespace

double transe_margin_loss(const Tensor& entities, const Tensor& relations, const Triple& positive,
                          const Triple& negative, double margin, Tensor* entity_grad,
                          Tensor* relation_grad) {
  const double dp = transe_distance(entities.row_span(positive.head),
                                    relations.row_span(positive.relation),
                                    entities.row_span(positive.tail));
  const double dn = transe_distance(entities.row_span(negative.head),
                                    relations.row_span(negative.relation),
                                    entities.row_span(negative.tail));
  const double loss = margin + dp - dn;
  if (loss <= 0.0) return 0.0;
  accumulate_distance_grad(entities, relations, positive, 1.0, entity_grad, relation_grad);
  accumulate_distance_grad(entities, relations, negative, -1.0, entity_grad, relation_grad);
  return loss;
}

TranseModel transe_pretrain(const KnowledgeGraph& g, const TranseConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (g.triples().empty()) throw std::invalid_argument("transe_pretrain: empty graph");
  std::mt19937_64 rng(seed);
  const double bound = 6.0 / std::sqrt(static_cast<double>(cfg.dimension));
  TranseModel model;
  model.entities = Tensor::uniform(g.entity_count(), cfg.dimension, bound, rng);
  model.relations = Tensor::uniform(g.relation_count(), cfg.dimension, bound, rng);
  normalize_rows(model.relations);

  const auto triples = g.triples();
  std::vector<std::size_t> order(triples.size());
  std::iota(order.begin(), order.end(), 0);
  std::uniform_int_distribution<EntityId> pick_entity(
      0, static_cast<EntityId>(g.entity_count() - 1));
  std::bernoulli_distribution corrupt_head(0.5);

  Tensor eg(model.entities.rows(), model.entities.cols());
  Tensor rg(model.relations.rows(), model.relations.cols());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    normalize_rows(model.entities);
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t idx : order) {
      const Triple& pos = triples[idx];
      for (std::size_t n = 0; n < cfg.negatives_per_positive; ++n) {
        Triple neg = pos;
        if (g.entity_count() > 1) {
          EntityId& slot = corrupt_head(rng) ? neg.head : neg.tail;
          const EntityId original = slot;
          do {
            slot = pick_entity(rng);
          } while (slot == original);
        }
        // Only the rows touched by this pair carry gradient.
        const double loss =
            transe_margin_loss(model.entities, model.relations, pos, neg, cfg.margin, &eg, &rg);
        total += loss;
        ++pairs;
        if (loss <= 0.0) continue;
        for (EntityId e : {pos.head, pos.tail, neg.head, neg.tail}) {
          auto row = model.entities.row_span(e);
          auto grow = eg.row_span(e);
          for (std::size_t i = 0; i < row.size(); ++i) {
            row[i] -= cfg.learning_rate * grow[i];
            grow[i] = 0.0;
          }
        }
        auto rrow = model.relations.row_span(pos.relation);
        auto rgrow = rg.row_span(pos.relation);
        for (std::size_t i = 0; i < rrow.size(); ++i) {
          rrow[i] -= cfg.learning_rate * rgrow[i];
          rgrow[i] = 0.0;
        }
      }
    }
    model.final_loss = pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
  }
  normalize_rows(model.entities);
  return model;
}

void save_embeddings(std::ostream& out, const Tensor& table) {
  out << "kgqr-embeddings " << table.rows() << ' ' << table.cols() << '\n';
  char buf[32];
  for (std::size_t r = 0; r < table.rows(); ++r) {
    auto row = table.row_span(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

Tensor load_embeddings(std::istream& in) {
  std::string magic;
  std::size_t rows = 0, cols = 0;
  if (!(in >> magic >> rows >> cols) || magic != "kgqr-embeddings") {
    throw ParseError("embedding snapshot: bad header");
  }
  Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::string tok;
    if (!(in >> tok)) throw ParseError("embedding snapshot: truncated at value " + std::to_string(i));
    t[i] = std::strtod(tok.c_str(), nullptr);
  }
  return t;
}

void save_embeddings(const std::filesystem::path& path, const Tensor& table) {
  std::ostringstream os;
  save_embeddings(os, table);
  write_file_atomic(path.string(), os.str());
}

Tensor load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embedding snapshot " + path.string());
  return load_embeddings(in);
}

}  // namespace kgqr::kg
