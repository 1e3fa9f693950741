#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resm/embedding_store.hpp"

namespace resm {

using VectorView = std::span<const double>;

double dot(VectorView a, VectorView b);

// 1 / (1 + |a - b|)
double euclidean_similarity(VectorView a, VectorView b);

// Throws NumericError if either vector is zero.
double cosine_similarity(VectorView a, VectorView b);

enum class RankOrder { ascending, descending };

// Ranks of the top_n components of one vector under one ordering. Ranks are
// 1-based; equal values rank by ascending component index.
class ComponentRanking {
 public:
  ComponentRanking(RankOrder order, std::size_t dim, std::vector<std::size_t> by_rank);

  RankOrder order() const { return order_; }
  std::size_t top_n() const { return by_rank_.size(); }
  std::size_t dim() const { return rank_of_.size(); }

  // Component holding rank r (1-based).
  std::size_t component_at(std::size_t rank) const { return by_rank_[rank - 1]; }
  // 0 when the component is outside the top_n.
  std::uint32_t rank_of(std::size_t component) const { return rank_of_[component]; }

 private:
  RankOrder order_;
  std::vector<std::size_t> by_rank_;
  std::vector<std::uint32_t> rank_of_;
};

ComponentRanking rank_components(VectorView v, RankOrder order, std::size_t top_n);

// Sum of 2 / (rank_i + rank_j) over components in both top sets.
double apsyn(const ComponentRanking& ri, const ComponentRanking& rj);

struct ScoreParams {
  double k_weight = 10.0;
  std::size_t dim = 0;
};

// exp(-rank * k / d)
double score(std::size_t rank, const ScoreParams& p);

// Per-component sum of context words' scores under one ordering. An empty
// context yields the neutral fallback h = 1 everywhere.
class ContextScores {
 public:
  static ContextScores neutral(std::size_t dim);
  ContextScores(RankOrder order, std::size_t top_n, std::vector<double> h);

  bool is_neutral() const { return !order_.has_value(); }
  std::optional<RankOrder> order() const { return order_; }
  std::size_t top_n() const { return top_n_; }
  double at(std::size_t component) const { return h_[component]; }
  std::size_t dim() const { return h_.size(); }

 private:
  ContextScores() = default;
  std::optional<RankOrder> order_;
  std::size_t top_n_ = 0;
  std::vector<double> h_;
};

// Throws ContractError if the rankings disagree on ordering, top_n or dim.
// dim is taken from p for the empty case.
ContextScores context_scores(std::span<const ComponentRanking> context, const ScoreParams& p);

// Sum over the shared top components of s_i * s_j / h; components with h = 0
// are skipped.
double resm_directional(const ComponentRanking& ri, const ComponentRanking& rj,
                        const ContextScores& h, const ScoreParams& p);

struct ResmParts {
  double ascending = 0.0;
  double descending = 0.0;
  double total() const { return ascending + descending; }
};

// Both orderings, each with its own rankings of the pair and of the context.
ResmParts resm_parts(VectorView vi, VectorView vj, std::span<const VectorView> context,
                     const ScoreParams& p, std::size_t top_n);

double resm_similarity(VectorView vi, VectorView vj, std::span<const VectorView> context,
                       const ScoreParams& p, std::size_t top_n);

}  // namespace resm
