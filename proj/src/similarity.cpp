#include "resm/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "resm/errors.hpp"

namespace resm {

namespace {

void check_same_dim(VectorView a, VectorView b) {
  if (a.size() != b.size())
    throw ContractError(fmt::format("dimension mismatch: {} vs {}", a.size(), b.size()));
}

void check_compatible(const ComponentRanking& a, const ComponentRanking& b) {
  if (a.order() != b.order()) throw ContractError("rankings use different orderings");
  if (a.top_n() != b.top_n()) throw ContractError("rankings use different top_n");
  if (a.dim() != b.dim()) throw ContractError("rankings cover different dimensions");
}

}  // namespace

double dot(VectorView a, VectorView b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double euclidean_similarity(VectorView a, VectorView b) {
  check_same_dim(a, b);
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sq += diff * diff;
  }
  return 1.0 / (1.0 + std::sqrt(sq));
}

double cosine_similarity(VectorView a, VectorView b) {
  check_same_dim(a, b);
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) throw NumericError("cosine of a zero vector");
  return dot(a, b) / (na * nb);
}

ComponentRanking::ComponentRanking(RankOrder order, std::size_t dim,
                                   std::vector<std::size_t> by_rank)
    : order_(order), by_rank_(std::move(by_rank)), rank_of_(dim, 0) {
  if (by_rank_.size() > dim) throw ContractError("top_n exceeds dimension");
  for (std::size_t r = 0; r < by_rank_.size(); ++r) {
    const std::size_t c = by_rank_[r];
    if (c >= dim || rank_of_[c] != 0) throw ContractError("ranking is not a permutation");
    rank_of_[c] = static_cast<std::uint32_t>(r + 1);
  }
}

ComponentRanking rank_components(VectorView v, RankOrder order, std::size_t top_n) {
  if (top_n == 0 || top_n > v.size())
    throw ContractError(fmt::format("top_n must be in [1, {}], got {}", v.size(), top_n));
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto before = [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return order == RankOrder::descending ? v[a] > v[b] : v[a] < v[b];
    return a < b;
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(top_n), idx.end(),
                    before);
  idx.resize(top_n);
  return ComponentRanking(order, v.size(), std::move(idx));
}

double apsyn(const ComponentRanking& ri, const ComponentRanking& rj) {
  check_compatible(ri, rj);
  double sum = 0.0;
  for (std::size_t r = 1; r <= ri.top_n(); ++r) {
    const std::size_t c = ri.component_at(r);
    if (const auto rank_j = rj.rank_of(c))
      sum += 2.0 / static_cast<double>(r + rank_j);
  }
  return sum;
}

double score(std::size_t rank, const ScoreParams& p) {
  if (rank < 1) throw ContractError("ranks start at 1");
  if (!(p.k_weight > 0.0)) throw ContractError("score weight k must be positive");
  if (p.dim == 0) throw ContractError("score dimension must be positive");
  return std::exp(-static_cast<double>(rank) * p.k_weight / static_cast<double>(p.dim));
}

ContextScores ContextScores::neutral(std::size_t dim) {
  ContextScores cs;
  cs.h_.assign(dim, 1.0);
  return cs;
}

ContextScores::ContextScores(RankOrder order, std::size_t top_n, std::vector<double> h)
    : order_(order), top_n_(top_n), h_(std::move(h)) {}

ContextScores context_scores(std::span<const ComponentRanking> context, const ScoreParams& p) {
  if (context.empty()) return ContextScores::neutral(p.dim);
  const auto& first = context.front();
  if (first.dim() != p.dim) throw ContractError("context ranking dimension differs from score dim");
  std::vector<double> h(first.dim(), 0.0);
  for (const auto& r : context) {
    check_compatible(first, r);
    for (std::size_t rank = 1; rank <= r.top_n(); ++rank) h[r.component_at(rank)] += score(rank, p);
  }
  return ContextScores(first.order(), first.top_n(), std::move(h));
}

double resm_directional(const ComponentRanking& ri, const ComponentRanking& rj,
                        const ContextScores& h, const ScoreParams& p) {
  check_compatible(ri, rj);
  if (h.dim() != ri.dim()) throw ContractError("context scores cover a different dimension");
  if (!h.is_neutral() && (*h.order() != ri.order() || h.top_n() != ri.top_n()))
    throw ContractError("context scores use a different ordering or top_n");
  double sum = 0.0;
  for (std::size_t r = 1; r <= ri.top_n(); ++r) {
    const std::size_t c = ri.component_at(r);
    const auto rank_j = rj.rank_of(c);
    if (!rank_j) continue;
    const double hc = h.at(c);
    if (hc == 0.0) continue;
    sum += score(r, p) * score(rank_j, p) / hc;
  }
  return sum;
}

namespace {

double resm_one_order(VectorView vi, VectorView vj, std::span<const VectorView> context,
                      const ScoreParams& p, std::size_t top_n, RankOrder order) {
  const auto ri = rank_components(vi, order, top_n);
  const auto rj = rank_components(vj, order, top_n);
  std::vector<ComponentRanking> ctx;
  ctx.reserve(context.size());
  for (const auto& c : context) {
    check_same_dim(vi, c);
    ctx.push_back(rank_components(c, order, top_n));
  }
  return resm_directional(ri, rj, context_scores(ctx, p), p);
}

}  // namespace

ResmParts resm_parts(VectorView vi, VectorView vj, std::span<const VectorView> context,
                     const ScoreParams& p, std::size_t top_n) {
  check_same_dim(vi, vj);
  if (p.dim != vi.size()) throw ContractError("score dimension differs from vector dimension");
  return {resm_one_order(vi, vj, context, p, top_n, RankOrder::ascending),
          resm_one_order(vi, vj, context, p, top_n, RankOrder::descending)};
}

double resm_similarity(VectorView vi, VectorView vj, std::span<const VectorView> context,
                       const ScoreParams& p, std::size_t top_n) {
  return resm_parts(vi, vj, context, p, top_n).total();
}

}  // namespace resm
