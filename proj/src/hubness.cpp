#include "resm/hubness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "resm/errors.hpp"
#include "resm/parallel.hpp"
#include "resm/similarity.hpp"

namespace resm {

namespace {

bool better(const Neighbor& a, const Neighbor& b) {
  return a.similarity > b.similarity || (a.similarity == b.similarity && a.index < b.index);
}

void check_k(const EmbeddingSpace& space, std::size_t k) {
  if (k < 1 || k >= space.size())
    throw ContractError(
        fmt::format("k must be in [1, {}), got {}", space.size(), k));
}

std::vector<double> row_norms(const EmbeddingSpace& space, unsigned threads) {
  std::vector<double> norms(space.size());
  parallel_for(space.size(), threads, [&](std::size_t i) {
    norms[i] = l2_norm(space.row(i));
    if (norms[i] == 0.0) throw NumericError("zero-norm vector for '" + space.token(i) + "'");
  });
  return norms;
}

// Bounded max-heap scan: the heap front is always the worst kept neighbor.
NeighborList scan(const EmbeddingSpace& space, std::span<const double> norms,
                  std::span<const double> query, double query_norm, std::size_t k,
                  std::optional<std::size_t> exclude, std::span<const double> penalties) {
  NeighborList heap;
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (exclude && *exclude == i) continue;
    double sim = dot(space.row(i), query) / (norms[i] * query_norm);
    if (!penalties.empty()) sim -= penalties[i];
    const Neighbor cand{i, sim};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), better);
    } else if (better(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), better);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), better);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), better);
  return heap;
}

std::vector<std::size_t> query_points(std::size_t n, std::optional<SkewnessSample> sample) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (!sample || sample->size >= n) return all;
  if (sample->size == 0) throw ContractError("skewness sample size must be positive");
  std::vector<std::size_t> picked;
  picked.reserve(sample->size);
  std::mt19937_64 rng(sample->seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), sample->size, rng);
  return picked;
}

SkewnessResult skewness_impl(const EmbeddingSpace& space, std::span<const double> penalties,
                             std::size_t k, std::optional<SkewnessSample> sample,
                             unsigned threads) {
  check_k(space, k);
  const auto norms = row_norms(space, threads);
  const auto queries = query_points(space.size(), sample);
  std::vector<NeighborList> lists(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t q) {
    const std::size_t i = queries[q];
    lists[q] = scan(space, norms, space.row(i), norms[i], k, i, penalties);
  });
  std::vector<std::size_t> counts(space.size(), 0);
  for (const auto& list : lists)
    for (const auto& nb : list) ++counts[nb.index];
  return skewness_of(counts);
}

}  // namespace

NeighborList knn(const EmbeddingSpace& space, std::span<const double> query, std::size_t k,
                 std::optional<std::size_t> exclude) {
  check_k(space, k);
  if (query.size() != space.dim())
    throw ContractError(fmt::format("query has {} components, space has {}", query.size(),
                                    space.dim()));
  const double qnorm = l2_norm(query);
  if (qnorm == 0.0) throw NumericError("zero-norm k-NN query");
  const auto norms = row_norms(space, 1);
  return scan(space, norms, query, qnorm, k, exclude, {});
}

std::vector<NeighborList> knn_all(const EmbeddingSpace& space, std::size_t k, unsigned threads) {
  check_k(space, k);
  const auto norms = row_norms(space, threads);
  std::vector<NeighborList> lists(space.size());
  parallel_for(space.size(), threads, [&](std::size_t i) {
    lists[i] = scan(space, norms, space.row(i), norms[i], k, i, {});
  });
  return lists;
}

namespace {

WordVector mean_of(const EmbeddingSpace& space, const NeighborList& neighbors) {
  WordVector c(space.dim(), 0.0);
  for (const auto& nb : neighbors) {
    const auto r = space.row(nb.index);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += r[j];
  }
  const double n = static_cast<double>(neighbors.size());
  for (auto& x : c) x /= n;
  return c;
}

double penalty_from_centroid(std::span<const double> v, std::span<const double> c, double gamma) {
  // A zero centroid has no direction; it contributes no penalty.
  if (l2_norm(c) == 0.0) return 0.0;
  return signed_pow(cosine_similarity(v, c), gamma);
}

}  // namespace

WordVector centroid(const EmbeddingSpace& space, std::size_t index, const HubnessConfig& cfg) {
  if (index >= space.size()) throw ContractError("word index out of range");
  return mean_of(space, knn(space, space.row(index), cfg.knn_k, index));
}

double signed_pow(double x, double gamma) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::fabs(x), gamma), x);
}

SkewnessResult skewness_of(std::span<const std::size_t> counts) {
  if (counts.empty()) return {0.0, true};
  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (auto c : counts) mean += static_cast<double>(c);
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (auto c : counts) {
    const double dev = static_cast<double>(c) - mean;
    m2 += dev * dev;
    m3 += dev * dev * dev;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) return {0.0, true};
  return {m3 / std::pow(m2, 1.5), false};
}

SkewnessResult koccurrence_skewness(const EmbeddingSpace& space, std::size_t k,
                                    std::optional<SkewnessSample> sample, unsigned threads) {
  return skewness_impl(space, {}, k, sample, threads);
}

SkewnessResult koccurrence_skewness_shifted(const EmbeddingSpace& space,
                                            std::span<const double> penalties, std::size_t k,
                                            std::optional<SkewnessSample> sample,
                                            unsigned threads) {
  if (penalties.size() != space.size())
    throw ContractError("one penalty per word is required");
  return skewness_impl(space, penalties, k, sample, threads);
}

EmbeddingSpace localized_center(const EmbeddingSpace& space, const HubnessConfig& cfg) {
  if (cfg.mode != HubnessMode::vector_literal)
    throw ContractError("localized_center requires vector_literal mode");
  const auto lists = knn_all(space, cfg.knn_k, cfg.threads);
  const std::size_t d = space.dim();
  std::vector<double> out(space.size() * d);
  parallel_for(space.size(), cfg.threads, [&](std::size_t i) {
    const auto c = mean_of(space, lists[i]);
    const auto v = space.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double x = v[j] - signed_pow(c[j], cfg.gamma);
      if (!std::isfinite(x))
        throw NumericError("non-finite centered component for '" + space.token(i) + "'");
      out[i * d + j] = x;
    }
  });
  return space.with_matrix(std::move(out));
}

double localized_penalty(const EmbeddingSpace& space, std::size_t y, const HubnessConfig& cfg) {
  const auto c = centroid(space, y, cfg);
  return penalty_from_centroid(space.row(y), c, cfg.gamma);
}

std::vector<double> localized_penalties(const EmbeddingSpace& space, const HubnessConfig& cfg) {
  const auto lists = knn_all(space, cfg.knn_k, cfg.threads);
  std::vector<double> out(space.size());
  parallel_for(space.size(), cfg.threads, [&](std::size_t y) {
    out[y] = penalty_from_centroid(space.row(y), mean_of(space, lists[y]), cfg.gamma);
  });
  return out;
}

double localized_similarity(const EmbeddingSpace& space, std::size_t x, std::size_t y,
                            const HubnessConfig& cfg) {
  if (cfg.mode != HubnessMode::similarity_shift)
    throw ContractError("localized_similarity requires similarity_shift mode");
  if (x >= space.size() || y >= space.size()) throw ContractError("word index out of range");
  return cosine_similarity(space.row(x), space.row(y)) - localized_penalty(space, y, cfg);
}

}  // namespace resm
