#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resm/embedding_store.hpp"

namespace resm {

enum class HubnessMode {
  vector_literal,    // v' = v - c^gamma, componentwise signed power
  similarity_shift,  // sim(x, y) = cos(x, y) - cos(y, c_y)^gamma
};

struct HubnessConfig {
  std::size_t knn_k = 10;
  double gamma = 9.0;
  HubnessMode mode = HubnessMode::vector_literal;
  unsigned threads = 1;
};

struct Neighbor {
  std::size_t index;
  double similarity;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Descending by cosine similarity, ties by ascending word index.
using NeighborList = std::vector<Neighbor>;

// Exact k nearest neighbors of `query` by cosine over the whole vocabulary.
// Throws ContractError unless 1 <= k < space.size(), NumericError on a zero
// query or zero row.
NeighborList knn(const EmbeddingSpace& space, std::span<const double> query, std::size_t k,
                 std::optional<std::size_t> exclude = std::nullopt);

// k-NN list of every word, each excluding the word itself.
std::vector<NeighborList> knn_all(const EmbeddingSpace& space, std::size_t k,
                                  unsigned threads = 1);

// Mean of the knn_k nearest neighbors of word `index` (itself excluded).
WordVector centroid(const EmbeddingSpace& space, std::size_t index, const HubnessConfig& cfg);

// sgn(x) * |x|^gamma
double signed_pow(double x, double gamma);

struct SkewnessSample {
  std::size_t size;
  std::uint64_t seed;
};

struct SkewnessResult {
  double value = 0.0;
  bool degenerate = false;  // zero-variance N_k, value forced to 0
};

// Third standardized moment of the k-occurrence distribution N_k. With a
// sample, only that many seeded-uniform query points contribute k-NN lists;
// N_k is still tallied over every word.
SkewnessResult koccurrence_skewness(const EmbeddingSpace& space, std::size_t k,
                                    std::optional<SkewnessSample> sample = std::nullopt,
                                    unsigned threads = 1);

// Same statistic when neighbors are ranked by cos(x, y) - penalties[y].
SkewnessResult koccurrence_skewness_shifted(const EmbeddingSpace& space,
                                            std::span<const double> penalties, std::size_t k,
                                            std::optional<SkewnessSample> sample = std::nullopt,
                                            unsigned threads = 1);

// Population skewness of arbitrary counts.
SkewnessResult skewness_of(std::span<const std::size_t> counts);

// Replaces every vector by v - signed_pow(c, gamma) with centroids taken from
// the input space. Requires vector_literal mode.
EmbeddingSpace localized_center(const EmbeddingSpace& space, const HubnessConfig& cfg);

// cos(v_y, c_y)^gamma (signed power) for one word.
double localized_penalty(const EmbeddingSpace& space, std::size_t y, const HubnessConfig& cfg);

// Penalty of every word, computed in parallel.
std::vector<double> localized_penalties(const EmbeddingSpace& space, const HubnessConfig& cfg);

// cos(v_x, v_y) - cos(v_y, c_y)^gamma. Asymmetric. Requires similarity_shift mode.
double localized_similarity(const EmbeddingSpace& space, std::size_t x, std::size_t y,
                            const HubnessConfig& cfg);

}  // namespace resm
