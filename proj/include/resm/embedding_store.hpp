#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace resm {

// Dense components of a single word; length equals the owning space's dimension.
using WordVector = std::vector<double>;

enum class CaseFolding {
  exact,      // token must match byte for byte
  lowercase,  // the query is ASCII-lowercased before an exact lookup
};

// Vocabulary plus a contiguous row-major word-count x dimension matrix.
// Immutable once built; every transform returns a new space.
class EmbeddingSpace {
 public:
  // Validates all invariants: non-empty whitespace-free unique tokens, one
  // row per token, finite components. Throws ContractError otherwise.
  EmbeddingSpace(std::vector<std::string> tokens, std::vector<double> matrix,
                 std::size_t dim);

  std::size_t size() const { return tokens_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> row(std::size_t index) const {
    return {matrix_.data() + index * dim_, dim_};
  }
  const std::string& token(std::size_t index) const { return tokens_[index]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::span<const double> matrix() const { return matrix_; }

  std::optional<std::size_t> index_of(std::string_view word,
                                      CaseFolding fold = CaseFolding::exact) const;

  // Same vocabulary, new components. Used by transforms.
  EmbeddingSpace with_matrix(std::vector<double> matrix) const;

 private:
  std::vector<std::string> tokens_;
  std::vector<double> matrix_;
  std::size_t dim_;
  std::unordered_map<std::string, std::size_t> vocab_;
};

struct EmbeddingLoadSummary {
  std::size_t lines = 0;       // non-empty lines read
  std::size_t vectors = 0;     // rows kept
  std::size_t duplicates = 0;  // repeated tokens skipped
};

struct LoadedEmbeddings {
  EmbeddingSpace space;
  EmbeddingLoadSummary summary;
};

// Reads `token c1 ... cd` lines (single-space separated, optional CR).
// The dimension comes from expected_dim, or else from the first line.
LoadedEmbeddings load_embeddings(std::istream& in,
                                 std::optional<std::size_t> expected_dim = std::nullopt);
LoadedEmbeddings load_embeddings_file(const std::string& path,
                                      std::optional<std::size_t> expected_dim = std::nullopt);

// Writes the same text format with 6 significant digits per component.
void save_embeddings(std::ostream& out, const EmbeddingSpace& space);

// Throws OovError when the word is not in the vocabulary.
WordVector vector_of(const EmbeddingSpace& space, std::string_view word,
                     CaseFolding fold = CaseFolding::exact);

double l2_norm(std::span<const double> v);

// Scales every row to unit length. Throws NumericError on a zero row.
EmbeddingSpace l2_normalize(const EmbeddingSpace& space);

std::string ascii_lower(std::string_view s);

}  // namespace resm
