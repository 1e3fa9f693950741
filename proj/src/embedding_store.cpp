#include "resm/embedding_store.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "resm/errors.hpp"

namespace resm {

namespace {

bool has_whitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

}  // namespace

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> tokens, std::vector<double> matrix,
                               std::size_t dim)
    : tokens_(std::move(tokens)), matrix_(std::move(matrix)), dim_(dim) {
  if (dim_ == 0) throw ContractError("embedding dimension must be positive");
  if (matrix_.size() != tokens_.size() * dim_)
    throw ContractError(fmt::format("matrix holds {} values, expected {} rows x {} dims",
                                    matrix_.size(), tokens_.size(), dim_));
  vocab_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const auto& t = tokens_[i];
    if (t.empty() || has_whitespace(t))
      throw ContractError(fmt::format("invalid token at row {}: '{}'", i, t));
    if (!vocab_.emplace(t, i).second)
      throw ContractError(fmt::format("duplicate token '{}'", t));
    for (double c : row(i))
      if (!std::isfinite(c)) throw ContractError(fmt::format("non-finite component for '{}'", t));
  }
}

std::optional<std::size_t> EmbeddingSpace::index_of(std::string_view word, CaseFolding fold) const {
  const std::string key = fold == CaseFolding::lowercase ? ascii_lower(word) : std::string(word);
  auto it = vocab_.find(key);
  if (it == vocab_.end()) return std::nullopt;
  return it->second;
}

EmbeddingSpace EmbeddingSpace::with_matrix(std::vector<double> matrix) const {
  return EmbeddingSpace(tokens_, std::move(matrix), dim_);
}

LoadedEmbeddings load_embeddings(std::istream& in, std::optional<std::size_t> expected_dim) {
  if (expected_dim && *expected_dim == 0) throw ContractError("expected dimension must be positive");

  std::vector<std::string> tokens;
  std::vector<double> matrix;
  std::unordered_map<std::string, std::size_t> seen;
  EmbeddingLoadSummary summary;
  std::size_t dim = expected_dim.value_or(0);
  std::vector<double> row;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    while (!view.empty() && (view.back() == '\r' || view.back() == ' ')) view.remove_suffix(1);
    if (view.empty()) continue;
    ++summary.lines;

    const auto first_space = view.find(' ');
    if (first_space == std::string_view::npos)
      throw ParseError("line has a token but no components", line_no);
    const std::string_view token = view.substr(0, first_space);
    if (token.empty() || has_whitespace(token)) throw ParseError("invalid token", line_no);

    row.clear();
    std::string_view rest = view.substr(first_space + 1);
    while (true) {
      const auto sep = rest.find(' ');
      const std::string_view field = rest.substr(0, sep);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError(fmt::format("cannot parse component '{}' of '{}'", field, token), line_no);
      if (!std::isfinite(value))
        throw ParseError(fmt::format("non-finite component in '{}'", token), line_no);
      row.push_back(value);
      if (sep == std::string_view::npos) break;
      rest.remove_prefix(sep + 1);
    }

    if (dim == 0) dim = row.size();
    if (row.size() != dim)
      throw ParseError(fmt::format("dimension mismatch for '{}': got {} components, expected {}",
                                   token, row.size(), dim),
                       line_no);

    if (!seen.emplace(std::string(token), tokens.size()).second) {
      ++summary.duplicates;
      continue;
    }
    tokens.emplace_back(token);
    matrix.insert(matrix.end(), row.begin(), row.end());
  }
  if (tokens.empty()) throw ParseError("empty embedding input");

  summary.vectors = tokens.size();
  return {EmbeddingSpace(std::move(tokens), std::move(matrix), dim), summary};
}

LoadedEmbeddings load_embeddings_file(const std::string& path,
                                      std::optional<std::size_t> expected_dim) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embedding file " + path);
  return load_embeddings(in, expected_dim);
}

void save_embeddings(std::ostream& out, const EmbeddingSpace& space) {
  fmt::memory_buffer buf;
  for (std::size_t i = 0; i < space.size(); ++i) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{}", space.token(i));
    for (double c : space.row(i)) fmt::format_to(std::back_inserter(buf), " {:.6g}", c);
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

WordVector vector_of(const EmbeddingSpace& space, std::string_view word, CaseFolding fold) {
  const auto idx = space.index_of(word, fold);
  if (!idx) throw OovError(std::string(word));
  const auto r = space.row(*idx);
  return WordVector(r.begin(), r.end());
}

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

EmbeddingSpace l2_normalize(const EmbeddingSpace& space) {
  std::vector<double> out(space.matrix().begin(), space.matrix().end());
  const std::size_t d = space.dim();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double norm = l2_norm(space.row(i));
    if (norm == 0.0) throw NumericError("zero-norm vector for '" + space.token(i) + "'");
    for (std::size_t c = 0; c < d; ++c) out[i * d + c] /= norm;
  }
  return space.with_matrix(std::move(out));
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  return out;
}

}  // namespace resm
