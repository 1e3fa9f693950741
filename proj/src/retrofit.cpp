#include "resm/retrofit.hpp"

#include <fmt/format.h>

#include "resm/errors.hpp"
#include "resm/parallel.hpp"

namespace resm {

namespace {

struct HeadEntry {
  std::size_t head;
  std::vector<std::size_t> synonyms;
};

std::vector<HeadEntry> resolve(const EmbeddingSpace& space, const SynonymLexicon& lex) {
  std::vector<HeadEntry> heads;
  heads.reserve(lex.size());
  for (const auto& [word, syns] : lex.entries()) {
    const auto h = space.index_of(word);
    if (!h) throw ContractError("lexicon head '" + word + "' is not in the vocabulary");
    HeadEntry entry{*h, {}};
    entry.synonyms.reserve(syns.size());
    for (const auto& s : syns) {
      const auto j = space.index_of(s);
      if (!j) throw ContractError("synonym '" + s + "' of '" + word + "' is not in the vocabulary");
      entry.synonyms.push_back(*j);
    }
    heads.push_back(std::move(entry));
  }
  return heads;
}

void check_config(const RetrofitConfig& cfg) {
  if (cfg.iterations < 1) throw ContractError("retrofit iterations must be >= 1");
  if (cfg.alpha < 0.0 || cfg.beta < 0.0) throw ContractError("retrofit weights must be nonnegative");
}

double row_norm(std::span<const double> matrix, std::size_t index, std::size_t d) {
  return l2_norm(matrix.subspan(index * d, d));
}

}  // namespace

EmbeddingSpace retrofit_original(const EmbeddingSpace& space, const SynonymLexicon& lex,
                                 const RetrofitConfig& cfg) {
  check_config(cfg);
  const auto heads = resolve(space, lex);
  const std::size_t d = space.dim();
  std::vector<double> current(space.matrix().begin(), space.matrix().end());
  std::vector<double> next = current;

  for (int it = 0; it < cfg.iterations; ++it) {
    parallel_for(heads.size(), cfg.threads, [&](std::size_t h) {
      const auto& entry = heads[h];
      const double inv_count = 1.0 / static_cast<double>(entry.synonyms.size());
      double* out = next.data() + entry.head * d;
      const double* self = current.data() + entry.head * d;
      for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        for (std::size_t j : entry.synonyms) sum += current[j * d + c];
        out[c] = (cfg.alpha * self[c] + cfg.beta * sum * inv_count) / 2.0;
      }
    });
    current.swap(next);  // non-head rows are identical in both buffers
  }
  return space.with_matrix(std::move(current));
}

EmbeddingSpace retrofit_l2(const EmbeddingSpace& space, const SynonymLexicon& lex,
                           const RetrofitConfig& cfg) {
  check_config(cfg);
  const auto heads = resolve(space, lex);
  const std::size_t d = space.dim();
  std::vector<double> current(space.matrix().begin(), space.matrix().end());
  std::vector<double> next = current;
  std::vector<double> norms(space.size());

  for (int it = 0; it < cfg.iterations; ++it) {
    parallel_for(space.size(), cfg.threads,
                 [&](std::size_t i) { norms[i] = row_norm(current, i, d); });
    parallel_for(heads.size(), cfg.threads, [&](std::size_t h) {
      const auto& entry = heads[h];
      const double self_norm = norms[entry.head];
      if (self_norm == 0.0)
        throw NumericError("zero-norm vector for '" + space.token(entry.head) + "'");
      for (std::size_t j : entry.synonyms)
        if (norms[j] == 0.0) throw NumericError("zero-norm vector for '" + space.token(j) + "'");

      const double inv_count = 1.0 / static_cast<double>(entry.synonyms.size());
      double* out = next.data() + entry.head * d;
      const double* self = current.data() + entry.head * d;
      for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        for (std::size_t j : entry.synonyms) sum += current[j * d + c] / norms[j];
        out[c] = self_norm * (self[c] / self_norm + sum * inv_count) / 2.0;
      }
    });
    current.swap(next);  // non-head rows are identical in both buffers
  }
  return space.with_matrix(std::move(current));
}

EmbeddingSpace retrofit(const EmbeddingSpace& space, const SynonymLexicon& lex,
                        const RetrofitConfig& cfg) {
  return cfg.variant == RetrofitVariant::original ? retrofit_original(space, lex, cfg)
                                                  : retrofit_l2(space, lex, cfg);
}

}  // namespace resm
