#pragma once

#include "resm/embedding_store.hpp"
#include "resm/lexicon.hpp"

namespace resm {

enum class RetrofitVariant { original, l2 };

struct RetrofitConfig {
  int iterations = 10;
  double alpha = 1.0;  // weight of the word's own vector (original variant only)
  double beta = 1.0;   // uniform synonym weight (original variant only)
  RetrofitVariant variant = RetrofitVariant::l2;
  unsigned threads = 1;
};

// Each iteration reads the previous iteration's matrix and writes a fresh
// one, so the result does not depend on head order or thread count. Words
// that are not lexicon heads keep their exact input bits. The lexicon must
// already be restricted to the space's vocabulary (ContractError otherwise).

// v' = (alpha * v + beta * mean(synonyms)) / 2
EmbeddingSpace retrofit_original(const EmbeddingSpace& space, const SynonymLexicon& lex,
                                 const RetrofitConfig& cfg);

// v' = |v| * (v/|v| + mean(s/|s|)) / 2, no renormalization afterwards.
// Throws NumericError on a zero-norm head or synonym.
EmbeddingSpace retrofit_l2(const EmbeddingSpace& space, const SynonymLexicon& lex,
                           const RetrofitConfig& cfg);

// Dispatches on cfg.variant.
EmbeddingSpace retrofit(const EmbeddingSpace& space, const SynonymLexicon& lex,
                        const RetrofitConfig& cfg);

}  // namespace resm
