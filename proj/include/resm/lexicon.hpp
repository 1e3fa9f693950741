#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

#include "resm/embedding_store.hpp"

namespace resm {

// Directed head -> synonyms relation. Self pairs are never stored and every
// synonym set is non-empty.
class SynonymLexicon {
 public:
  using Entries = std::map<std::string, std::set<std::string>, std::less<>>;

  SynonymLexicon() = default;
  explicit SynonymLexicon(Entries entries);

  const Entries& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Empty set when the head is unknown.
  const std::set<std::string>& synonyms_of(std::string_view head) const;

  friend bool operator==(const SynonymLexicon&, const SynonymLexicon&) = default;

 private:
  Entries entries_;
};

struct LexiconLoadSummary {
  std::size_t lines = 0;
  std::size_t skipped_lines = 0;  // a head with no synonyms
  std::size_t self_pairs = 0;
};

struct LoadedLexicon {
  SynonymLexicon lexicon;
  LexiconLoadSummary summary;
};

// Whitespace-separated `head syn1 syn2 ...` lines; repeated heads merge.
LoadedLexicon load_lexicon(std::istream& in);
LoadedLexicon load_lexicon_file(const std::string& path);

struct RestrictSummary {
  std::size_t dropped_synonyms = 0;
  std::size_t dropped_heads = 0;
};

struct RestrictedLexicon {
  SynonymLexicon lexicon;
  RestrictSummary summary;
};

RestrictedLexicon restrict_to_vocab(const SynonymLexicon& lex, const EmbeddingSpace& space);

}  // namespace resm
