#include "resm/lexicon.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "resm/errors.hpp"

namespace resm {

SynonymLexicon::SynonymLexicon(Entries entries) : entries_(std::move(entries)) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    it->second.erase(it->first);
    it = it->second.empty() ? entries_.erase(it) : std::next(it);
  }
}

const std::set<std::string>& SynonymLexicon::synonyms_of(std::string_view head) const {
  static const std::set<std::string> none;
  auto it = entries_.find(head);
  return it == entries_.end() ? none : it->second;
}

LoadedLexicon load_lexicon(std::istream& in) {
  SynonymLexicon::Entries entries;
  LexiconLoadSummary summary;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    ++summary.lines;
    std::set<std::string> syns;
    for (std::string syn; fields >> syn;) {
      if (syn == head) {
        ++summary.self_pairs;
        continue;
      }
      syns.insert(std::move(syn));
    }
    if (syns.empty()) {
      ++summary.skipped_lines;
      continue;
    }
    entries[head].merge(syns);
  }
  return {SynonymLexicon(std::move(entries)), summary};
}

LoadedLexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lexicon file " + path);
  return load_lexicon(in);
}

RestrictedLexicon restrict_to_vocab(const SynonymLexicon& lex, const EmbeddingSpace& space) {
  SynonymLexicon::Entries kept;
  RestrictSummary summary;
  for (const auto& [head, syns] : lex.entries()) {
    if (!space.index_of(head)) {
      summary.dropped_synonyms += syns.size();
      ++summary.dropped_heads;
      continue;
    }
    std::set<std::string> in_vocab;
    for (const auto& s : syns) {
      if (space.index_of(s))
        in_vocab.insert(s);
      else
        ++summary.dropped_synonyms;
    }
    if (in_vocab.empty()) {
      ++summary.dropped_heads;
      continue;
    }
    kept.emplace(head, std::move(in_vocab));
  }
  return {SynonymLexicon(std::move(kept)), summary};
}

}  // namespace resm
