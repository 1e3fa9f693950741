#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resm/embedding_store.hpp"
#include "resm/hubness.hpp"
#include "resm/similarity.hpp"

namespace resm {

inline constexpr std::size_t kCandidates = 4;

struct Question {
  std::string word;
  std::array<std::string, kCandidates> candidates;
  std::size_t correct_index = 0;
};

struct QuestionSet {
  std::string name;
  std::vector<Question> questions;
};

// Lines are `question TAB c1 TAB c2 TAB c3 TAB c4 TAB correct_index`; blank
// lines and lines starting with '#' are skipped. An empty set is an error.
QuestionSet load_questions(std::istream& in, std::string name);
QuestionSet load_questions_file(const std::string& path);

enum class Measure { cosine, euclid, apsyn, resm };

struct MeasureConfig {
  Measure measure = Measure::cosine;
  double score_k = 10.0;
  std::optional<std::size_t> top_n;  // defaults to the space dimension
  CaseFolding fold = CaseFolding::exact;
  // Set to score with cos(x, y) - cos(y, c_y)^gamma; cosine measure only.
  std::optional<HubnessConfig> similarity_shift;
};

// Scores one word pair under the configured measure. `context` is only used
// by RESM.
double pair_similarity(const EmbeddingSpace& space, std::size_t x, std::size_t y,
                       std::span<const VectorView> context, const MeasureConfig& cfg);

struct QuestionResult {
  bool answerable = false;  // question word in vocabulary
  std::array<bool, kCandidates> oov{};
  std::array<double, kCandidates> scores{};  // -inf for OOV candidates
  std::size_t correct_index = 0;
  std::size_t chosen_index = 0;
  std::size_t rank_of_correct = kCandidates;
  bool correct() const;
};

// Dense competition ranks (1 = best, ties share the better rank) of
// higher-is-better scores.
std::array<std::size_t, kCandidates> competition_ranks(
    const std::array<double, kCandidates>& scores);

QuestionResult answer_question(const Question& q, const EmbeddingSpace& space,
                               const MeasureConfig& cfg);

struct EvaluationReport {
  QuestionSet questions;
  std::vector<QuestionResult> results;
  double accuracy = 0.0;
  double average_rank = 0.0;
  std::size_t answered = 0;
  std::size_t correct = 0;
};

// Aggregates results; unanswerable questions count as wrong with rank 4.
EvaluationReport make_report(QuestionSet set, std::vector<QuestionResult> results);

EvaluationReport evaluate(const QuestionSet& set, const EmbeddingSpace& space,
                          const MeasureConfig& cfg, unsigned threads = 1);

// Per question, picks the candidate with the lowest mean rank across both
// reports; ties go to the better rank in `a`, then to the lower index. The
// combined scores are the negated mean ranks.
EvaluationReport heuristic_combine(const EvaluationReport& a, const EvaluationReport& b);

// One line per question followed by the aggregate line.
void write_report(std::ostream& out, const EvaluationReport& report);

}  // namespace resm
