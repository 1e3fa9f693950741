#include "resm/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "resm/errors.hpp"
#include "resm/parallel.hpp"

namespace resm {

namespace {

constexpr double kMissing = -std::numeric_limits<double>::infinity();

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return fields;
}

}  // namespace

QuestionSet load_questions(std::istream& in, std::string name) {
  QuestionSet set{std::move(name), {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;

    const auto fields = split_tabs(view);
    if (fields.size() != kCandidates + 2)
      throw ParseError(fmt::format("expected {} tab-separated fields, got {}", kCandidates + 2,
                                   fields.size()),
                       line_no);
    Question q;
    q.word = std::string(fields[0]);
    if (q.word.empty()) throw ParseError("empty question word", line_no);
    std::set<std::string_view> distinct;
    for (std::size_t c = 0; c < kCandidates; ++c) {
      if (fields[c + 1].empty()) throw ParseError("empty candidate", line_no);
      if (!distinct.insert(fields[c + 1]).second)
        throw ParseError(fmt::format("duplicate candidate '{}'", fields[c + 1]), line_no);
      q.candidates[c] = std::string(fields[c + 1]);
    }
    const auto idx_field = fields.back();
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(idx_field.data(), idx_field.data() + idx_field.size(), idx);
    if (ec != std::errc() || ptr != idx_field.data() + idx_field.size() || idx >= kCandidates)
      throw ParseError(fmt::format("bad correct index '{}'", idx_field), line_no);
    q.correct_index = idx;
    set.questions.push_back(std::move(q));
  }
  if (set.questions.empty()) throw ParseError("question set '" + set.name + "' is empty");
  return set;
}

QuestionSet load_questions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open question file " + path);
  return load_questions(in, std::filesystem::path(path).stem().string());
}

double pair_similarity(const EmbeddingSpace& space, std::size_t x, std::size_t y,
                       std::span<const VectorView> context, const MeasureConfig& cfg) {
  const auto vx = space.row(x);
  const auto vy = space.row(y);
  if (cfg.similarity_shift) {
    if (cfg.measure != Measure::cosine)
      throw ContractError("similarity-shift hubness reduction requires the cosine measure");
    return localized_similarity(space, x, y, *cfg.similarity_shift);
  }
  const std::size_t top_n = cfg.top_n.value_or(space.dim());
  switch (cfg.measure) {
    case Measure::cosine:
      return cosine_similarity(vx, vy);
    case Measure::euclid:
      return euclidean_similarity(vx, vy);
    case Measure::apsyn:
      return apsyn(rank_components(vx, RankOrder::descending, top_n),
                   rank_components(vy, RankOrder::descending, top_n));
    case Measure::resm:
      return resm_similarity(vx, vy, context, ScoreParams{cfg.score_k, space.dim()}, top_n);
  }
  throw ContractError("unknown measure");
}

bool QuestionResult::correct() const {
  return answerable && chosen_index == correct_index;
}

std::array<std::size_t, kCandidates> competition_ranks(
    const std::array<double, kCandidates>& scores) {
  std::array<std::size_t, kCandidates> ranks{};
  for (std::size_t i = 0; i < kCandidates; ++i) {
    ranks[i] = 1;
    for (std::size_t j = 0; j < kCandidates; ++j)
      if (scores[j] > scores[i]) ++ranks[i];
  }
  return ranks;
}

namespace {

std::size_t argmax_first(const std::array<double, kCandidates>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kCandidates; ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

}  // namespace

QuestionResult answer_question(const Question& q, const EmbeddingSpace& space,
                               const MeasureConfig& cfg) {
  QuestionResult r;
  r.correct_index = q.correct_index;
  r.scores.fill(kMissing);

  std::array<std::optional<std::size_t>, kCandidates> cand;
  std::vector<VectorView> context;
  for (std::size_t c = 0; c < kCandidates; ++c) {
    cand[c] = space.index_of(q.candidates[c], cfg.fold);
    r.oov[c] = !cand[c];
    if (cand[c]) context.push_back(space.row(*cand[c]));
  }
  const auto qi = space.index_of(q.word, cfg.fold);
  r.answerable = qi.has_value() && !context.empty();
  if (!r.answerable) return r;

  for (std::size_t c = 0; c < kCandidates; ++c)
    if (cand[c]) r.scores[c] = pair_similarity(space, *qi, *cand[c], context, cfg);

  r.chosen_index = argmax_first(r.scores);
  r.rank_of_correct = competition_ranks(r.scores)[q.correct_index];
  return r;
}

EvaluationReport make_report(QuestionSet set, std::vector<QuestionResult> results) {
  if (set.questions.size() != results.size())
    throw ContractError("one result per question is required");
  EvaluationReport report;
  report.questions = std::move(set);
  report.results = std::move(results);
  double rank_sum = 0.0;
  for (const auto& r : report.results) {
    if (r.answerable) ++report.answered;
    if (r.correct()) ++report.correct;
    rank_sum += static_cast<double>(r.answerable ? r.rank_of_correct : kCandidates);
  }
  const double n = static_cast<double>(report.results.size());
  report.accuracy = n > 0 ? static_cast<double>(report.correct) / n : 0.0;
  report.average_rank = n > 0 ? rank_sum / n : 0.0;
  return report;
}

EvaluationReport evaluate(const QuestionSet& set, const EmbeddingSpace& space,
                          const MeasureConfig& cfg, unsigned threads) {
  std::vector<QuestionResult> results(set.questions.size());
  parallel_for(set.questions.size(), threads,
               [&](std::size_t i) { results[i] = answer_question(set.questions[i], space, cfg); });
  return make_report(set, std::move(results));
}

namespace {

bool same_question(const Question& a, const Question& b) {
  return a.word == b.word && a.candidates == b.candidates && a.correct_index == b.correct_index;
}

}  // namespace

EvaluationReport heuristic_combine(const EvaluationReport& a, const EvaluationReport& b) {
  const auto& qa = a.questions.questions;
  const auto& qb = b.questions.questions;
  if (qa.size() != qb.size() || a.results.size() != qa.size() || b.results.size() != qb.size() ||
      !std::equal(qa.begin(), qa.end(), qb.begin(), same_question))
    throw ContractError("heuristic_combine needs two reports over the same question set");

  std::vector<QuestionResult> combined(qa.size());
  for (std::size_t i = 0; i < qa.size(); ++i) {
    const auto& ra = a.results[i];
    const auto& rb = b.results[i];
    auto& out = combined[i];
    out.correct_index = qa[i].correct_index;
    out.answerable = ra.answerable || rb.answerable;
    for (std::size_t c = 0; c < kCandidates; ++c) out.oov[c] = ra.oov[c] || rb.oov[c];
    out.scores.fill(kMissing);
    if (!out.answerable) continue;

    const auto rank_a = competition_ranks(ra.scores);
    const auto rank_b = competition_ranks(rb.scores);
    std::size_t best = 0;
    for (std::size_t c = 0; c < kCandidates; ++c) {
      out.scores[c] = -static_cast<double>(rank_a[c] + rank_b[c]) / 2.0;
      if (c == 0) continue;
      if (out.scores[c] > out.scores[best] ||
          (out.scores[c] == out.scores[best] && rank_a[c] < rank_a[best]))
        best = c;
    }
    out.chosen_index = best;
    out.rank_of_correct = competition_ranks(out.scores)[out.correct_index];
  }
  return make_report(a.questions, std::move(combined));
}

void write_report(std::ostream& out, const EvaluationReport& report) {
  fmt::memory_buffer buf;
  auto it = std::back_inserter(buf);
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const auto& r = report.results[i];
    fmt::format_to(it, "{} {} {}", report.questions.questions[i].word,
                   r.answerable ? static_cast<long long>(r.chosen_index) : -1LL,
                   r.answerable ? r.rank_of_correct : kCandidates);
    for (double s : r.scores) fmt::format_to(it, " {:.9g}", s);
    std::vector<std::string> flags;
    if (!r.answerable) flags.emplace_back("unanswerable");
    std::vector<std::size_t> oov;
    for (std::size_t c = 0; c < kCandidates; ++c)
      if (r.oov[c]) oov.push_back(c);
    if (!oov.empty()) flags.push_back(fmt::format("oov={}", fmt::join(oov, ",")));
    fmt::format_to(it, " {}\n", flags.empty() ? std::string("ok") : fmt::format("{}", fmt::join(flags, ";")));
  }
  fmt::format_to(it, "accuracy={:.6f} average_rank={:.6f} answered={}/{}\n", report.accuracy,
                 report.average_rank, report.answered, report.results.size());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace resm
