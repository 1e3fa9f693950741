#include "resm/pipeline.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "resm/errors.hpp"
#include "resm/lexicon.hpp"

namespace resm {

namespace {

template <typename Fn>
decltype(auto) in_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    std::throw_with_nested(StageError(name, e.what()));
  }
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  if (cfg.embeddings.empty()) throw UsageError("an embeddings file is required");
  if (cfg.retrofit != RetrofitStage::none && !cfg.lexicon)
    throw UsageError("retrofitting needs a lexicon");
  if (cfg.retrofit_iters < 1) throw UsageError("--retrofit-iters must be >= 1");
  if (cfg.retrofit_alpha < 0.0 || cfg.retrofit_beta < 0.0)
    throw UsageError("retrofit weights must be nonnegative");
  if (cfg.knn_k < 1) throw UsageError("--knn-k must be >= 1");
  if (cfg.gamma && !std::isfinite(*cfg.gamma)) throw UsageError("--gamma must be finite");
  if (!(cfg.score_k > 0.0)) throw UsageError("--score-k must be positive");
  if (cfg.top_n && *cfg.top_n == 0) throw UsageError("--top-n must be positive");
  if (cfg.threads < 1) throw UsageError("--threads must be >= 1");
  if (cfg.sample && *cfg.sample == 0) throw UsageError("--sample must be positive");
  if (cfg.hr == HubnessStage::simshift && cfg.measure != Measure::cosine)
    throw UsageError("--hr simshift only applies to the cosine measure");
  if (cfg.heuristic && cfg.hr == HubnessStage::off)
    throw UsageError("--heuristic combines runs with and without hubness reduction; set --hr");
}

EmbeddingSpace prepare_space(const PipelineConfig& cfg, std::ostream& log) {
  auto loaded = in_stage("load embeddings",
                         [&] { return load_embeddings_file(cfg.embeddings, cfg.expected_dim); });
  fmt::print(log, "embeddings: {} vectors, dim {}, {} duplicates skipped\n",
             loaded.summary.vectors, loaded.space.dim(), loaded.summary.duplicates);
  EmbeddingSpace space = std::move(loaded.space);
  if (cfg.normalize) space = in_stage("normalize", [&] { return l2_normalize(space); });

  if (cfg.retrofit != RetrofitStage::none) {
    const auto lex = in_stage("load lexicon", [&] { return load_lexicon_file(*cfg.lexicon); });
    const auto restricted = restrict_to_vocab(lex.lexicon, space);
    fmt::print(log, "lexicon: {} heads kept, {} heads and {} synonyms dropped, {} empty lines\n",
               restricted.lexicon.size(), restricted.summary.dropped_heads,
               restricted.summary.dropped_synonyms, lex.summary.skipped_lines);
    RetrofitConfig rc;
    rc.iterations = cfg.retrofit_iters;
    rc.alpha = cfg.retrofit_alpha;
    rc.beta = cfg.retrofit_beta;
    rc.variant = cfg.retrofit == RetrofitStage::original ? RetrofitVariant::original
                                                         : RetrofitVariant::l2;
    rc.threads = cfg.threads;
    space = in_stage("retrofit", [&] { return retrofit(space, restricted.lexicon, rc); });
  }
  return space;
}

MeasureConfig measure_config(const PipelineConfig& cfg) {
  MeasureConfig mc;
  mc.measure = cfg.measure;
  mc.score_k = cfg.score_k;
  mc.top_n = cfg.top_n;
  mc.fold = cfg.lowercase ? CaseFolding::lowercase : CaseFolding::exact;
  return mc;
}

namespace {

std::optional<SkewnessSample> sample_of(const PipelineConfig& cfg) {
  if (!cfg.sample) return std::nullopt;
  return SkewnessSample{*cfg.sample, cfg.seed};
}

HubnessConfig hubness_config(const EmbeddingSpace& space, const PipelineConfig& cfg,
                             std::ostream& report) {
  HubnessConfig hc;
  hc.knn_k = cfg.knn_k;
  hc.threads = cfg.threads;
  hc.mode = cfg.hr == HubnessStage::simshift ? HubnessMode::similarity_shift
                                             : HubnessMode::vector_literal;
  if (cfg.gamma) {
    hc.gamma = *cfg.gamma;
  } else {
    const auto skew = koccurrence_skewness(space, cfg.knn_k, sample_of(cfg), cfg.threads);
    if (skew.degenerate)
      throw NumericError("cannot take gamma from a degenerate k-occurrence distribution");
    fmt::print(report, "skewness={:.6f}\n", skew.value);
    hc.gamma = skew.value;
  }
  return hc;
}

}  // namespace

EmbeddingSpace apply_hubness(const EmbeddingSpace& space, const PipelineConfig& cfg,
                             MeasureConfig& measure, std::ostream& report) {
  if (cfg.hr == HubnessStage::off) return space;
  return in_stage("hubness reduction", [&] {
    const auto hc = hubness_config(space, cfg, report);
    if (cfg.hr == HubnessStage::vector) return localized_center(space, hc);
    measure.similarity_shift = hc;
    return space;
  });
}

void run_evaluate(const PipelineConfig& cfg, std::ostream& report, std::ostream& log) {
  validate(cfg);
  if (cfg.questions.empty()) throw UsageError("at least one question set is required");
  std::vector<QuestionSet> sets;
  in_stage("load questions", [&] {
    for (const auto& path : cfg.questions) sets.push_back(load_questions_file(path));
  });

  const auto base = prepare_space(cfg, log);
  const auto plain_measure = measure_config(cfg);
  auto hr_measure = plain_measure;
  const auto reduced = apply_hubness(base, cfg, hr_measure, report);

  in_stage("evaluate", [&] {
    for (const auto& set : sets) {
      if (cfg.heuristic) {
        const auto without = evaluate(set, base, plain_measure, cfg.threads);
        const auto with = evaluate(set, reduced, hr_measure, cfg.threads);
        fmt::print(report, "# set={} run=base\n", set.name);
        write_report(report, without);
        fmt::print(report, "# set={} run=hr\n", set.name);
        write_report(report, with);
        fmt::print(report, "# set={} run=heuristic\n", set.name);
        write_report(report, heuristic_combine(without, with));
      } else {
        fmt::print(report, "# set={} run={}\n", set.name,
                   cfg.hr == HubnessStage::off ? "base" : "hr");
        write_report(report, evaluate(set, reduced, hr_measure, cfg.threads));
      }
    }
  });
}

void run_sim(const PipelineConfig& cfg, const std::string& word_a, const std::string& word_b,
             const std::vector<std::string>& context, std::ostream& out, std::ostream& log) {
  validate(cfg);
  const auto base = prepare_space(cfg, log);
  auto measure = measure_config(cfg);
  const auto space = apply_hubness(base, cfg, measure, log);

  in_stage("similarity", [&] {
    auto lookup = [&](const std::string& w) {
      const auto idx = space.index_of(w, measure.fold);
      if (!idx) throw OovError(w);
      return *idx;
    };
    const std::size_t a = lookup(word_a);
    const std::size_t b = lookup(word_b);
    std::vector<VectorView> ctx;
    for (const auto& w : context) ctx.push_back(space.row(lookup(w)));
    fmt::print(out, "{:.6f}\n", pair_similarity(space, a, b, ctx, measure));
  });
}

void run_transform(const PipelineConfig& cfg, std::ostream& out, std::ostream& log) {
  validate(cfg);
  if (cfg.hr == HubnessStage::simshift)
    throw UsageError("--hr simshift changes scoring, not vectors; use --hr vector to transform");
  const auto base = prepare_space(cfg, log);
  auto measure = measure_config(cfg);
  const auto space = apply_hubness(base, cfg, measure, log);
  in_stage("write embeddings", [&] { save_embeddings(out, space); });
}

void run_skewness(const PipelineConfig& cfg, std::ostream& out, std::ostream& log) {
  validate(cfg);
  const auto space = prepare_space(cfg, log);
  const auto before = in_stage("skewness", [&] {
    return koccurrence_skewness(space, cfg.knn_k, sample_of(cfg), cfg.threads);
  });
  if (before.degenerate) fmt::print(log, "warning: k-occurrence distribution has zero variance\n");
  fmt::print(out, "skewness={:.6f}\n", before.value);
  if (cfg.hr == HubnessStage::off) return;

  auto measure = measure_config(cfg);
  std::ostringstream measured;  // gamma=auto repeats the line printed above
  const auto reduced = apply_hubness(space, cfg, measure, measured);
  const auto after = in_stage("skewness", [&] {
    if (!measure.similarity_shift)
      return koccurrence_skewness(reduced, cfg.knn_k, sample_of(cfg), cfg.threads);
    const auto penalties = localized_penalties(space, *measure.similarity_shift);
    return koccurrence_skewness_shifted(space, penalties, cfg.knn_k, sample_of(cfg), cfg.threads);
  });
  fmt::print(out, "skewness_after={:.6f}\n", after.value);
}

}  // namespace resm
