#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resm/embedding_store.hpp"
#include "resm/evaluation.hpp"
#include "resm/hubness.hpp"
#include "resm/retrofit.hpp"

namespace resm {

enum class RetrofitStage { none, original, l2 };
enum class HubnessStage { off, vector, simshift };

// Everything the command-line front end can set. Stages run in a fixed
// order: load, normalize, retrofit, hubness reduction, scoring.
struct PipelineConfig {
  std::string embeddings;
  std::optional<std::size_t> expected_dim;
  std::optional<std::string> lexicon;
  bool normalize = false;

  RetrofitStage retrofit = RetrofitStage::none;
  int retrofit_iters = 10;
  double retrofit_alpha = 1.0;
  double retrofit_beta = 1.0;

  HubnessStage hr = HubnessStage::off;
  std::optional<double> gamma = 9.0;  // nullopt: measured k-occurrence skewness
  std::size_t knn_k = 10;

  Measure measure = Measure::cosine;
  double score_k = 10.0;
  std::optional<std::size_t> top_n;
  bool lowercase = false;

  std::vector<std::string> questions;
  bool heuristic = false;
  std::optional<std::string> output;

  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> sample;  // skewness query sample size
};

// Throws UsageError on inconsistent settings.
void validate(const PipelineConfig& cfg);

// Loads the embeddings and applies normalization and retrofitting.
// Load and lexicon summaries go to `log`.
EmbeddingSpace prepare_space(const PipelineConfig& cfg, std::ostream& log);

// Applies the configured hubness reduction to `space`: vector mode returns a
// centered space, simshift mode fills `measure.similarity_shift`. Writes a
// `skewness=` line to `report` when gamma is measured.
EmbeddingSpace apply_hubness(const EmbeddingSpace& space, const PipelineConfig& cfg,
                             MeasureConfig& measure, std::ostream& report);

MeasureConfig measure_config(const PipelineConfig& cfg);

// Evaluates every question set and writes the reports to `report`.
void run_evaluate(const PipelineConfig& cfg, std::ostream& report, std::ostream& log);

// Prints the configured measure for one pair with 6 decimals.
void run_sim(const PipelineConfig& cfg, const std::string& word_a, const std::string& word_b,
             const std::vector<std::string>& context, std::ostream& out, std::ostream& log);

// Writes the post-processed space in the embedding text format.
void run_transform(const PipelineConfig& cfg, std::ostream& out, std::ostream& log);

void run_skewness(const PipelineConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace resm
