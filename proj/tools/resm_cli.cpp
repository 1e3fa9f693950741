// Command-line front end: evaluate, sim, transform, skewness.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "resm/errors.hpp"
#include "resm/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

void add_pipeline_options(CLI::App& cmd, resm::PipelineConfig& cfg, std::string& gamma) {
  // Not marked required: the value may come from the config file.
  cmd.add_option("--embeddings", cfg.embeddings, "Embedding text file (token c1 ... cd)");
  cmd.add_option("--dim", cfg.expected_dim, "Expected vector dimension");
  cmd.add_option("--lexicon", cfg.lexicon, "Synonym lexicon for retrofitting");
  cmd.add_flag("--normalize", cfg.normalize, "L2-normalize vectors after loading");

  const std::map<std::string, resm::RetrofitStage> retrofit{
      {"none", resm::RetrofitStage::none},
      {"original", resm::RetrofitStage::original},
      {"l2", resm::RetrofitStage::l2}};
  cmd.add_option("--retrofit", cfg.retrofit, "Retrofitting variant")
      ->transform(CLI::CheckedTransformer(retrofit, CLI::ignore_case));
  cmd.add_option("--retrofit-iters", cfg.retrofit_iters, "Retrofitting iterations");
  cmd.add_option("--retrofit-alpha", cfg.retrofit_alpha, "Own-vector weight (original variant)");
  cmd.add_option("--retrofit-beta", cfg.retrofit_beta, "Synonym weight (original variant)");

  const std::map<std::string, resm::HubnessStage> hr{{"off", resm::HubnessStage::off},
                                                     {"vector", resm::HubnessStage::vector},
                                                     {"simshift", resm::HubnessStage::simshift}};
  cmd.add_option("--hr", cfg.hr, "Hubness reduction by localized centering")
      ->transform(CLI::CheckedTransformer(hr, CLI::ignore_case));
  cmd.add_option("--gamma", gamma, "Centering exponent, or 'auto' for measured skewness");
  cmd.add_option("--knn-k", cfg.knn_k, "Neighborhood size for centroids and skewness");

  const std::map<std::string, resm::Measure> measure{{"cosine", resm::Measure::cosine},
                                                     {"euclid", resm::Measure::euclid},
                                                     {"apsyn", resm::Measure::apsyn},
                                                     {"resm", resm::Measure::resm}};
  cmd.add_option("--measure", cfg.measure, "Similarity measure")
      ->transform(CLI::CheckedTransformer(measure, CLI::ignore_case));
  cmd.add_option("--score-k", cfg.score_k, "Exponential score weight");
  cmd.add_option("--top-n", cfg.top_n, "Ranked components per vector (default: dimension)");
  cmd.add_flag("--lowercase", cfg.lowercase, "Lowercase query words before lookup");

  cmd.add_option("--threads", cfg.threads, "Worker threads")->envname("RESM_THREADS");
  cmd.add_option("--seed", cfg.seed, "Seed for sampled skewness");
  cmd.add_option("--sample", cfg.sample, "Number of query points sampled for skewness");
}

void resolve_gamma(resm::PipelineConfig& cfg, const std::string& gamma) {
  if (gamma.empty()) return;
  if (gamma == "auto") {
    cfg.gamma.reset();
    return;
  }
  try {
    std::size_t used = 0;
    cfg.gamma = std::stod(gamma, &used);
    if (used != gamma.size()) throw std::invalid_argument(gamma);
  } catch (const std::exception&) {
    throw resm::UsageError("--gamma expects a number or 'auto', got '" + gamma + "'");
  }
}

int exit_code_for(const resm::Error& e) {
  if (const auto* staged = dynamic_cast<const resm::StageError*>(&e)) {
    try {
      std::rethrow_if_nested(*staged);
    } catch (const resm::Error& inner) {
      return exit_code_for(inner);
    } catch (...) {
    }
    return kData;
  }
  if (dynamic_cast<const resm::UsageError*>(&e)) return kUsage;
  if (dynamic_cast<const resm::NumericError*>(&e)) return kNumeric;
  return kData;
}

// Opens --output or falls back to stdout.
template <typename Fn>
void with_output(const resm::PipelineConfig& cfg, Fn&& fn) {
  if (!cfg.output) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(*cfg.output, std::ios::binary);
  if (!out) throw resm::ParseError("cannot open output file " + *cfg.output);
  fn(out);
  if (!out) throw resm::ParseError("failed writing " + *cfg.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word-embedding post-processing and ranking-based similarity"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "",
                 "INI/TOML file; options go under a [evaluate], [sim], ... section");

  resm::PipelineConfig cfg;
  std::string gamma;
  std::string word_a;
  std::string word_b;
  std::vector<std::string> context;

  auto* evaluate = app.add_subcommand("evaluate", "Answer multiple-choice synonym question sets");
  add_pipeline_options(*evaluate, cfg, gamma);
  evaluate->add_option("--questions", cfg.questions, "Question TSV file(s)");
  evaluate->add_flag("--heuristic", cfg.heuristic,
                     "Also combine runs with and without hubness reduction by mean rank");
  evaluate->add_option("--output", cfg.output, "Report file (default: stdout)");

  auto* sim = app.add_subcommand("sim", "Similarity of one word pair");
  add_pipeline_options(*sim, cfg, gamma);
  sim->add_option("word_a", word_a)->required();
  sim->add_option("word_b", word_b)->required();
  sim->add_option("context", context, "Context words for RESM");

  auto* transform = app.add_subcommand("transform", "Write the post-processed embeddings");
  add_pipeline_options(*transform, cfg, gamma);
  transform->add_option("--output", cfg.output, "Output embedding file (default: stdout)");

  auto* skewness = app.add_subcommand("skewness", "k-occurrence skewness of the space");
  add_pipeline_options(*skewness, cfg, gamma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    resolve_gamma(cfg, gamma);
    if (evaluate->parsed()) {
      with_output(cfg, [&](std::ostream& out) { resm::run_evaluate(cfg, out, std::cerr); });
    } else if (sim->parsed()) {
      resm::run_sim(cfg, word_a, word_b, context, std::cout, std::cerr);
    } else if (transform->parsed()) {
      with_output(cfg, [&](std::ostream& out) { resm::run_transform(cfg, out, std::cerr); });
    } else {
      resm::run_skewness(cfg, std::cout, std::cerr);
    }
  } catch (const resm::Error& e) {
    fmt::print(stderr, "resm {}: {}\n", command, e.what());
    return exit_code_for(e);
  }
  return kOk;
}
