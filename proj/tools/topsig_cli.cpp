// topsig: build topic signatures for word senses and evaluate them on WSD.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topsig/error.hpp"
#include "topsig/pipeline.hpp"

namespace {

struct Overrides {
  std::vector<std::pair<std::string, std::string>> values;
  bool dedup_host = false;
  bool keep_intermediate = false;
  bool raw_surface = false;
};

void add_value_flag(CLI::App& app, Overrides& ov, const std::string& flag, const std::string& key,
                    const std::string& help) {
  app.add_option_function<std::string>(
         flag, [&ov, key](const std::string& v) { ov.values.emplace_back(key, v); }, help)
      ->configurable(false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic signatures for word senses: query construction, signature building, filtering and WSD evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides ov;
  app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  add_value_flag(app, ov, "--lexicon", "lexicon", "lexicon file (SYNSET / REL records)");
  add_value_flag(app, ov, "--corpus,--tagged-corpus", "tagged_corpus", "sense-tagged corpus");
  add_value_flag(app, ov, "--reference", "reference_corpus", "reference corpus for word signatures");
  add_value_flag(app, ov, "--index", "index", "index file or document directory for the local backend");
  add_value_flag(app, ov, "--backend", "backend", "local | external-command");
  add_value_flag(app, ov, "--backend-command", "backend_command", "shell command for external-command");
  add_value_flag(app, ov, "--out", "output", "output directory");
  add_value_flag(app, ov, "--variant", "variant", "squared | linear");
  add_value_flag(app, ov, "--context", "context", "document | sentence");
  add_value_flag(app, ov, "--cutoff", "cutoff", "word signature cutoff");
  add_value_flag(app, ov, "--limit", "limit", "documents kept per query");
  add_value_flag(app, ov, "--window", "window", "WSD context window in open-class words");
  add_value_flag(app, ov, "--subset", "subset", "document id prefix for an extra totals row");
  add_value_flag(app, ov, "--methods", "methods", "baseline methods, comma separated (ran,syn,sdef,sall)");
  app.add_option_function<std::vector<std::string>>(
      "--signatures",
      [&ov](const std::vector<std::string>& sets) {
        for (const auto& s : sets) ov.values.emplace_back("signatures", s);
      },
      "signature set name=dir[:filtered], repeatable");
  app.add_flag("--dedup-host", ov.dedup_host, "keep one retrieved document per host");
  app.add_flag("--keep-intermediate", ov.keep_intermediate, "write document lists and frequency vectors");
  app.add_flag("--raw-surface", ov.raw_surface, "count surface forms instead of lemmas");

  std::string lemma;
  auto* query = app.add_subcommand("query", "print the query cascade of every sense");
  query->add_option("lemma", lemma)->required();

  auto* build = app.add_subcommand("build", "build one signature per sense collection");
  build->add_option("lemma", lemma)->required();
  std::string from_tags, from_collections;
  bool from_retrieval = false;
  auto* opt_tags = build->add_option("--from-tags", from_tags, "sense-tagged corpus");
  auto* opt_ret = build->add_flag("--from-retrieval", from_retrieval, "run the query cascade on the backend");
  auto* opt_coll = build->add_option("--from-collections", from_collections, "directory of collection subdirectories");
  opt_tags->excludes(opt_ret)->excludes(opt_coll);
  opt_ret->excludes(opt_coll);

  auto* filter = app.add_subcommand("filter", "filter signatures by the word signature");
  filter->add_option("lemma", lemma)->required();

  std::vector<std::string> lemmas;
  auto* eval = app.add_subcommand("eval", "evaluate baselines and signature sets on the tagged corpus");
  eval->add_option("lemmas", lemmas)->required();

  std::string documents;
  auto* index = app.add_subcommand("index", "tokenize a document directory into an index file");
  index->add_option("documents", documents)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    topsig::PipelineConfig config;
    if (!config_path.empty()) topsig::apply_config_file(config, config_path);
    for (const auto& [key, value] : ov.values) config.set(key, value);
    if (ov.dedup_host) config.dedup_host = true;
    if (ov.keep_intermediate) config.keep_intermediate = true;
    if (ov.raw_surface) config.raw_surface = true;

    if (*query) {
      topsig::run_query(config, lemma, std::cout);
    } else if (*build) {
      topsig::BuildSource source = topsig::BuildSource::tags;
      if (!from_tags.empty()) {
        config.tagged_corpus = from_tags;
      } else if (from_retrieval) {
        source = topsig::BuildSource::retrieval;
      } else if (!from_collections.empty()) {
        source = topsig::BuildSource::collections;
        config.collections = from_collections;
      } else if (config.tagged_corpus.empty()) {
        throw topsig::ConfigError("build needs --from-tags, --from-retrieval or --from-collections");
      }
      topsig::run_build(config, lemma, source, std::cout);
    } else if (*filter) {
      topsig::run_filter(config, lemma, std::cout);
    } else if (*eval) {
      topsig::run_eval(config, lemmas, std::cout);
    } else if (*index) {
      topsig::run_index(config, documents, std::cout);
    }
  } catch (const topsig::ConfigError& e) {
    std::cerr << "topsig: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "topsig: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
