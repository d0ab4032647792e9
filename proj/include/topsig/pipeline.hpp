#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topsig/corpus.hpp"
#include "topsig/retrieval.hpp"
#include "topsig/signature.hpp"
#include "topsig/wsd.hpp"

namespace topsig {

/// A named set of signature files used as an evaluation method.
struct SignatureSet {
  std::string name;
  std::filesystem::path directory;
  bool filtered = false;  // read <sense>.filtered.sig instead of <sense>.sig
};

/// Flat key=value configuration. Command-line flags are applied on top with set().
struct PipelineConfig {
  std::filesystem::path lexicon;
  std::filesystem::path tagged_corpus;
  std::filesystem::path reference_corpus;
  std::filesystem::path collections;
  std::filesystem::path index;
  std::string backend = "local";
  std::string backend_command;
  std::size_t limit = kDefaultRetrievalLimit;
  Granularity context = Granularity::document;
  Chi2Variant variant = Chi2Variant::squared;
  double cutoff = kDefaultCutoff;
  std::size_t window = kDefaultWindow;
  bool dedup_host = false;
  std::filesystem::path output = ".";
  std::optional<std::string> subset;
  bool keep_intermediate = false;
  bool raw_surface = false;
  std::vector<std::string> methods = {"ran", "syn", "sdef", "sall"};
  std::vector<SignatureSet> signature_sets;

  /// Applies one key. Keys use underscores ("tagged_corpus"); dashes are accepted too.
  /// Throws ConfigError for unknown keys and bad values.
  void set(std::string_view key, std::string_view value);

  /// Range checks (limit, window, cutoff) and existence of every path listed.
  void validate(std::initializer_list<const std::filesystem::path*> required_paths = {}) const;
};

/// Reads a key=value file; '#' starts a comment line. Relative paths are
/// resolved against the file's directory.
PipelineConfig load_config(const std::filesystem::path& path);
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);

/// "name=dir" or "name=dir:filtered".
SignatureSet parse_signature_set(std::string_view text);

/// Prints every sense's query cascade. Throws ConfigError for unknown lemmas.
void run_query(const PipelineConfig& config, std::string_view lemma, std::ostream& out);

enum class BuildSource { tags, retrieval, collections };

struct BuildSummary {
  struct Entry {
    std::string label;
    std::size_t documents = 0;
    int procedure = -1;  // retrieval only
    std::size_t terms = 0;
    std::filesystem::path file;
  };
  std::vector<Entry> entries;
};

/// Builds one signature file per sense collection into config.output.
BuildSummary run_build(const PipelineConfig& config, std::string_view lemma, BuildSource source,
                       std::ostream& out);

/// Filters the signatures in config.output with the word signature of the
/// reference corpus and writes <sense>.filtered.sig next to them.
std::vector<std::filesystem::path> run_filter(const PipelineConfig& config, std::string_view lemma,
                                              std::ostream& out);

/// Evaluates every configured method on the tagged corpus and writes
/// report.tsv and report.txt into config.output.
WsdReport run_eval(const PipelineConfig& config, const std::vector<std::string>& lemmas,
                   std::ostream& out);

/// Tokenizes a document directory into config.output/index.corpus.
std::filesystem::path run_index(const PipelineConfig& config, const std::filesystem::path& documents,
                                std::ostream& out);

/// Backend named by the configuration.
std::unique_ptr<SearchBackend> make_backend(const PipelineConfig& config);

/// Loads whichever signatures exist for the lemma's senses from a set.
std::map<WordSense, TopicSignature> load_signature_set(const SignatureSet& set, const Lexicon& lexicon,
                                                       std::string_view lemma);

/// "<dir>/<label>.sig" or "<dir>/<label>.filtered.sig".
std::filesystem::path signature_path(const std::filesystem::path& dir, const WordSense& sense,
                                     bool filtered);

}  // namespace topsig
