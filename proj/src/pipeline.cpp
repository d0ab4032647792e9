#include "topsig/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "topsig/error.hpp"
#include "topsig/log.hpp"

namespace topsig {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key) + " must be a non-negative integer, got '" + std::string(value) + "'");
  }
  return n;
}

double parse_real(std::string_view key, std::string_view value) {
  const std::string text(value);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') {
    throw ConfigError(std::string(key) + " must be a number, got '" + text + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(std::string(key) + " must be true or false, got '" + std::string(value) + "'");
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(value)};
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

Lexicon load_configured_lexicon(const PipelineConfig& config) {
  if (config.lexicon.empty()) throw ConfigError("no lexicon configured (--lexicon or lexicon=)");
  if (!fs::exists(config.lexicon)) throw ConfigError("lexicon not found: " + config.lexicon.string());
  return load_lexicon(config.lexicon);
}

std::vector<WordSense> senses_or_throw(const Lexicon& lexicon, std::string_view lemma) {
  auto senses = lexicon.senses(lemma);
  if (senses.empty()) throw ConfigError("lemma not in lexicon: " + std::string(lemma));
  return senses;
}

void dump_intermediate(const fs::path& dir, const DocumentCollection& coll, Granularity context,
                       std::string_view target, TermForm form) {
  fs::create_directories(dir);
  std::string ids;
  for (const auto& d : coll.documents()) ids += d.id + "\t" + d.source_host + "\n";
  write_file(dir / (coll.label() + ".docs"), ids);
  std::string counts;
  for (const auto& [term, n] : frequency_vector(coll, context, target, form).counts) {
    counts += term + "\t" + std::to_string(n) + "\n";
  }
  write_file(dir / (coll.label() + ".freq"), counts);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void PipelineConfig::set(std::string_view raw_key, std::string_view raw_value) {
  std::string key(raw_key);
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  const std::string value = trim(raw_value);

  if (key == "lexicon") lexicon = value;
  else if (key == "tagged_corpus" || key == "corpus") tagged_corpus = value;
  else if (key == "reference_corpus" || key == "reference") reference_corpus = value;
  else if (key == "collections") collections = value;
  else if (key == "index") index = value;
  else if (key == "backend") {
    if (value != "local" && value != "external-command") {
      throw ConfigError("backend must be 'local' or 'external-command', got '" + value + "'");
    }
    backend = value;
  } else if (key == "backend_command") backend_command = value;
  else if (key == "limit") limit = parse_count(key, value);
  else if (key == "context") context = parse_granularity(value);
  else if (key == "variant") variant = parse_variant(value);
  else if (key == "cutoff") cutoff = parse_real(key, value);
  else if (key == "window") window = parse_count(key, value);
  else if (key == "dedup_host") dedup_host = parse_bool(key, value);
  else if (key == "output" || key == "out") output = value;
  else if (key == "subset") subset = value.empty() ? std::nullopt : std::optional(value);
  else if (key == "keep_intermediate") keep_intermediate = parse_bool(key, value);
  else if (key == "raw_surface") raw_surface = parse_bool(key, value);
  else if (key == "methods") {
    methods = split_list(value);
    for (const auto& m : methods) {
      if (m != "ran" && m != "syn" && m != "sdef" && m != "sall") {
        throw ConfigError("unknown baseline method '" + m + "' (expected ran, syn, sdef, sall)");
      }
    }
  } else if (key == "signatures") {
    for (const auto& text : split_list(value)) signature_sets.push_back(parse_signature_set(text));
  } else {
    throw ConfigError("unknown configuration key '" + std::string(raw_key) + "'");
  }
}

void PipelineConfig::validate(std::initializer_list<const fs::path*> required_paths) const {
  if (limit < 1) throw ConfigError("limit must be at least 1");
  if (window < 1) throw ConfigError("window must be at least 1");
  if (!(cutoff >= 0.0)) throw ConfigError("cutoff must be non-negative");
  for (const fs::path* p : required_paths) {
    if (p->empty()) throw ConfigError("a required path is not configured");
    if (!fs::exists(*p)) throw ConfigError("path does not exist: " + p->string());
  }
}

void apply_config_file(PipelineConfig& config, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  const fs::path base = path.parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    static const std::set<std::string> path_keys = {"lexicon", "tagged_corpus", "corpus",
                                                    "reference_corpus", "reference", "collections",
                                                    "index", "output", "out"};
    if (path_keys.count(key) && !value.empty() && fs::path(value).is_relative()) {
      value = (base / value).lexically_normal().string();
    }
    try {
      config.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

PipelineConfig load_config(const fs::path& path) {
  PipelineConfig config;
  apply_config_file(config, path);
  return config;
}

SignatureSet parse_signature_set(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError("signature set must look like name=dir[:filtered], got '" + std::string(text) + "'");
  }
  SignatureSet set;
  set.name = std::string(text.substr(0, eq));
  std::string dir(text.substr(eq + 1));
  const std::string suffix = ":filtered";
  if (dir.size() > suffix.size() && dir.compare(dir.size() - suffix.size(), suffix.size(), suffix) == 0) {
    set.filtered = true;
    dir.resize(dir.size() - suffix.size());
  }
  set.directory = dir;
  return set;
}

fs::path signature_path(const fs::path& dir, const WordSense& sense, bool filtered) {
  return dir / (sense.label() + (filtered ? ".filtered.sig" : ".sig"));
}

std::map<WordSense, TopicSignature> load_signature_set(const SignatureSet& set, const Lexicon& lexicon,
                                                       std::string_view lemma) {
  std::map<WordSense, TopicSignature> out;
  for (const auto& sense : lexicon.senses(lemma)) {
    const auto path = signature_path(set.directory, sense, set.filtered);
    if (fs::exists(path)) out.emplace(sense, load_signature(path));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Backends

std::unique_ptr<SearchBackend> make_backend(const PipelineConfig& config) {
  if (config.backend == "external-command") {
    if (config.backend_command.empty()) throw ConfigError("backend_command is required for external-command");
    return std::make_unique<ExternalCommandBackend>(config.backend_command);
  }
  if (config.index.empty()) throw ConfigError("local backend needs an index (--index)");
  if (!fs::exists(config.index)) throw ConfigError("index not found: " + config.index.string());
  auto docs = fs::is_directory(config.index) ? load_document_directory(config.index)
                                             : load_corpus_documents(config.index);
  return std::make_unique<LocalBackend>(std::make_shared<const LocalIndex>(std::move(docs)));
}

// ---------------------------------------------------------------------------
// Subcommands

void run_query(const PipelineConfig& config, std::string_view lemma, std::ostream& out) {
  config.validate();
  const Lexicon lexicon = load_configured_lexicon(config);
  for (const auto& sense : senses_or_throw(lexicon, lemma)) {
    out << sense.label() << " [" << sense.synset << "]\n";
    const auto cascade = build_query_cascade(lexicon, sense);
    if (cascade.empty()) {
      out << "  (no usable query)\n";
      continue;
    }
    for (const auto& q : cascade) out << "  " << q.procedure() << ": " << q.to_string() << '\n';
  }
}

BuildSummary run_build(const PipelineConfig& config, std::string_view lemma, BuildSource source,
                       std::ostream& out) {
  config.validate();
  const Lexicon lexicon = load_configured_lexicon(config);
  const auto senses = senses_or_throw(lexicon, lemma);
  const std::string target = senses.front().lemma;

  std::map<std::string, DocumentCollection> collections;
  std::map<std::string, int> procedures;

  switch (source) {
    case BuildSource::tags: {
      config.validate({&config.tagged_corpus});
      const auto docs = load_sense_tagged(config.tagged_corpus, lexicon);
      for (auto& [sense, coll] : collections_from_tags(docs, target, config.context)) {
        collections.emplace(sense.label(), std::move(coll));
      }
      break;
    }
    case BuildSource::retrieval: {
      auto backend = make_backend(config);
      for (const auto& sense : senses) {
        const auto cascade = build_query_cascade(lexicon, sense);
        auto result = retrieve_collection(*backend, cascade, config.limit, sense.label());
        procedures[sense.label()] = result.procedure;
        collections.emplace(sense.label(), std::move(result.collection));
      }
      break;
    }
    case BuildSource::collections: {
      config.validate({&config.collections});
      collections = load_plain_collections(config.collections);
      break;
    }
  }

  for (auto& [label, coll] : collections) {
    coll.truncate(config.limit);
    if (config.dedup_host) coll = dedup_by_host(coll);
  }
  std::map<std::string, DocumentCollection> usable;
  for (auto& [label, coll] : collections) {
    if (coll.empty()) {
      warn("collection " + label + " is empty and is left out of the contrast set");
    } else {
      usable.emplace(label, coll);
    }
  }
  if (usable.size() < 2) {
    throw ContrastSetError("need documents for at least two senses of '" + target + "', found " +
                           std::to_string(usable.size()));
  }

  const TermForm form = config.raw_surface ? TermForm::surface : TermForm::lemma;
  const auto signatures = build_signatures(usable, config.context, target, config.variant, form);

  fs::create_directories(config.output);
  BuildSummary summary;
  for (const auto& [label, coll] : collections) {
    BuildSummary::Entry entry;
    entry.label = label;
    entry.documents = coll.size();
    if (auto it = procedures.find(label); it != procedures.end()) entry.procedure = it->second;
    if (auto it = signatures.find(label); it != signatures.end()) {
      entry.terms = it->second.entries.size();
      entry.file = config.output / (label + ".sig");
      save_signature(it->second, entry.file);
    }
    if (config.keep_intermediate) {
      dump_intermediate(config.output / "intermediate", coll, config.context, target, form);
    }
    out << label << ": " << entry.documents << " documents";
    if (entry.procedure >= 0) out << ", procedure " << entry.procedure;
    out << ", " << entry.terms << " terms";
    if (!entry.file.empty()) out << " -> " << entry.file.string();
    out << '\n';
    summary.entries.push_back(std::move(entry));
  }
  return summary;
}

std::vector<fs::path> run_filter(const PipelineConfig& config, std::string_view lemma, std::ostream& out) {
  config.validate();
  if (config.reference_corpus.empty()) throw ConfigError("filter needs a reference corpus (--reference)");
  config.validate({&config.reference_corpus});
  const Lexicon lexicon = load_configured_lexicon(config);
  const auto senses = senses_or_throw(lexicon, lemma);
  const std::string target = senses.front().lemma;

  const auto reference = load_corpus_documents(config.reference_corpus);
  const TopicSignature word_signature = build_word_signature(reference, target, Chi2Variant::squared);
  fs::create_directories(config.output);
  save_signature(word_signature, config.output / (target + ".word.sig"));

  std::vector<fs::path> written;
  for (const auto& sense : senses) {
    const auto input = signature_path(config.output, sense, false);
    if (!fs::exists(input)) continue;
    const auto filtered = filter_by_word_signature(load_signature(input), word_signature, config.cutoff);
    const auto path = signature_path(config.output, sense, true);
    save_signature(filtered, path);
    out << sense.label() << ": " << filtered.entries.size() << " terms above " << format_weight(config.cutoff)
        << " -> " << path.string() << '\n';
    written.push_back(path);
  }
  if (written.empty()) throw Error("no signatures for '" + target + "' in " + config.output.string());
  return written;
}

WsdReport run_eval(const PipelineConfig& config, const std::vector<std::string>& lemmas, std::ostream& out) {
  config.validate();
  if (config.tagged_corpus.empty()) throw ConfigError("eval needs a sense-tagged test corpus (--corpus)");
  config.validate({&config.tagged_corpus});
  if (lemmas.empty()) throw ConfigError("eval needs at least one lemma");
  const Lexicon lexicon = load_configured_lexicon(config);
  const auto docs = load_sense_tagged(config.tagged_corpus, lexicon);

  std::vector<Occurrence> occurrences;
  for (const auto& lemma : lemmas) {
    senses_or_throw(lexicon, lemma);
    auto found = find_occurrences(docs, lemma);
    if (found.empty()) {
      warn("'" + lemma + "' has no tagged occurrences; row skipped");
      continue;
    }
    occurrences.insert(occurrences.end(), found.begin(), found.end());
  }
  if (occurrences.empty()) throw Error("no tagged occurrences for any requested lemma");

  std::vector<WsdMethod> methods;
  const auto baseline_mode = ContextMode::window(config.window);
  for (const auto& m : config.methods) {
    if (m == "ran") methods.push_back(random_method());
    else if (m == "syn") methods.push_back(wordlist_method(lexicon, BaselineLevel::syn, baseline_mode));
    else if (m == "sdef") methods.push_back(wordlist_method(lexicon, BaselineLevel::syn_def, baseline_mode));
    else if (m == "sall") methods.push_back(wordlist_method(lexicon, BaselineLevel::syn_all, baseline_mode));
  }
  for (const auto& set : config.signature_sets) {
    if (!fs::is_directory(set.directory)) {
      throw ConfigError("signature directory not found: " + set.directory.string());
    }
    std::map<WordSense, TopicSignature> signatures;
    for (const auto& lemma : lemmas) signatures.merge(load_signature_set(set, lexicon, lemma));
    methods.push_back(signature_method(set.name, std::move(signatures), config.window));
  }

  const WsdReport report = evaluate(occurrences, methods, config.subset);
  fs::create_directories(config.output);
  write_file(config.output / "report.tsv", report.to_tsv());
  write_file(config.output / "report.txt", report.to_text());
  out << report.to_text();
  return report;
}

fs::path run_index(const PipelineConfig& config, const fs::path& documents, std::ostream& out) {
  if (!fs::is_directory(documents)) throw ConfigError("not a document directory: " + documents.string());
  auto docs = load_document_directory(documents);
  const LocalIndex index(docs);
  fs::create_directories(config.output);
  const fs::path path = config.output / "index.corpus";
  write_file(path, serialize_corpus(index.documents()));
  out << "indexed " << index.documents().size() << " documents, " << index.all_postings().size()
      << " lemmas -> " << path.string() << '\n';
  return path;
}

}  // namespace topsig
