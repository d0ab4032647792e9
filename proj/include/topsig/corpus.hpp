#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "topsig/lexicon.hpp"
#include "topsig/text.hpp"

namespace topsig {

struct Document {
  std::string id;
  std::string source_host;  // empty when unknown
  std::string text;
  std::vector<Sentence> sentences;

  std::size_t token_count() const;
  bool contains_lemma(std::string_view lemma) const;
};

/// Builds a document and tokenizes its text.
Document make_document(std::string id, std::string source_host, std::string text,
                       const Lemmatizer& lemmatizer = Lemmatizer::standard());

struct SenseTaggedToken {
  Token token;
  std::optional<WordSense> sense;  // lemma always equals token.lemma
};

struct TaggedDocument {
  std::string id;
  std::string source_host;
  std::vector<std::vector<SenseTaggedToken>> sentences;

  /// Same tokens with the tags dropped.
  Document plain() const;
};

/// Documents grouped under one label (a word sense such as "church#1", or "misc").
class DocumentCollection {
 public:
  DocumentCollection() = default;
  explicit DocumentCollection(std::string label) : label_(std::move(label)) {}

  const std::string& label() const { return label_; }
  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  bool contains(std::string_view id) const;

  /// Throws Error when a document with the same id is already present.
  void add(Document doc);
  /// Keeps the first `limit` documents.
  void truncate(std::size_t limit);

 private:
  std::string label_;
  std::vector<Document> documents_;
  std::unordered_set<std::string> ids_;
};

enum class Granularity { document, sentence };

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view s);

/// Parses the sense-tagged corpus format:
///
///   DOC <id> [host=<host>]
///   surface|lemma|sense_number     (sense number optional; a bare surface is lemmatized)
///   .                              (forces a sentence break)
///
/// With a lexicon every tag is resolved to a WordSense and unresolvable tags
/// are errors; without one tags are dropped.
std::vector<TaggedDocument> parse_sense_tagged(std::istream& in, const Lexicon* lexicon,
                                               const std::string& source = "<corpus>",
                                               const Lemmatizer& lemmatizer = Lemmatizer::standard());

std::vector<TaggedDocument> load_sense_tagged(const std::filesystem::path& path,
                                              const Lexicon& lexicon);

/// Writes documents in the sense-tagged format (untagged token lines).
std::string serialize_corpus(std::span<const Document> docs);
/// Writes tagged documents, keeping the sense numbers.
std::string serialize_tagged_corpus(std::span<const TaggedDocument> docs);

/// One plain document per file. A sidecar "<file>.meta" may hold "host=<host>".
/// Markup spans are dropped before tokenizing.
Document load_plain_document(const std::filesystem::path& path, std::string id);

/// Every regular file below `dir` (sidecars excluded), ids are the paths
/// relative to `dir`, sorted.
std::vector<Document> load_document_directory(const std::filesystem::path& dir);

/// Directory-per-collection layout: each subdirectory of `root` is one
/// collection named after the subdirectory.
std::map<std::string, DocumentCollection> load_plain_collections(const std::filesystem::path& root);

/// A directory of plain documents, or a file in the sense-tagged format read without tags.
std::vector<Document> load_corpus_documents(const std::filesystem::path& path);

/// One collection per sense of `lemma` attested in the tags. A document with
/// occurrences of several senses goes to every matching collection; with
/// sentence granularity only the containing sentences are added, each wrapped
/// as a one-sentence document.
std::map<WordSense, DocumentCollection> collections_from_tags(std::span<const TaggedDocument> docs,
                                                              std::string_view lemma,
                                                              Granularity granularity);

/// Keeps the first document per source host; documents without a host are all kept.
DocumentCollection dedup_by_host(const DocumentCollection& collection);

}  // namespace topsig
