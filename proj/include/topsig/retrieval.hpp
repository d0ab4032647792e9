#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topsig/corpus.hpp"
#include "topsig/lexicon.hpp"

namespace topsig {

inline constexpr std::size_t kDefaultNearWindow = 10;
inline constexpr std::size_t kDefaultRetrievalLimit = 150;

/// Boolean query tree over phrase atoms. Construction enforces the
/// invariants: AND/OR need at least one child and NEAR joins two TERMs.
class Query {
 public:
  enum class Kind { term, conjunction, disjunction, near };

  /// Throws std::invalid_argument if the phrase contains no tokens.
  static Query term(std::string phrase, const Lemmatizer& lemmatizer = Lemmatizer::standard());
  static Query all_of(std::vector<Query> children);
  static Query any_of(std::vector<Query> children);
  static Query near(Query a, Query b, std::size_t window = kDefaultNearWindow);

  Kind kind() const { return kind_; }
  const std::string& phrase() const { return phrase_; }
  const std::vector<std::string>& lemmas() const { return lemmas_; }
  const std::vector<Query>& children() const { return children_; }
  std::size_t window() const { return window_; }

  /// Cascade stage (1-4) that produced the query, 0 when built by hand.
  int procedure() const { return procedure_; }
  Query& with_procedure(int procedure) {
    procedure_ = procedure;
    return *this;
  }

  /// Engine syntax handed to external backends, e.g.
  /// ("church" AND ("church" NEAR/10 "doctrine")).
  std::string to_string() const;

  /// TERM and NEAR leaves.
  std::size_t atom_count() const;

 private:
  Query() = default;

  Kind kind_ = Kind::term;
  std::string phrase_;
  std::vector<std::string> lemmas_;
  std::vector<Query> children_;
  std::size_t window_ = 0;
  int procedure_ = 0;
};

/// Query construction cascade for one sense, in preference order:
///   1. OR over monosemous synonyms
///   2. AND over the open-class gloss words
///   3. AND over the synset members plus one NEAR(target, gloss word) per gloss word
///   4. AND over the synset members and the gloss words
/// Stages without usable atoms are left out.
std::vector<Query> build_query_cascade(const Lexicon& lexicon, const WordSense& sense,
                                       std::size_t near_window = kDefaultNearWindow,
                                       const Lemmatizer& lemmatizer = Lemmatizer::standard());

/// Open-class gloss words (as written, lowercased, first occurrence order).
std::vector<std::string> gloss_query_words(const Synset& synset,
                                           const Lemmatizer& lemmatizer = Lemmatizer::standard());

struct Posting {
  std::size_t doc = 0;
  std::vector<std::size_t> positions;  // token-absolute
};

/// In-memory inverted index over document lemmas; stands in for a web search engine.
class LocalIndex {
 public:
  LocalIndex() = default;
  /// Throws Error on duplicate document ids.
  explicit LocalIndex(std::vector<Document> docs);

  const std::vector<Document>& documents() const { return docs_; }
  const Document* find(std::string_view id) const;
  std::span<const Posting> postings(std::string_view lemma) const;
  const std::unordered_map<std::string, std::vector<Posting>>& all_postings() const { return postings_; }
  /// Lemma at each token position of a document.
  const std::vector<std::string>& lemma_stream(std::size_t doc) const { return streams_[doc]; }

  /// Matching documents ranked by descending number of matched atoms, ties by
  /// ascending id, truncated to `limit`.
  std::vector<Document> evaluate(const Query& query, std::size_t limit) const;

 private:
  std::vector<std::size_t> match(const Query& q) const;
  std::vector<std::size_t> phrase_starts(std::size_t doc, const std::vector<std::string>& lemmas) const;

  std::vector<Document> docs_;
  std::vector<std::vector<std::string>> streams_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
};

LocalIndex index_documents(std::vector<Document> docs);

class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  /// At most `limit` documents, best first, with source_host filled where known.
  virtual std::vector<Document> search(const Query& query, std::size_t limit) = 0;
};

class LocalBackend : public SearchBackend {
 public:
  explicit LocalBackend(std::shared_ptr<const LocalIndex> index) : index_(std::move(index)) {}
  std::vector<Document> search(const Query& query, std::size_t limit) override;

 private:
  std::shared_ptr<const LocalIndex> index_;
};

/// Runs `/bin/sh -c <command>`, writes the serialized query to its standard
/// input and reads one document path per output line. Documents are loaded
/// as plain documents (with optional .meta sidecars). A nonzero exit status
/// is a BackendError.
class ExternalCommandBackend : public SearchBackend {
 public:
  explicit ExternalCommandBackend(std::string command) : command_(std::move(command)) {}
  std::vector<Document> search(const Query& query, std::size_t limit) override;

 private:
  std::string command_;
};

struct RetrievalResult {
  DocumentCollection collection;
  int procedure = 0;  // 0 when every query came back empty
};

/// Runs the cascade in order and keeps the results of the first query with
/// at least one hit, truncated to `limit`.
RetrievalResult retrieve_collection(SearchBackend& backend, std::span<const Query> cascade,
                                    std::size_t limit = kDefaultRetrievalLimit,
                                    std::string label = {});

}  // namespace topsig
