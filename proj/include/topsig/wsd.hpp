#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topsig/corpus.hpp"
#include "topsig/lexicon.hpp"
#include "topsig/signature.hpp"

namespace topsig {

inline constexpr std::size_t kDefaultWindow = 100;

/// A sense-tagged occurrence of a target word. The document must outlive it.
struct Occurrence {
  const TaggedDocument* document = nullptr;
  std::size_t position = 0;  // token index within the whole document
  std::size_t sentence_index = 0;
  WordSense gold;
};

/// Every tagged token of `lemma`, in document order.
std::vector<Occurrence> find_occurrences(std::span<const TaggedDocument> docs, std::string_view lemma);

struct ContextMode {
  enum class Kind { window, sentence };
  Kind kind = Kind::window;
  std::size_t size = kDefaultWindow;

  static ContextMode window(std::size_t n = kDefaultWindow) { return {Kind::window, n}; }
  static ContextMode sentence() { return {Kind::sentence, 0}; }
};

/// Open-class lemmas around a target, in text order. Repeats are kept.
using Context = std::vector<std::string>;

/// window(n): up to n open-class lemmas, n/2 on each side of the target,
/// borrowing from the other side near document edges.
/// sentence: the open-class lemmas of the containing sentence.
/// The target lemma is never part of the context.
Context context_window(const Occurrence& occurrence, ContextMode mode);

using SenseScores = std::map<WordSense, double>;

/// Sum of signature weights of the context lemmas, with multiplicity.
SenseScores score_by_signature(const Context& context,
                               const std::map<WordSense, TopicSignature>& signatures);

/// One point per context match of a list entry. Multiword entries
/// ("Christian church") match only as a contiguous lemma sequence.
SenseScores score_by_wordlist(const Context& context,
                              const std::map<WordSense, std::set<std::string>>& lists);

using Scorer = std::function<SenseScores(const Occurrence&)>;

struct WsdDecision {
  Occurrence occurrence;
  SenseScores scores;
  std::vector<WordSense> chosen;  // every sense with the top score
  double credit = 0.0;            // 1/|chosen| when gold is chosen, else 0
};

/// Picks the top-scoring candidates. Senses missing from the scores count as
/// 0, so an all-zero score vector is a tie over every candidate.
WsdDecision disambiguate(const Occurrence& occurrence, const Scorer& scorer,
                         std::span<const WordSense> candidates);

/// Expected recall of a uniform random pick.
double random_baseline(std::size_t candidate_count);

struct WsdMethod {
  std::string name;
  /// False when the method has no model for a word; its cells print as "-".
  std::function<bool(std::string_view lemma)> covers;
  Scorer score;
};

/// Uniform random choice, evaluated analytically (every candidate tied).
WsdMethod random_method(std::string name = "Ran");

/// WordNet list baseline scored with uniform weights.
WsdMethod wordlist_method(const Lexicon& lexicon, BaselineLevel level,
                          ContextMode mode = ContextMode::window(),
                          const Lemmatizer& lemmatizer = Lemmatizer::standard());

/// Topic signatures keyed by sense. Context comes from each signature's own
/// context field: sentence signatures use the sentence, document signatures
/// use window(window_size).
WsdMethod signature_method(std::string name, std::map<WordSense, TopicSignature> signatures,
                           std::size_t window_size = kDefaultWindow);

/// All decisions of one method, in the given occurrence order. Candidates per
/// word are the senses attested among the occurrences.
std::vector<WsdDecision> decide_all(std::span<const Occurrence> occurrences, const WsdMethod& method);

struct ReportRow {
  std::string word;
  std::size_t senses = 0;  // attested senses (#s)
  std::size_t occurrences = 0;
  std::vector<std::optional<double>> recall;  // one per method
};

struct WsdReport {
  std::vector<std::string> methods;
  std::vector<ReportRow> rows;  // sorted by word
  ReportRow total;
  std::optional<ReportRow> subset_total;

  /// word, #s, #occ, then one column per method.
  std::string to_tsv() const;
  /// Same content as an aligned plain-text table.
  std::string to_text() const;
};

/// Recall per word and method plus an occurrence-weighted total. With a
/// subset prefix, an extra totals row covers the occurrences whose document
/// id starts with it.
WsdReport evaluate(std::span<const Occurrence> occurrences, std::span<const WsdMethod> methods,
                   std::optional<std::string> subset_prefix = std::nullopt);

}  // namespace topsig
