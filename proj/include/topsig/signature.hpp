#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topsig/corpus.hpp"

namespace topsig {

inline constexpr double kDefaultCutoff = 4.64;

/// squared: (f - m)^2 / m, the usual chi-square cell contribution.
/// linear:  (f - m) / m.
/// Both are 0 whenever f <= m.
enum class Chi2Variant { squared, linear };

std::string_view to_string(Chi2Variant v);
Chi2Variant parse_variant(std::string_view s);

/// Which token field is counted. `surface` exists for debugging unlemmatized input.
enum class TermForm { lemma, surface };

/// Term frequencies of one collection. Zero counts are never stored.
struct FrequencyVector {
  std::string collection;
  std::map<std::string, std::uint64_t, std::less<>> counts;
  std::uint64_t total = 0;

  void add(const std::string& term, std::uint64_t n = 1);
  std::uint64_t count(std::string_view term) const;
};

/// Counts open-class terms of a collection, leaving out the target lemma.
/// With sentence context only sentences that contain the target count.
FrequencyVector frequency_vector(const DocumentCollection& collection, Granularity context,
                                 std::string_view target, TermForm form = TermForm::lemma);

/// Marginals of the collection x term contingency table.
class ContingencyStats {
 public:
  explicit ContingencyStats(std::vector<FrequencyVector> vectors);

  const std::vector<FrequencyVector>& vectors() const { return vectors_; }
  std::size_t rows() const { return vectors_.size(); }
  std::uint64_t row_total(std::size_t i) const { return vectors_.at(i).total; }
  std::uint64_t col_total(std::string_view term) const;
  std::uint64_t grand_total() const { return grand_total_; }
  std::uint64_t freq(std::size_t i, std::string_view term) const { return vectors_.at(i).count(term); }

 private:
  std::vector<FrequencyVector> vectors_;
  std::map<std::string, std::uint64_t, std::less<>> col_totals_;
  std::uint64_t grand_total_ = 0;
};

/// row_total(i) * col_total(term) / grand_total. Throws StatisticsError on an empty table.
double expected_mean(const ContingencyStats& stats, std::size_t i, std::string_view term);

double chi2_weight(const ContingencyStats& stats, std::size_t i, std::string_view term,
                   Chi2Variant variant = Chi2Variant::squared);

struct SignatureEntry {
  std::string term;
  double weight = 0.0;

  friend bool operator==(const SignatureEntry&, const SignatureEntry&) = default;
};

/// (term, weight) list sorted by weight descending, then term ascending.
struct TopicSignature {
  std::string collection;
  std::vector<SignatureEntry> entries;
  Chi2Variant variant = Chi2Variant::squared;
  Granularity context = Granularity::document;

  /// 0 when the term is absent.
  double weight_of(std::string_view term) const;
  /// Term -> weight map for repeated lookups.
  std::unordered_map<std::string, double> weight_map() const;

  friend bool operator==(const TopicSignature&, const TopicSignature&) = default;
};

/// Signature of row i of the table: every term with positive weight, sorted.
TopicSignature signature_for_row(const ContingencyStats& stats, std::size_t i, Chi2Variant variant,
                                 Granularity context);

/// One signature per collection, each contrasted against all the others.
/// Throws ContrastSetError with fewer than two collections.
std::map<std::string, TopicSignature> build_signatures(
    const std::map<std::string, DocumentCollection>& collections, Granularity context,
    std::string_view target, Chi2Variant variant = Chi2Variant::squared,
    TermForm form = TermForm::lemma);

/// Signature of the documents containing `target` contrasted against the
/// documents that do not. Throws DegenerateSplitError if either side is empty.
TopicSignature build_word_signature(std::span<const Document> docs, std::string_view target,
                                    Chi2Variant variant = Chi2Variant::squared);

/// Keeps the entries whose term weighs strictly more than `cutoff` in the
/// word signature. Weights and order are unchanged.
TopicSignature filter_by_word_signature(const TopicSignature& signature,
                                        const TopicSignature& word_signature,
                                        double cutoff = kDefaultCutoff);

/// TSV: "# signature <collection> variant=<v> context=<c>" then one
/// "term<TAB>weight" row per entry, weights with two decimals.
std::string serialize_signature(const TopicSignature& signature);
TopicSignature parse_signature(std::istream& in, const std::string& source = "<signature>");
TopicSignature load_signature(const std::filesystem::path& path);
void save_signature(const TopicSignature& signature, const std::filesystem::path& path);

/// Two-decimal rendering used by every report and signature file.
std::string format_weight(double value);

}  // namespace topsig
