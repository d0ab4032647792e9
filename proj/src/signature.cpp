#include "topsig/signature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "topsig/error.hpp"

namespace topsig {

namespace {

void sort_entries(std::vector<SignatureEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const SignatureEntry& a, const SignatureEntry& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.term < b.term;
  });
}

}  // namespace

std::string_view to_string(Chi2Variant v) { return v == Chi2Variant::squared ? "squared" : "linear"; }

Chi2Variant parse_variant(std::string_view s) {
  if (s == "squared") return Chi2Variant::squared;
  if (s == "linear") return Chi2Variant::linear;
  throw ConfigError("variant must be 'squared' or 'linear', got '" + std::string(s) + "'");
}

std::string format_weight(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

// ---------------------------------------------------------------------------

void FrequencyVector::add(const std::string& term, std::uint64_t n) {
  if (n == 0) return;
  counts[term] += n;
  total += n;
}

std::uint64_t FrequencyVector::count(std::string_view term) const {
  auto it = counts.find(term);
  return it == counts.end() ? 0 : it->second;
}

FrequencyVector frequency_vector(const DocumentCollection& collection, Granularity context,
                                 std::string_view target, TermForm form) {
  FrequencyVector vf;
  vf.collection = collection.label();
  for (const auto& doc : collection.documents()) {
    for (const auto& sentence : doc.sentences) {
      if (context == Granularity::sentence &&
          std::none_of(sentence.begin(), sentence.end(),
                       [&](const Token& t) { return t.lemma == target; })) {
        continue;
      }
      for (const auto& token : sentence) {
        if (!token.open_class || token.lemma == target) continue;
        vf.add(form == TermForm::lemma ? token.lemma : token.surface);
      }
    }
  }
  return vf;
}

// ---------------------------------------------------------------------------

ContingencyStats::ContingencyStats(std::vector<FrequencyVector> vectors) : vectors_(std::move(vectors)) {
  for (const auto& v : vectors_) {
    for (const auto& [term, n] : v.counts) col_totals_[term] += n;
    grand_total_ += v.total;
  }
}

std::uint64_t ContingencyStats::col_total(std::string_view term) const {
  auto it = col_totals_.find(term);
  return it == col_totals_.end() ? 0 : it->second;
}

double expected_mean(const ContingencyStats& stats, std::size_t i, std::string_view term) {
  if (stats.grand_total() == 0) throw StatisticsError("expected mean undefined: contingency table is empty");
  return static_cast<double>(stats.row_total(i)) * static_cast<double>(stats.col_total(term)) /
         static_cast<double>(stats.grand_total());
}

double chi2_weight(const ContingencyStats& stats, std::size_t i, std::string_view term,
                   Chi2Variant variant) {
  const double m = expected_mean(stats, i, term);
  const double f = static_cast<double>(stats.freq(i, term));
  if (!(f > m)) return 0.0;
  const double excess = f - m;
  return variant == Chi2Variant::squared ? excess * excess / m : excess / m;
}

// ---------------------------------------------------------------------------

double TopicSignature::weight_of(std::string_view term) const {
  for (const auto& e : entries) {
    if (e.term == term) return e.weight;
  }
  return 0.0;
}

std::unordered_map<std::string, double> TopicSignature::weight_map() const {
  std::unordered_map<std::string, double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.emplace(e.term, e.weight);
  return out;
}

TopicSignature signature_for_row(const ContingencyStats& stats, std::size_t i, Chi2Variant variant,
                                 Granularity context) {
  TopicSignature sig;
  sig.collection = stats.vectors().at(i).collection;
  sig.variant = variant;
  sig.context = context;
  for (const auto& [term, n] : stats.vectors()[i].counts) {
    const double w = chi2_weight(stats, i, term, variant);
    if (w > 0.0) sig.entries.push_back({term, w});
  }
  sort_entries(sig.entries);
  return sig;
}

std::map<std::string, TopicSignature> build_signatures(
    const std::map<std::string, DocumentCollection>& collections, Granularity context,
    std::string_view target, Chi2Variant variant, TermForm form) {
  if (collections.size() < 2) {
    throw ContrastSetError("need at least two collections to build contrastive signatures, got " +
                           std::to_string(collections.size()));
  }
  std::vector<FrequencyVector> vectors;
  vectors.reserve(collections.size());
  for (const auto& [label, coll] : collections) {
    auto vf = frequency_vector(coll, context, target, form);
    vf.collection = label;
    vectors.push_back(std::move(vf));
  }
  const ContingencyStats stats(std::move(vectors));
  if (stats.grand_total() == 0) throw StatisticsError("no countable terms in any collection");

  std::map<std::string, TopicSignature> out;
  for (std::size_t i = 0; i < stats.rows(); ++i) {
    out.emplace(stats.vectors()[i].collection, signature_for_row(stats, i, variant, context));
  }
  return out;
}

TopicSignature build_word_signature(std::span<const Document> docs, std::string_view target,
                                    Chi2Variant variant) {
  DocumentCollection with{std::string(target)};
  DocumentCollection without("rest");
  for (const auto& doc : docs) {
    (doc.contains_lemma(target) ? with : without).add(doc);
  }
  if (with.empty() || without.empty()) {
    throw DegenerateSplitError("word signature for '" + std::string(target) + "': target occurs in " +
                               std::to_string(with.size()) + " of " + std::to_string(docs.size()) +
                               " documents; both sides of the split must be non-empty");
  }
  std::vector<FrequencyVector> vectors;
  vectors.push_back(frequency_vector(with, Granularity::document, target));
  vectors.push_back(frequency_vector(without, Granularity::document, target));
  const ContingencyStats stats(std::move(vectors));
  if (stats.grand_total() == 0) throw StatisticsError("reference corpus has no countable terms");
  return signature_for_row(stats, 0, variant, Granularity::document);
}

TopicSignature filter_by_word_signature(const TopicSignature& signature,
                                        const TopicSignature& word_signature, double cutoff) {
  const auto word_weights = word_signature.weight_map();
  TopicSignature out = signature;
  out.entries.clear();
  for (const auto& e : signature.entries) {
    auto it = word_weights.find(e.term);
    if (it != word_weights.end() && it->second > cutoff) out.entries.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string serialize_signature(const TopicSignature& signature) {
  std::string out = "# signature " + signature.collection + " variant=" +
                    std::string(to_string(signature.variant)) + " context=" +
                    std::string(to_string(signature.context)) + "\n";
  for (const auto& e : signature.entries) {
    out += e.term;
    out += '\t';
    out += format_weight(e.weight);
    out += '\n';
  }
  return out;
}

TopicSignature parse_signature(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty signature file");
  std::istringstream header(line);
  std::string hash, kw, collection, variant, context, extra;
  header >> hash >> kw >> collection >> variant >> context;
  if (hash != "#" || kw != "signature" || collection.empty() || variant.rfind("variant=", 0) != 0 ||
      context.rfind("context=", 0) != 0 || (header >> extra)) {
    throw ParseError(source, 1,
                     "expected '# signature <collection> variant=<squared|linear> context=<document|sentence>'");
  }
  TopicSignature sig;
  sig.collection = collection;
  try {
    sig.variant = parse_variant(variant.substr(8));
    sig.context = parse_granularity(context.substr(8));
  } catch (const ConfigError& e) {
    throw ParseError(source, 1, e.what());
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(source, line_no, "expected 'term<TAB>weight'");
    }
    const std::string weight_text = line.substr(tab + 1);
    char* end = nullptr;
    const double w = std::strtod(weight_text.c_str(), &end);
    if (end == weight_text.c_str() || *end != '\0' || !(w >= 0.0) || !std::isfinite(w)) {
      throw ParseError(source, line_no, "bad weight '" + weight_text + "'");
    }
    sig.entries.push_back({line.substr(0, tab), w});
  }
  return sig;
}

TopicSignature load_signature(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open signature " + path.string());
  return parse_signature(in, path.string());
}

void save_signature(const TopicSignature& signature, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_signature(signature);
}

}  // namespace topsig
